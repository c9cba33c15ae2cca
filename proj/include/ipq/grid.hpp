#pragma once

#include <cstdint>

#include "ipq/rational.hpp"

namespace ipq {

/// Dimension d, grid resolution δ and the magnitude budget
/// s = floor(d/δ + d/2), which bounds Σ|z_i| for every vector of norm <= 1.
class GridParams {
 public:
  GridParams(std::uint32_t dim, Rational delta);

  std::uint32_t dim() const noexcept { return dim_; }
  const Rational& delta() const noexcept { return delta_; }
  std::uint64_t budget() const noexcept { return budget_; }

  friend bool operator==(const GridParams&, const GridParams&) = default;

 private:
  std::uint32_t dim_;
  Rational delta_;
  std::uint64_t budget_;
};

}  // namespace ipq
