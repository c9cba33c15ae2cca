#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ipq/grid.hpp"
#include "ipq/rational.hpp"

namespace ipq {

/// Integer grid coordinates z_i = floor(x_i * sqrt(d)/δ + 1/2) for one vector.
/// Σ|z_i| <= grid.budget() is checked on construction.
class ZVector {
 public:
  ZVector(GridParams grid, std::vector<std::int64_t> coords);

  const GridParams& grid() const noexcept { return grid_; }
  std::span<const std::int64_t> coords() const noexcept { return coords_; }
  std::int64_t operator[](std::size_t i) const noexcept { return coords_[i]; }
  std::size_t size() const noexcept { return coords_.size(); }
  bool is_zero() const noexcept;

  friend bool operator==(const ZVector&, const ZVector&) = default;

 private:
  GridParams grid_;
  std::vector<std::int64_t> coords_;
};

/// Coordinates with |‖x‖₂ − 1| <= 2⁻⁴⁰.
struct UnitVector {
  std::vector<double> coords;

  std::size_t size() const noexcept { return coords.size(); }
  operator std::span<const double>() const noexcept { return coords; }
};

inline constexpr double kUnitTolerance = 0x1p-40;
inline constexpr double kNormSlack = 0x1p-20;

/// Rounds x onto the grid. Inputs with norm in (1, 1 + 2⁻²⁰] are rescaled to
/// unit norm first. Uses binary64 only; build with FMA contraction off.
ZVector quantize(std::span<const double> x, const GridParams& grid);

/// f = z/‖z‖, the direction of x′ = z·δ/√d.
UnitVector reconstruct(const ZVector& z);

/// A planned solution to an (α,β) distinguishing instance.
struct ThresholdSpec {
  double alpha;
  double beta;
  Rational delta;
  double threshold;

  /// The threshold a grid of resolution `grid_delta` must use for (α, β).
  double threshold_for(const Rational& grid_delta) const noexcept;
};

/// δ = (α−β)/(2√(2−2β)) rounded down to a Rational, t = α − δ√(2−2α) − δ²/2.
ThresholdSpec plan_distinguish(double alpha, double beta);

/// Grid resolution that estimates every inner product within additive ε.
struct EstimatePlan {
  double epsilon;
  Rational delta;

  GridParams grid(std::uint32_t dim) const { return GridParams(dim, delta); }
};

EstimatePlan plan_estimate(double epsilon);

/// True iff δ < (α′−β′)/(√(2−2α′) + √(2−2β′)), with the right-hand side
/// rounded toward zero.
bool shared_grid_ok(const Rational& delta, double alpha, double beta);

}  // namespace ipq
