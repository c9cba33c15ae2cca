#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ipq/quantizer.hpp"

namespace ipq {

struct AngleGap {
  double theta;  // arccos β − arccos α
  double bound;  // (π/2)(α−β)/√(1−β)
  double alpha;
  double beta;
};

/// Requires 0 <= β < α <= 1.
AngleGap theta_gap(double alpha, double beta);

/// Unit y in the plane of x1, x2 with ⟨x1,y⟩ = β and ⟨x2,y⟩ >= α.
/// The angle between x1 and x2 must lie in [Θ, arccos β + arccos α].
UnitVector witness(std::span<const double> x1, std::span<const double> x2, double beta, double alpha);

/// log₂ of c_{d−1}·d·(2(1−cos θ))^{(d−1)/2}, c_n the volume of the unit n-ball.
double cap_area_bound(double theta, std::uint32_t d);

/// log₂ of (2(1−cos θ))^{−(d−1)/2}/(3√d). Negative values mean no information.
double code_size_lb(double theta, std::uint32_t d);

struct SpaceBound {
  double bits;        // code_size_lb(Θ, d) clamped at 0
  double asymptotic;  // d·log₂(√(1−β)/(α−β))
  double theta;
};

SpaceBound space_lb(double alpha, double beta, std::uint32_t d);

struct SphereCode {
  std::vector<UnitVector> points;
  double min_angle;        // smallest pairwise angle among points; π for one point
  bool budget_too_small;   // candidate set too sparse to cover the sphere at θ
};

/// Greedy θ-separated set over a fixed low-discrepancy candidate sequence of
/// `candidate_budget` points, d in {2, 3, 4}.
SphereCode greedy_sphere_code(std::uint32_t d, double theta, std::size_t candidate_budget);

}  // namespace ipq
