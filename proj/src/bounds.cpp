#include "ipq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ipq/error.hpp"
#include "ipq/vecmath.hpp"

namespace ipq {

namespace {

using std::numbers::pi;

constexpr double kWitnessTolerance = 1e-10;
constexpr double kMinSine = 1e-6;

void check_thresholds(double alpha, double beta) {
  if (!(std::isfinite(alpha) && std::isfinite(beta) && beta >= 0.0 && beta < alpha && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidThresholds,
                "need 0 <= beta < alpha <= 1, got alpha=" + std::to_string(alpha) + " beta=" + std::to_string(beta));
  }
}

// log₂ of the volume of the unit n-ball.
double log2_ball_volume(double n) { return ((n / 2.0) * std::log(pi) - std::lgamma(n / 2.0 + 1.0)) / std::numbers::ln2; }

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base), scale = inv, out = 0.0;
  while (i > 0) {
    out += static_cast<double>(i % base) * scale;
    i /= base;
    scale *= inv;
  }
  return out;
}

std::vector<double> candidate(std::uint32_t d, std::size_t i, std::size_t n) {
  const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  switch (d) {
    case 2: {
      const double a = 2.0 * pi * static_cast<double>(i) / static_cast<double>(n);
      return {std::cos(a), std::sin(a)};
    }
    case 3: {
      const double z = 1.0 - 2.0 * u;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = 2.0 * pi * static_cast<double>(i) / std::numbers::phi;
      return {r * std::cos(a), r * std::sin(a), z};
    }
    default: {
      const double u1 = radical_inverse(i + 1, 2), u2 = radical_inverse(i + 1, 3), u3 = radical_inverse(i + 1, 5);
      const double r1 = std::sqrt(u1), r2 = std::sqrt(1.0 - u1);
      return {r1 * std::cos(2.0 * pi * u2), r1 * std::sin(2.0 * pi * u2), r2 * std::cos(2.0 * pi * u3),
              r2 * std::sin(2.0 * pi * u3)};
    }
  }
}

// Typical spacing of n roughly uniform points on S^{d−1}.
double nominal_spacing(std::uint32_t d, std::size_t n) {
  const double area = std::exp2(std::log2(static_cast<double>(d)) + log2_ball_volume(d));
  return std::pow(area / static_cast<double>(n), 1.0 / static_cast<double>(d - 1));
}

}  // namespace

AngleGap theta_gap(double alpha, double beta) {
  check_thresholds(alpha, beta);
  const double theta = std::acos(beta) - std::acos(alpha);
  const double bound = (pi / 2.0) * (alpha - beta) / std::sqrt(1.0 - beta);
  return {theta, bound, alpha, beta};
}

UnitVector witness(std::span<const double> x1, std::span<const double> x2, double beta, double alpha) {
  check_thresholds(alpha, beta);
  if (x1.size() != x2.size()) throw Error(ErrorCode::DimensionMismatch, "witness inputs differ in dimension");
  const double c = std::clamp(dot(x1, x2), -1.0, 1.0);
  const double theta = std::acos(c);
  const double s = std::sin(theta);
  if (s < kMinSine) throw Error(ErrorCode::DegenerateAngle, "x1 and x2 are (anti)parallel");
  const double lo = std::acos(beta) - std::acos(alpha);
  const double hi = std::acos(beta) + std::acos(alpha);
  if (theta < lo - kWitnessTolerance || theta > hi + kWitnessTolerance) {
    throw Error(ErrorCode::GapViolated, "angle " + std::to_string(theta) + " outside [" + std::to_string(lo) +
                                            ", " + std::to_string(hi) + "]");
  }
  const double r = std::sqrt(1.0 - beta * beta);
  const double a1 = beta - r * c / s;
  const double a2 = r / s;
  UnitVector y;
  y.coords.resize(x1.size());
  for (std::size_t i = 0; i < x1.size(); ++i) y.coords[i] = a1 * x1[i] + a2 * x2[i];
  return y;
}

double cap_area_bound(double theta, std::uint32_t d) {
  const double n = static_cast<double>(d);
  return log2_ball_volume(n - 1.0) + std::log2(n) + ((n - 1.0) / 2.0) * std::log2(2.0 * (1.0 - std::cos(theta)));
}

double code_size_lb(double theta, std::uint32_t d) {
  const double n = static_cast<double>(d);
  return -((n - 1.0) / 2.0) * std::log2(2.0 * (1.0 - std::cos(theta))) - std::log2(3.0 * std::sqrt(n));
}

SpaceBound space_lb(double alpha, double beta, std::uint32_t d) {
  const AngleGap gap = theta_gap(alpha, beta);
  return {std::max(0.0, code_size_lb(gap.theta, d)),
          static_cast<double>(d) * std::log2(std::sqrt(1.0 - beta) / (alpha - beta)), gap.theta};
}

SphereCode greedy_sphere_code(std::uint32_t d, double theta, std::size_t candidate_budget) {
  if (d < 2 || d > 4) throw Error(ErrorCode::InvalidArgument, "greedy sphere code supports d in {2, 3, 4}");
  if (!(theta > 0.0 && theta < pi / 2.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, pi/2)");
  if (candidate_budget == 0) throw Error(ErrorCode::InvalidArgument, "candidate budget must be positive");
  const double limit = std::cos(theta);
  SphereCode code{{}, pi, nominal_spacing(d, candidate_budget) > theta / 4.0};
  double max_dot = -1.0;
  for (std::size_t i = 0; i < candidate_budget; ++i) {
    std::vector<double> p = candidate(d, i, candidate_budget);
    double worst = -1.0;
    bool ok = true;
    for (const auto& q : code.points) {
      const double ip = dot(p, q.coords);
      if (ip >= limit) {
        ok = false;
        break;
      }
      worst = std::max(worst, ip);
    }
    if (!ok) continue;
    if (!code.points.empty()) max_dot = std::max(max_dot, worst);
    code.points.push_back({std::move(p)});
  }
  if (code.points.size() > 1) code.min_angle = std::acos(std::clamp(max_dot, -1.0, 1.0));
  return code;
}

}  // namespace ipq
