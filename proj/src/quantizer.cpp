#include "ipq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <gmpxx.h>

#include "ipq/error.hpp"
#include "ipq/vecmath.hpp"

namespace ipq {

namespace {

// Shrinks a binary64 result of a short formula below the exact real value it
// approximates; the formulas here carry at most a few ulps of error.
constexpr double kRoundDown = 1.0 - 0x1p-50;

void check_thresholds(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !(0.0 <= beta) || !(beta < alpha) ||
      !(alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidThresholds, "need 0 <= beta < alpha <= 1, got alpha=" +
                                                  std::to_string(alpha) + " beta=" + std::to_string(beta));
  }
}

// floor(v + 1/2) for the exact real v; avoids the rounding of v + 0.5.
std::int64_t round_half_up(double v) {
  const double fl = std::floor(v);
  return static_cast<std::int64_t>(fl) + (v - fl >= 0.5 ? 1 : 0);
}

}  // namespace

ZVector::ZVector(GridParams grid, std::vector<std::int64_t> coords)
    : grid_(grid), coords_(std::move(coords)) {
  if (coords_.size() != grid_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "z has " + std::to_string(coords_.size()) +
                                                  " coordinates, grid has d=" + std::to_string(grid_.dim()));
  }
  std::uint64_t total = 0;
  for (const auto c : coords_) {
    const std::uint64_t mag = c < 0 ? static_cast<std::uint64_t>(-(c + 1)) + 1 : static_cast<std::uint64_t>(c);
    if (mag > grid_.budget() || total > grid_.budget() - mag) {
      throw Error(ErrorCode::BudgetExceeded,
                  "sum of |z_i| exceeds budget s=" + std::to_string(grid_.budget()));
    }
    total += mag;
  }
}

bool ZVector::is_zero() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](std::int64_t c) { return c == 0; });
}

ZVector quantize(std::span<const double> x, const GridParams& grid) {
  if (x.size() != grid.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector has d=" + std::to_string(x.size()) + ", grid has d=" + std::to_string(grid.dim()));
  }
  for (const double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "input has NaN or infinite coordinate");
  }
  const double length = norm(x);
  if (length > 1.0 + kNormSlack) {
    throw Error(ErrorCode::NormTooLarge, "input norm " + std::to_string(length) + " exceeds 1 + 2^-20");
  }

  std::vector<double> rescaled;
  if (length > 1.0) {
    rescaled.assign(x.begin(), x.end());
    for (double& v : rescaled) v /= length;
    x = rescaled;
  }

  const double scale = std::sqrt(static_cast<double>(grid.dim())) / grid.delta().to_double();
  std::vector<std::int64_t> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = round_half_up(x[i] * scale);
  return ZVector(grid, std::move(z));
}

UnitVector reconstruct(const ZVector& z) {
  unsigned __int128 sumsq = 0;
  for (const auto c : z.coords()) {
    const auto mag = static_cast<unsigned __int128>(c < 0 ? -c : c);
    sumsq += mag * mag;
  }
  if (sumsq == 0) throw Error(ErrorCode::ZeroVector, "cannot normalize the zero grid vector");
  const double length = std::sqrt(static_cast<double>(sumsq));
  UnitVector out;
  out.coords.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out.coords[i] = static_cast<double>(z[i]) / length;
  return out;
}

double ThresholdSpec::threshold_for(const Rational& grid_delta) const noexcept {
  const double delta_d = grid_delta.to_double();
  return alpha - delta_d * std::sqrt(2.0 - 2.0 * alpha) - delta_d * delta_d / 2.0;
}

ThresholdSpec plan_distinguish(double alpha, double beta) {
  check_thresholds(alpha, beta);
  const double ideal = (alpha - beta) / (2.0 * std::sqrt(2.0 - 2.0 * beta));
  const Rational delta = Rational::floor_of(ideal * kRoundDown);
  if (delta.num() == 0) {
    throw Error(ErrorCode::InvalidThresholds, "alpha - beta too small for a 32-bit grid resolution");
  }
  ThresholdSpec spec{alpha, beta, delta, 0.0};
  spec.threshold = spec.threshold_for(delta);
  return spec;
}

EstimatePlan plan_estimate(double epsilon) {
  if (!std::isfinite(epsilon) || !(epsilon > 0.0) || !(epsilon <= 1.0)) {
    throw Error(ErrorCode::InvalidEpsilon, "epsilon must lie in (0, 1], got " + std::to_string(epsilon));
  }
  const Rational delta = Rational::floor_of(epsilon / 4.0);
  if (delta.num() == 0) throw Error(ErrorCode::InvalidEpsilon, "epsilon too small for a 32-bit grid resolution");
  return {epsilon, delta};
}

bool shared_grid_ok(const Rational& delta, double alpha, double beta) {
  check_thresholds(alpha, beta);
  const double rhs = (alpha - beta) / (std::sqrt(2.0 - 2.0 * alpha) + std::sqrt(2.0 - 2.0 * beta));
  return mpq_class(delta.num(), delta.den()) < mpq_class(rhs * kRoundDown);
}

}  // namespace ipq
