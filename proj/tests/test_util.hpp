#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ipq/vecmath.hpp"

namespace ipq::testing {

inline std::vector<double> random_unit(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> g;
  std::vector<double> v(d);
  double n = 0.0;
  do {
    for (auto& x : v) x = g(rng);
    n = norm(v);
  } while (n == 0.0);
  for (auto& x : v) x /= n;
  return v;
}

// Unit vector orthogonal to x, random otherwise.
inline std::vector<double> random_orthogonal(std::mt19937_64& rng, const std::vector<double>& x) {
  for (;;) {
    std::vector<double> v = random_unit(rng, x.size());
    const double c = dot(v, x);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * x[i];
    const double n = norm(v);
    if (n < 1e-3) continue;
    for (auto& e : v) e /= n;
    return v;
  }
}

// cos(θ)·x + sin(θ)·u for u ⟂ x, so ⟨x, result⟩ = cos θ up to rounding.
inline std::vector<double> rotate_towards(const std::vector<double>& x, const std::vector<double>& u, double theta) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::cos(theta) * x[i] + std::sin(theta) * u[i];
  return y;
}

inline std::vector<double> axis(std::size_t d, std::size_t i, double sign = 1.0) {
  std::vector<double> v(d, 0.0);
  v[i] = sign;
  return v;
}

}  // namespace ipq::testing
