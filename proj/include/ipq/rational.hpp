#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace ipq {

/// Nonnegative rational with 32-bit numerator and denominator, always kept
/// in lowest terms so equality is structural.
class Rational {
 public:
  static constexpr std::uint32_t kMaxDenominator = 0xFFFFFFFFu;

  constexpr Rational() = default;
  Rational(std::uint64_t num, std::uint64_t den);

  std::uint32_t num() const noexcept { return num_; }
  std::uint32_t den() const noexcept { return den_; }

  /// num/den as one correctly-rounded binary64 division.
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string to_string() const;

  /// Accepts "p/q" or a plain decimal such as "0.05"; decimals are exact.
  static Rational parse(std::string_view text);

  /// Largest p/q <= value with q <= kMaxDenominator.
  static Rational floor_of(double value);

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    return static_cast<std::uint64_t>(a.num_) * b.den_ <=> static_cast<std::uint64_t>(b.num_) * a.den_;
  }

 private:
  std::uint32_t num_ = 0;
  std::uint32_t den_ = 1;
};

}  // namespace ipq
