#include "ipq/rational.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include <gmpxx.h>

#include "ipq/error.hpp"

namespace ipq {

Rational::Rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (num > kMaxDenominator || den > kMaxDenominator) {
    throw Error(ErrorCode::InvalidArgument, "rational does not fit 32-bit numerator/denominator");
  }
  num_ = static_cast<std::uint32_t>(num);
  den_ = static_cast<std::uint32_t>(den);
}

std::string Rational::to_string() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

namespace {

std::uint64_t parse_u64(std::string_view digits, std::string_view whole) {
  std::uint64_t value = 0;
  const auto* end = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(digits.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::ParseError, "not a rational: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty rational");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_u64(text.substr(0, slash), text), parse_u64(text.substr(slash + 1), text));
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_u64(text, text), 1);

  std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part = text.substr(dot + 1);
  if (frac_part.size() > 18 || (int_part.empty() && frac_part.empty())) {
    throw Error(ErrorCode::ParseError, "not a rational: '" + std::string(text) + "'");
  }
  std::uint64_t scale = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
  const std::uint64_t whole = int_part.empty() ? 0 : parse_u64(int_part, text);
  const std::uint64_t frac = frac_part.empty() ? 0 : parse_u64(frac_part, text);
  const unsigned __int128 num = static_cast<unsigned __int128>(whole) * scale + frac;
  std::uint64_t n = static_cast<std::uint64_t>(num);
  std::uint64_t d = scale;
  if (num >> 64) throw Error(ErrorCode::ParseError, "rational out of range: '" + std::string(text) + "'");
  const std::uint64_t g = std::gcd(n, d);
  return Rational(n / g, d / g);
}

Rational Rational::floor_of(double value) {
  if (!std::isfinite(value) || value < 0.0 || value > static_cast<double>(kMaxDenominator)) {
    throw Error(ErrorCode::InvalidArgument, "cannot represent value as a 32-bit rational");
  }
  const mpq_class v(value);  // exact: every finite double is a dyadic rational
  const mpz_class base = v.get_num() / v.get_den();
  if (base == v) return Rational(base.get_ui(), 1);

  // Stern-Brocot descent with batched steps; lo <= v < hi throughout.
  mpz_class lo_p = base, lo_q = 1, hi_p = base + 1, hi_q = 1;
  const mpz_class max_q = kMaxDenominator;
  while (true) {
    const mpz_class m_p = lo_p + hi_p, m_q = lo_q + hi_q;
    if (m_q > max_q) break;
    if (mpq_class(m_p, m_q) <= v) {
      // largest k with (lo + k*hi) <= v
      const mpq_class gap = v * lo_q - lo_p;
      const mpq_class unit = hi_p - v * hi_q;
      mpz_class k = mpz_class(gap.get_num() * unit.get_den()) / mpz_class(gap.get_den() * unit.get_num());
      const mpz_class k_den = (max_q - lo_q) / hi_q;
      if (k > k_den) k = k_den;
      lo_p += k * hi_p;
      lo_q += k * hi_q;
      if (mpq_class(lo_p, lo_q) == v) break;
    } else {
      // largest k with (hi + k*lo) > v
      const mpq_class gap = hi_p - v * hi_q;
      const mpq_class unit = v * lo_q - lo_p;
      const mpq_class ratio = gap / unit;
      mpz_class k = ratio.get_num() / ratio.get_den();
      if (k * ratio.get_den() == ratio.get_num()) k -= 1;
      const mpz_class k_den = (max_q - hi_q) / lo_q;
      if (k > k_den) k = k_den;
      hi_p += k * lo_p;
      hi_q += k * lo_q;
    }
  }
  return Rational(lo_p.get_ui(), lo_q.get_ui());
}

}  // namespace ipq
