#include "ipq/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "ipq/error.hpp"

namespace ipq {

// Notation: T(b, k) = C(b+k, k) counts length-k magnitude sequences with
// sum <= b. Ranking walks the coordinates left to right keeping X = T(b, k)
// for the remaining budget b and remaining length k, and adds
//   Σ_{v<a} T(b−v, k−1) = T(b, k) − T(b−a, k)
// for each coordinate value a (the hockey-stick collapse).
namespace {

// Beyond this many factors the falling-factorial ratio is costlier than a
// fresh binomial.
constexpr std::uint64_t kDirectBinomialFactor = 2;

// Scratch buffers reused across coordinates so allocations happen once per
// rank/unrank call.
struct Workspace {
  std::vector<mp_limb_t> num, den;
  mpz_class tmp;
};

// Writes Π_{j<count} (top − j) into `limbs` (little-endian) and returns a
// read-only mpz view of it. As many factors as fit are packed per limb.
mpz_srcptr falling_factorial(std::vector<mp_limb_t>& limbs, mpz_ptr view, std::uint64_t top,
                             std::uint64_t count) {
  limbs.assign(1, 1);
  mp_size_t size = 1;
  auto mul_limb = [&](std::uint64_t chunk) {
    const mp_limb_t carry = mpn_mul_1(limbs.data(), limbs.data(), size, static_cast<mp_limb_t>(chunk));
    if (carry != 0) {
      limbs.push_back(carry);
      ++size;
    }
  };
  const unsigned factor_bits = static_cast<unsigned>(std::bit_width(top));
  const unsigned per_chunk = factor_bits == 0 ? 1 : std::max(1u, 64u / factor_bits);
  std::uint64_t j = 0;
  while (j < count) {
    std::uint64_t chunk = 1;
    for (unsigned t = 0; t < per_chunk && j < count; ++t, ++j) chunk *= top - j;
    mul_limb(chunk);
  }
  return mpz_roinit_n(view, limbs.data(), size);
}

// x holds T(b, k); replaces it with T(b − a, k).
void lower_budget(mpz_class& x, std::uint64_t b, std::uint64_t k, std::uint64_t a, Workspace& ws) {
  if (a == 0) return;
  if (a > kDirectBinomialFactor * k + 8) {
    mpz_bin_uiui(x.get_mpz_t(), b - a + k, k);
    return;
  }
  if (a <= 2) {
    for (std::uint64_t j = 0; j < a; ++j) {
      mpz_mul_ui(x.get_mpz_t(), x.get_mpz_t(), b - j);
      mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), b + k - j);
    }
    return;
  }
  __mpz_struct num_view, den_view;
  mpz_srcptr num = falling_factorial(ws.num, &num_view, b, a);
  mpz_srcptr den = falling_factorial(ws.den, &den_view, b + k, a);
  mpz_mul(ws.tmp.get_mpz_t(), x.get_mpz_t(), num);
  mpz_divexact(x.get_mpz_t(), ws.tmp.get_mpz_t(), den);
}

// y holds T(b, k); replaces it with T(b, k − 1).
void drop_length(mpz_class& y, std::uint64_t b, std::uint64_t k) {
  mpz_mul_ui(y.get_mpz_t(), y.get_mpz_t(), k);
  mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), b + k);
}

double log_of(const mpz_class& v) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

struct BudgetEstimate {
  std::uint64_t value;
  // T(value − 1, k) < target is certain from the floating-point margin alone
  bool minimal;
};

// Smallest b' in [0, b] with T(b', k) >= target, estimated in floating
// point. log T(y, k) is increasing and concave in y, so Newton steps taken
// after the first one approach the root monotonically from below.
BudgetEstimate estimate_budget(std::uint64_t b, std::uint64_t k, double log_target) {
  int sign = 0;
  const double kk = static_cast<double>(k);
  const double log_k_fact = ::lgamma_r(kk + 1.0, &sign);
  auto excess = [&](double y, double* scale) {
    const double hi = ::lgamma_r(y + kk + 1.0, &sign);
    const double lo = ::lgamma_r(y + 1.0, &sign);
    if (scale) *scale = std::abs(hi) + std::abs(lo) + std::abs(log_k_fact) + std::abs(log_target);
    return hi - lo - log_k_fact - log_target;
  };
  double y = static_cast<double>(b);
  for (int iter = 0; iter < 8; ++iter) {
    const double f = excess(y, nullptr);
    const double slope = std::log((y + kk + 0.5) / (y + 0.5));
    double next = y - f / slope;
    if (next < 0.0) next = 0.0;
    const bool done = std::abs(next - y) < 0.25;
    y = next;
    if (done) break;
  }
  const double rounded = std::ceil(y);
  if (rounded <= 0.0) return {0, true};
  if (rounded >= static_cast<double>(b)) return {b, false};
  const auto value = static_cast<std::uint64_t>(rounded);
  double scale = 0.0;
  const double below = excess(static_cast<double>(value - 1), &scale);
  return {value, below < -(1e-12 * scale + 1e-9)};
}

std::uint64_t bit_length_of_count_minus_one(const mpz_class& count) {
  const mpz_class top = count - 1;
  if (top == 0) return 0;
  return mpz_sizeinbase(top.get_mpz_t(), 2);
}

}  // namespace

CodeWord::CodeWord(GridParams grid, std::vector<std::uint8_t> bytes, std::uint64_t bit_length)
    : grid_(grid), bytes_(std::move(bytes)), bit_length_(bit_length) {
  if (bytes_.size() != (bit_length_ + 7) / 8) {
    throw Error(ErrorCode::MalformedCode, "code byte size does not match its bit length");
  }
}

std::uint64_t code_length(std::uint32_t dim, const Rational& delta) {
  const GridParams grid(dim, delta);
  mpz_class count;
  mpz_bin_uiui(count.get_mpz_t(), grid.budget() + dim, dim);
  return dim + bit_length_of_count_minus_one(count);
}

CompositionCoder::CompositionCoder(std::uint64_t length, std::uint64_t budget) : length_(length), budget_(budget) {
  if (length == 0) throw Error(ErrorCode::InvalidArgument, "composition length must be positive");
  mpz_bin_uiui(count_.get_mpz_t(), budget_ + length_, length_);
  rank_bits_ = bit_length_of_count_minus_one(count_);
}

Codec::Codec(GridParams grid) : grid_(grid), coder_(grid.dim(), grid.budget()) {}

CompositionIndex CompositionCoder::rank(std::span<const std::uint64_t> magnitudes) const {
  const std::uint64_t d = length_;
  if (magnitudes.size() != d) {
    throw Error(ErrorCode::DimensionMismatch, "composition length differs from coder length");
  }
  std::uint64_t remaining = budget_;
  for (const auto a : magnitudes) {
    if (a > remaining) {
      throw Error(ErrorCode::BudgetExceeded, "composition sum exceeds budget s=" + std::to_string(budget_));
    }
    remaining -= a;
  }

  CompositionIndex out{0};
  Workspace ws;
  mpz_class x = count_;
  mpz_class y;
  std::uint64_t b = budget_;
  for (std::uint64_t i = 0; i < d; ++i) {
    const std::uint64_t k = d - i;
    const std::uint64_t a = magnitudes[i];
    if (a > 0) {
      y = x;
      lower_budget(y, b, k, a, ws);
      out.value += x;
      out.value -= y;
      b -= a;
      x.swap(y);
    }
    if (k > 1) drop_length(x, b, k);
  }
  return out;
}

std::vector<std::uint64_t> CompositionCoder::unrank(const CompositionIndex& index) const {
  if (index.value < 0 || index.value >= count_) {
    throw Error(ErrorCode::IndexOutOfRange, "composition index outside [0, C(s+d, d))");
  }
  const std::uint64_t d = length_;
  std::vector<std::uint64_t> out(d);
  mpz_class rem = index.value;
  mpz_class x = count_;
  mpz_class target, y, probe;
  Workspace ws;
  std::uint64_t b = budget_;
  for (std::uint64_t i = 0; i < d; ++i) {
    const std::uint64_t k = d - i;
    // Largest a with T(b, k) − T(b − a, k) <= rem, i.e. the smallest b' with
    // T(b', k) >= X − rem.
    target = x - rem;
    std::uint64_t next_b;
    if (k == 1) {
      next_b = target.get_ui() - 1;  // T(b', 1) = b' + 1
      y = target;
    } else {
      const BudgetEstimate guess = estimate_budget(b, k, log_of(target));
      next_b = guess.value;
      y = x;
      lower_budget(y, b, k, b - next_b, ws);
      bool minimal = guess.minimal;
      while (y < target) {
        mpz_mul_ui(y.get_mpz_t(), y.get_mpz_t(), next_b + k + 1);
        mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), next_b + 1);
        ++next_b;
        minimal = true;
      }
      while (!minimal && next_b > 0) {
        probe = y;
        mpz_mul_ui(probe.get_mpz_t(), probe.get_mpz_t(), next_b);
        mpz_divexact_ui(probe.get_mpz_t(), probe.get_mpz_t(), next_b + k);
        if (probe < target) break;
        y.swap(probe);
        --next_b;
      }
    }
    out[i] = b - next_b;
    rem -= x;
    rem += y;
    b = next_b;
    x.swap(y);
    if (k > 1) drop_length(x, b, k);
  }
  return out;
}

CodeWord Codec::encode(const ZVector& z) const {
  if (!(z.grid() == grid_)) throw Error(ErrorCode::GridMismatch, "ZVector grid differs from codec grid");
  const std::uint64_t d = grid_.dim();
  std::vector<std::uint64_t> mags(d);
  for (std::uint64_t i = 0; i < d; ++i) {
    const std::int64_t c = z[i];
    mags[i] = c < 0 ? static_cast<std::uint64_t>(-(c + 1)) + 1 : static_cast<std::uint64_t>(c);
  }
  const CompositionIndex idx = coder_.rank(mags);

  const std::uint64_t ell = code_length();
  const std::size_t nbytes = record_bytes();
  const std::uint64_t pad = nbytes * 8 - ell;
  mpz_class packed = idx.value;
  packed <<= pad;
  for (std::uint64_t i = 0; i < d; ++i) {
    if (z[i] < 0) mpz_setbit(packed.get_mpz_t(), pad + ell - 1 - i);
  }
  std::vector<std::uint8_t> bytes(nbytes, 0);
  std::size_t written = 0;
  const std::size_t used = (mpz_sizeinbase(packed.get_mpz_t(), 2) + 7) / 8;
  if (packed != 0) mpz_export(bytes.data() + (nbytes - used), &written, 1, 1, 1, 0, packed.get_mpz_t());
  return CodeWord(grid_, std::move(bytes), ell);
}

ZVector Codec::decode(const CodeWord& code) const {
  if (!(code.grid() == grid_)) throw Error(ErrorCode::GridMismatch, "code grid differs from codec grid");
  const std::uint64_t ell = code_length();
  if (code.bit_length() != ell || code.bytes().size() != record_bytes()) {
    throw Error(ErrorCode::MalformedCode, "code length " + std::to_string(code.bit_length()) +
                                              " differs from expected " + std::to_string(ell));
  }
  const std::uint64_t d = grid_.dim();
  const std::uint64_t pad = record_bytes() * 8 - ell;

  mpz_class packed;
  mpz_import(packed.get_mpz_t(), code.bytes().size(), 1, 1, 1, 0, code.bytes().data());
  for (std::uint64_t p = 0; p < pad; ++p) {
    if (mpz_tstbit(packed.get_mpz_t(), p)) throw Error(ErrorCode::MalformedCode, "nonzero padding bits");
  }
  mpz_class rank_field;
  mpz_fdiv_q_2exp(rank_field.get_mpz_t(), packed.get_mpz_t(), pad);
  mpz_fdiv_r_2exp(rank_field.get_mpz_t(), rank_field.get_mpz_t(), coder_.rank_bits());
  if (rank_field >= coder_.count()) throw Error(ErrorCode::MalformedCode, "rank field out of range");

  const auto mags = coder_.unrank(CompositionIndex{rank_field});
  std::vector<std::int64_t> coords(d);
  for (std::uint64_t i = 0; i < d; ++i) {
    const bool negative = code.bit(i);
    if (negative && mags[i] == 0) throw Error(ErrorCode::MalformedCode, "sign bit set on a zero coordinate");
    coords[i] = negative ? -static_cast<std::int64_t>(mags[i]) : static_cast<std::int64_t>(mags[i]);
  }
  return ZVector(grid_, std::move(coords));
}

}  // namespace ipq
