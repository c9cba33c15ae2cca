#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "ipq/grid.hpp"
#include "ipq/quantizer.hpp"

namespace ipq {

/// Lexicographic rank of a magnitude composition, in [0, C(s+d, d)).
struct CompositionIndex {
  mpz_class value;

  friend bool operator==(const CompositionIndex& a, const CompositionIndex& b) { return a.value == b.value; }
};

/// An ℓ-bit code, stored left-aligned in ceil(ℓ/8) bytes with zero padding.
/// Bit 0 (the MSB of byte 0) is the sign of coordinate 1; the rank follows
/// big-endian.
class CodeWord {
 public:
  CodeWord(GridParams grid, std::vector<std::uint8_t> bytes, std::uint64_t bit_length);

  const GridParams& grid() const noexcept { return grid_; }
  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }
  std::uint64_t bit_length() const noexcept { return bit_length_; }
  bool bit(std::uint64_t pos) const noexcept { return (bytes_[pos / 8] >> (7 - pos % 8)) & 1u; }

  friend bool operator==(const CodeWord&, const CodeWord&) = default;

 private:
  GridParams grid_;
  std::vector<std::uint8_t> bytes_;
  std::uint64_t bit_length_;
};

/// ℓ = d + ceil(log2 C(s+d, d)), exact.
std::uint64_t code_length(std::uint32_t dim, const Rational& delta);

/// Lexicographic ranking of length-k nonnegative integer sequences with sum
/// at most b, onto [0, C(b+k, k)).
class CompositionCoder {
 public:
  CompositionCoder(std::uint64_t length, std::uint64_t budget);

  std::uint64_t length() const noexcept { return length_; }
  std::uint64_t budget() const noexcept { return budget_; }
  const mpz_class& count() const noexcept { return count_; }
  /// ceil(log2 count)
  std::uint64_t rank_bits() const noexcept { return rank_bits_; }

  CompositionIndex rank(std::span<const std::uint64_t> magnitudes) const;
  std::vector<std::uint64_t> unrank(const CompositionIndex& index) const;

 private:
  std::uint64_t length_;
  std::uint64_t budget_;
  mpz_class count_;
  std::uint64_t rank_bits_;
};

/// Bijective sign-bitmap plus enumerative-rank coding for one grid.
/// Immutable after construction; safe to share across threads.
class Codec {
 public:
  explicit Codec(GridParams grid);

  const GridParams& grid() const noexcept { return grid_; }
  /// C(s+d, d): the number of magnitude sequences with Σ <= s.
  const mpz_class& composition_count() const noexcept { return coder_.count(); }
  std::uint64_t rank_bits() const noexcept { return coder_.rank_bits(); }
  std::uint64_t code_length() const noexcept { return grid_.dim() + coder_.rank_bits(); }
  std::size_t record_bytes() const noexcept { return static_cast<std::size_t>((code_length() + 7) / 8); }

  CompositionIndex rank(std::span<const std::uint64_t> magnitudes) const { return coder_.rank(magnitudes); }
  std::vector<std::uint64_t> unrank(const CompositionIndex& index) const { return coder_.unrank(index); }

  CodeWord encode(const ZVector& z) const;
  ZVector decode(const CodeWord& code) const;

 private:
  GridParams grid_;
  CompositionCoder coder_;
};

}  // namespace ipq
