#pragma once

#include <cstddef>
#include <optional>

#include <span>
#include <utility>
#include <vector>

#include "ipq/codec.hpp"
#include "ipq/quantizer.hpp"

namespace ipq {

enum class Decision { PassesThreshold, Eliminated };

struct PairVerdict {
  Decision decision;
  double estimate;   // ⟨f(x), f(y)⟩
  double threshold;  // t actually applied
};

/// ⟨f(x), f(y)⟩ from two codes of the codec's grid.
double estimate_inner(const Codec& codec, const CodeWord& x, const CodeWord& y);

/// Survives iff the estimate is >= t. When the codec grid differs from the
/// planned one, t is re-derived for that grid; the grid must still satisfy
/// shared_grid_ok for (α, β).
PairVerdict distinguish(const Codec& codec, const CodeWord& x, const CodeWord& y, const ThresholdSpec& spec);

/// Bound on |⟨f(x),f(y)⟩ − ⟨x,y⟩|: ‖x−y‖·δ + δ²/2, with ‖x−y‖ <= 2 when no
/// hint is given.
double worst_case_error(const Rational& delta, std::optional<double> distance_hint = std::nullopt);

struct IndexPair {
  std::size_t first;
  std::size_t second;

  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

struct FilteredPair {
  std::size_t pair;  // position in the input sequence
  PairVerdict verdict;
};

/// Candidate-pair filter. Both lists keep input order.
struct FilterResult {
  std::vector<FilteredPair> survivors;
  std::vector<FilteredPair> eliminated;
};

FilterResult filter_pairs(const Codec& codec, std::span<const std::pair<CodeWord, CodeWord>> pairs,
                          const ThresholdSpec& spec);

/// Same filter over pairs of indices into `codes`; every referenced code is
/// decoded once.
FilterResult filter_pairs(const Codec& codec, std::span<const CodeWord> codes, std::span<const IndexPair> pairs,
                          const ThresholdSpec& spec);

}  // namespace ipq
