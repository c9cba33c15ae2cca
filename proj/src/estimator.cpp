#include "ipq/estimator.hpp"

#include <algorithm>
#include <string>

#include "ipq/error.hpp"
#include "ipq/vecmath.hpp"
#include "ipq/parallel.hpp"

namespace ipq {

namespace {

void require_grid(const Codec& codec, const CodeWord& code) {
  if (!(code.grid() == codec.grid())) throw Error(ErrorCode::GridMismatch, "code grid differs from codec grid");
}

double threshold_for_grid(const Codec& codec, const ThresholdSpec& spec) {
  const Rational& delta = codec.grid().delta();
  if (!shared_grid_ok(delta, spec.alpha, spec.beta)) {
    throw Error(ErrorCode::SpecIncompatible,
                "grid delta " + delta.to_string() + " too coarse for the requested (alpha, beta)");
  }
  return delta == spec.delta ? spec.threshold : spec.threshold_for(delta);
}

PairVerdict verdict_of(double estimate, double threshold) {
  return {estimate >= threshold ? Decision::PassesThreshold : Decision::Eliminated, estimate, threshold};
}

FilterResult partition(std::vector<PairVerdict>&& verdicts) {
  FilterResult out;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    auto& bucket = verdicts[i].decision == Decision::PassesThreshold ? out.survivors : out.eliminated;
    bucket.push_back({i, verdicts[i]});
  }
  return out;
}

}  // namespace

double estimate_inner(const Codec& codec, const CodeWord& x, const CodeWord& y) {
  require_grid(codec, x);
  require_grid(codec, y);
  const UnitVector fx = reconstruct(codec.decode(x));
  const UnitVector fy = reconstruct(codec.decode(y));
  return dot(fx.coords, fy.coords);
}

PairVerdict distinguish(const Codec& codec, const CodeWord& x, const CodeWord& y, const ThresholdSpec& spec) {
  require_grid(codec, x);
  require_grid(codec, y);
  const double t = threshold_for_grid(codec, spec);
  return verdict_of(estimate_inner(codec, x, y), t);
}

double worst_case_error(const Rational& delta, std::optional<double> distance_hint) {
  const double dist = distance_hint.value_or(2.0);
  if (!(dist >= 0.0 && dist <= 2.0)) {
    throw Error(ErrorCode::InvalidArgument, "distance hint must lie in [0, 2], got " + std::to_string(dist));
  }
  const double d = delta.to_double();
  return dist * d + d * d / 2.0;
}

FilterResult filter_pairs(const Codec& codec, std::span<const std::pair<CodeWord, CodeWord>> pairs,
                          const ThresholdSpec& spec) {
  const double t = threshold_for_grid(codec, spec);
  for (const auto& [x, y] : pairs) {
    require_grid(codec, x);
    require_grid(codec, y);
  }
  std::vector<PairVerdict> verdicts(pairs.size());
  detail::parallel_for(pairs.size(), [&](std::size_t i) {
    verdicts[i] = verdict_of(estimate_inner(codec, pairs[i].first, pairs[i].second), t);
  });
  return partition(std::move(verdicts));
}

FilterResult filter_pairs(const Codec& codec, std::span<const CodeWord> codes, std::span<const IndexPair> pairs,
                          const ThresholdSpec& spec) {
  const double t = threshold_for_grid(codec, spec);
  std::vector<char> used(codes.size(), 0);
  for (const auto& p : pairs) {
    if (p.first >= codes.size() || p.second >= codes.size()) {
      throw Error(ErrorCode::IndexOutOfRange, "pair references code " +
                                                  std::to_string(std::max(p.first, p.second)) + " of " +
                                                  std::to_string(codes.size()));
    }
    used[p.first] = used[p.second] = 1;
  }
  std::vector<UnitVector> decoded(codes.size());
  detail::parallel_for(codes.size(), [&](std::size_t i) {
    if (!used[i]) return;
    require_grid(codec, codes[i]);
    decoded[i] = reconstruct(codec.decode(codes[i]));
  });
  std::vector<PairVerdict> verdicts(pairs.size());
  detail::parallel_for(pairs.size(), [&](std::size_t i) {
    verdicts[i] = verdict_of(dot(decoded[pairs[i].first].coords, decoded[pairs[i].second].coords), t);
  });
  return partition(std::move(verdicts));
}

}  // namespace ipq
