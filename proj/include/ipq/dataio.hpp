#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ipq/codec.hpp"
#include "ipq/estimator.hpp"

namespace ipq {

enum class Format { Fvecs, Bvecs, Idx, Csv };

/// "fvecs", "bvecs", "idx" or "csv"; anything else is InvalidArgument.
Format parse_format(std::string_view name);
std::string_view to_string(Format format) noexcept;

/// Row-major real vectors as read from disk, not normalized.
struct RawSet {
  std::uint32_t dim = 0;
  std::vector<double> values;
  std::string source;

  std::size_t size() const noexcept { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const double> row(std::size_t i) const noexcept { return {values.data() + i * dim, dim}; }
};

struct LoadOptions {
  bool csv_skip_header = false;
};

RawSet load(const std::string& path, Format format, const LoadOptions& options = {});
RawSet load(std::istream& in, Format format, const LoadOptions& options = {}, std::string source = "<stream>");

void save_fvecs(std::ostream& out, const RawSet& set);
void save_csv(std::ostream& out, const RawSet& set);
void save(const std::string& path, Format format, const RawSet& set);

/// Unit rows plus the norm each row had before normalization. `origin[i]` is
/// the input row index of row i; `dropped` counts zero rows removed.
struct VectorSet {
  std::uint32_t dim = 0;
  std::vector<double> values;
  std::vector<double> norms;
  std::vector<std::size_t> origin;
  std::size_t dropped = 0;
  std::string source;

  std::size_t size() const noexcept { return norms.size(); }
  std::span<const double> row(std::size_t i) const noexcept { return {values.data() + i * dim, dim}; }
};

VectorSet normalize(const RawSet& set);
/// Renormalizes rows of an existing set; norms compose multiplicatively.
VectorSet normalize(const VectorSet& set);

/// norm_x·norm_y·⟨f(x̂), f(ŷ)⟩ for codes of the unit directions.
double general_inner(const Codec& codec, const CodeWord& x, const CodeWord& y, double norm_x, double norm_y);

/// `count` distinct unordered pairs (first < second) of indices in [0, n),
/// reproducible from `seed`.
std::vector<IndexPair> sample_pairs(std::size_t n, std::size_t count, std::uint64_t seed);

/// Two whitespace-separated decimal indices per line; blank lines ignored.
std::vector<IndexPair> read_pairs(std::istream& in);
std::vector<IndexPair> read_pairs_file(const std::string& path);

}  // namespace ipq
