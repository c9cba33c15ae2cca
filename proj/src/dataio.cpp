#include "ipq/dataio.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <random>
#include <unordered_set>

#include "ipq/error.hpp"
#include "ipq/quantizer.hpp"
#include "ipq/vecmath.hpp"

namespace ipq {

namespace {

[[noreturn]] void parse_fail(std::size_t offset, const std::string& what) {
  throw Error(ErrorCode::ParseError, "byte " + std::to_string(offset) + ": " + what);
}

template <typename T>
T get_le(const std::string& buf, std::size_t pos) {
  std::array<unsigned char, sizeof(T)> raw;
  std::memcpy(raw.data(), buf.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
  return std::bit_cast<T>(raw);
}

template <typename T>
T get_be(const std::string& buf, std::size_t pos) {
  std::array<unsigned char, sizeof(T)> raw;
  std::memcpy(raw.data(), buf.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::little) std::reverse(raw.begin(), raw.end());
  return std::bit_cast<T>(raw);
}

template <typename T>
void put_le(std::ostream& out, T value) {
  auto raw = std::bit_cast<std::array<char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
  out.write(raw.data(), raw.size());
}

template <typename Elem>
RawSet load_vecs(const std::string& buf, std::string source) {
  RawSet set;
  set.source = std::move(source);
  std::size_t pos = 0;
  while (pos < buf.size()) {
    if (buf.size() - pos < 4) parse_fail(pos, "truncated record header");
    const std::int32_t d = get_le<std::int32_t>(buf, pos);
    if (d <= 0) parse_fail(pos, "non-positive dimension " + std::to_string(d));
    if (set.dim == 0) {
      set.dim = static_cast<std::uint32_t>(d);
    } else if (static_cast<std::uint32_t>(d) != set.dim) {
      throw Error(ErrorCode::DimensionMismatch, "byte " + std::to_string(pos) + ": record dimension " +
                                                    std::to_string(d) + " != " + std::to_string(set.dim));
    }
    pos += 4;
    const std::size_t need = static_cast<std::size_t>(d) * sizeof(Elem);
    if (buf.size() - pos < need) parse_fail(pos, "truncated record body");
    for (std::int32_t i = 0; i < d; ++i, pos += sizeof(Elem)) {
      set.values.push_back(static_cast<double>(get_le<Elem>(buf, pos)));
    }
  }
  return set;
}

RawSet load_idx(const std::string& buf, std::string source) {
  if (buf.size() < 4) parse_fail(0, "truncated idx header");
  if (buf[0] != 0 || buf[1] != 0) parse_fail(0, "bad idx magic");
  const auto type = static_cast<unsigned char>(buf[2]);
  const auto ndims = static_cast<unsigned char>(buf[3]);
  if (ndims == 0) parse_fail(3, "idx file with zero dimensions");
  std::size_t elem = 0;
  switch (type) {
    case 0x08: elem = 1; break;
    case 0x0D: elem = 4; break;
    case 0x0E: elem = 8; break;
    default: parse_fail(2, "unsupported idx element type " + std::to_string(type));
  }
  const std::size_t header = 4 + 4 * static_cast<std::size_t>(ndims);
  if (buf.size() < header) parse_fail(4, "truncated idx dimension list");
  std::uint64_t count = get_be<std::uint32_t>(buf, 4);
  std::uint64_t dim = 1;
  for (std::size_t k = 1; k < ndims; ++k) {
    dim *= get_be<std::uint32_t>(buf, 4 + 4 * k);
    if (dim > std::numeric_limits<std::uint32_t>::max()) parse_fail(4 + 4 * k, "idx row too large");
  }
  if (dim == 0) parse_fail(8, "idx row of size zero");
  const std::uint64_t total = count * dim;
  if ((buf.size() - header) / elem < total) parse_fail(header, "idx payload shorter than header claims");
  if ((buf.size() - header) != total * elem) parse_fail(header + total * elem, "trailing bytes after idx payload");
  RawSet set;
  set.source = std::move(source);
  set.dim = static_cast<std::uint32_t>(dim);
  set.values.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t at = header + i * elem;
    switch (type) {
      case 0x08: set.values[i] = static_cast<unsigned char>(buf[at]) / 255.0; break;
      case 0x0D: set.values[i] = get_be<float>(buf, at); break;
      default: set.values[i] = get_be<double>(buf, at); break;
    }
  }
  return set;
}

std::size_t trim_left(const std::string& buf, std::size_t pos, std::size_t end) {
  while (pos < end && (buf[pos] == ' ' || buf[pos] == '\t')) ++pos;
  return pos;
}

RawSet load_csv(const std::string& buf, const LoadOptions& options, std::string source) {
  RawSet set;
  set.source = std::move(source);
  std::size_t pos = 0;
  bool skip = options.csv_skip_header;
  while (pos < buf.size()) {
    std::size_t eol = buf.find('\n', pos);
    if (eol == std::string::npos) eol = buf.size();
    std::size_t end = eol;
    if (end > pos && buf[end - 1] == '\r') --end;
    const std::size_t line_start = pos;
    pos = eol + 1;
    if (skip) {
      skip = false;
      continue;
    }
    if (trim_left(buf, line_start, end) == end) continue;
    std::uint32_t fields = 0;
    std::size_t at = line_start;
    while (true) {
      at = trim_left(buf, at, end);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(buf.data() + at, buf.data() + end, v);
      if (ec != std::errc()) parse_fail(at, "expected a decimal number");
      at = trim_left(buf, static_cast<std::size_t>(ptr - buf.data()), end);
      set.values.push_back(v);
      ++fields;
      if (at == end) break;
      if (buf[at] != ',') parse_fail(at, "expected ','");
      ++at;
    }
    if (set.dim == 0) {
      set.dim = fields;
    } else if (fields != set.dim) {
      parse_fail(line_start, "row has " + std::to_string(fields) + " fields, expected " + std::to_string(set.dim));
    }
  }
  return set;
}

std::string slurp(std::istream& in) {
  std::string buf{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed");
  return buf;
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "fvecs") return Format::Fvecs;
  if (name == "bvecs") return Format::Bvecs;
  if (name == "idx") return Format::Idx;
  if (name == "csv") return Format::Csv;
  throw Error(ErrorCode::InvalidArgument, "unknown format '" + std::string(name) + "'");
}

std::string_view to_string(Format format) noexcept {
  switch (format) {
    case Format::Fvecs: return "fvecs";
    case Format::Bvecs: return "bvecs";
    case Format::Idx: return "idx";
    case Format::Csv: return "csv";
  }
  return "?";
}

RawSet load(std::istream& in, Format format, const LoadOptions& options, std::string source) {
  const std::string buf = slurp(in);
  switch (format) {
    case Format::Fvecs: return load_vecs<float>(buf, std::move(source));
    case Format::Bvecs: return load_vecs<std::uint8_t>(buf, std::move(source));
    case Format::Idx: return load_idx(buf, std::move(source));
    case Format::Csv: return load_csv(buf, options, std::move(source));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown format");
}

RawSet load(const std::string& path, Format format, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return load(in, format, options, path);
}

void save_fvecs(std::ostream& out, const RawSet& set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    put_le<std::int32_t>(out, static_cast<std::int32_t>(set.dim));
    for (double v : set.row(i)) put_le<float>(out, static_cast<float>(v));
  }
}

void save_csv(std::ostream& out, const RawSet& set) {
  std::array<char, 32> text;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto row = set.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      const auto [ptr, ec] = std::to_chars(text.data(), text.data() + text.size(), row[k]);
      out.write(text.data(), ptr - text.data());
    }
    out << '\n';
  }
}

void save(const std::string& path, Format format, const RawSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot create " + path);
  switch (format) {
    case Format::Fvecs: save_fvecs(out, set); break;
    case Format::Csv: save_csv(out, set); break;
    default: throw Error(ErrorCode::InvalidArgument, "no writer for " + std::string(to_string(format)));
  }
  if (!out.flush()) throw Error(ErrorCode::IoError, "write failed for " + path);
}

namespace {

VectorSet normalize_rows(std::uint32_t dim, std::span<const double> values, std::span<const double> prior,
                         std::span<const std::size_t> origin, std::string source, std::size_t dropped) {
  VectorSet out;
  out.dim = dim;
  out.source = std::move(source);
  out.dropped = dropped;
  const std::size_t n = dim == 0 ? 0 : values.size() / dim;
  out.values.reserve(values.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = values.subspan(i * dim, dim);
    const double len = norm(row);
    if (!std::isfinite(len)) throw Error(ErrorCode::NonFinite, "row " + std::to_string(i) + " is not finite");
    if (len == 0.0) {
      ++out.dropped;
      continue;
    }
    for (double v : row) out.values.push_back(v / len);
    out.norms.push_back(prior.empty() ? len : prior[i] * len);
    out.origin.push_back(origin.empty() ? i : origin[i]);
  }
  if (out.norms.empty()) throw Error(ErrorCode::AllZero, "no nonzero vectors in " + out.source);
  return out;
}

}  // namespace

VectorSet normalize(const RawSet& set) { return normalize_rows(set.dim, set.values, {}, {}, set.source, 0); }

VectorSet normalize(const VectorSet& set) {
  return normalize_rows(set.dim, set.values, set.norms, set.origin, set.source, set.dropped);
}

double general_inner(const Codec& codec, const CodeWord& x, const CodeWord& y, double norm_x, double norm_y) {
  if (!(norm_x > 0.0 && norm_y > 0.0 && std::isfinite(norm_x) && std::isfinite(norm_y))) {
    throw Error(ErrorCode::InvalidArgument, "norms must be positive and finite");
  }
  return norm_x * norm_y * estimate_inner(codec, x, y);
}

namespace {

// Uniform integer in [0, n) by rejection on raw mt19937_64 output, whose
// sequence is fixed by the standard (distributions are not).
std::size_t draw_below(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do v = rng();
  while (v >= limit);
  return static_cast<std::size_t>(v % bound);
}

}  // namespace

std::vector<IndexPair> sample_pairs(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "pair count must be at least 1");
  if (n < 2) throw Error(ErrorCode::SetTooSmall, "need at least 2 vectors, have " + std::to_string(n));
  const unsigned __int128 total = static_cast<unsigned __int128>(n) * (n - 1) / 2;
  if (count > total) {
    throw Error(ErrorCode::SetTooSmall,
                std::to_string(count) + " pairs requested but only " + std::to_string(static_cast<std::uint64_t>(total)) +
                    " exist");
  }
  std::mt19937_64 rng(seed);
  std::vector<IndexPair> out;
  out.reserve(count);
  if (count * 2 > total) {
    // Dense request: partial Fisher-Yates over the full pair list.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) out.push_back({i, j});
    for (std::size_t i = 0; i < count; ++i) std::swap(out[i], out[i + draw_below(rng, out.size() - i)]);
    out.resize(count);
    return out;
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(count * 2);
  while (out.size() < count) {
    std::size_t i = draw_below(rng, n), j = draw_below(rng, n);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (!seen.insert(static_cast<std::uint64_t>(i) * n + j).second) continue;
    out.push_back({i, j});
  }
  return out;
}

std::vector<IndexPair> read_pairs(std::istream& in) {
  std::vector<IndexPair> out;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    const char* p = line.data();
    const char* end = p + line.size();
    auto skip_ws = [&] {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    };
    skip_ws();
    if (p == end) continue;
    std::size_t idx[2];
    for (auto& v : idx) {
      skip_ws();
      const auto [ptr, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) parse_fail(line_start + (p - line.data()), "expected a non-negative index");
      p = ptr;
    }
    skip_ws();
    if (p != end) parse_fail(line_start + (p - line.data()), "unexpected text after pair");
    out.push_back({idx[0], idx[1]});
  }
  return out;
}

std::vector<IndexPair> read_pairs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_pairs(in);
}

}  // namespace ipq
