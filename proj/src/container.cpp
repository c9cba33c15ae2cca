#include "ipq/container.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <zlib.h>

#include "ipq/error.hpp"

namespace ipq {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 1 + 4 + 4 + 4 + 8;

template <typename T>
void put_le(std::vector<std::uint8_t>& buf, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) buf.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

template <typename T>
T get_le(const std::uint8_t* p) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(p[i]) << (8 * i);
  return value;
}

std::uint32_t crc32_of(const std::uint8_t* data, std::size_t size) {
  return static_cast<std::uint32_t>(::crc32(::crc32(0L, Z_NULL, 0), data, static_cast<uInt>(size)));
}

void read_exact(std::istream& in, std::uint8_t* dst, std::size_t size, const char* what) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(size));
  if (static_cast<std::size_t>(in.gcount()) != size) {
    throw Error(ErrorCode::TruncatedFile, std::string("container ends inside ") + what);
  }
}

}  // namespace

void write_container(std::ostream& out, const GridParams& grid, std::span<const CodeWord> codes,
                     const std::vector<double>* norms) {
  if (norms && norms->size() != codes.size()) {
    throw Error(ErrorCode::InvalidArgument, "norm sidecar length differs from code count");
  }
  const Codec probe_lengths(grid);
  const std::size_t record = probe_lengths.record_bytes();

  std::vector<std::uint8_t> header;
  header.insert(header.end(), kContainerMagic, kContainerMagic + 4);
  header.push_back(kContainerVersion);
  put_le<std::uint32_t>(header, grid.dim());
  put_le<std::uint32_t>(header, grid.delta().num());
  put_le<std::uint32_t>(header, grid.delta().den());
  put_le<std::uint64_t>(header, codes.size());
  put_le<std::uint32_t>(header, crc32_of(header.data(), header.size()));
  out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));

  for (const auto& code : codes) {
    if (!(code.grid() == grid) || code.bytes().size() != record) {
      throw Error(ErrorCode::GridMismatch, "code does not belong to the container grid");
    }
    out.write(reinterpret_cast<const char*>(code.bytes().data()), static_cast<std::streamsize>(record));
  }

  if (norms) {
    std::vector<std::uint8_t> section;
    section.reserve(1 + 8 * norms->size());
    section.push_back(kNormSectionTag);
    for (const double n : *norms) put_le<std::uint64_t>(section, std::bit_cast<std::uint64_t>(n));
    out.write(reinterpret_cast<const char*>(section.data()), static_cast<std::streamsize>(section.size()));
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing container");
}

Container read_container(std::istream& in) {
  std::array<std::uint8_t, kHeaderBytes + 4> header{};
  in.read(reinterpret_cast<char*>(header.data()), 4);
  if (in.gcount() != 4 || std::memcmp(header.data(), kContainerMagic, 4) != 0) {
    throw Error(ErrorCode::BadMagic, "not an IPQZ container");
  }
  read_exact(in, header.data() + 4, header.size() - 4, "header");
  if (header[4] != kContainerVersion) {
    throw Error(ErrorCode::VersionUnsupported, "container version " + std::to_string(header[4]));
  }
  if (get_le<std::uint32_t>(header.data() + kHeaderBytes) != crc32_of(header.data(), kHeaderBytes)) {
    throw Error(ErrorCode::ChecksumMismatch, "header CRC32 mismatch");
  }
  const auto dim = get_le<std::uint32_t>(header.data() + 5);
  const auto num = get_le<std::uint32_t>(header.data() + 9);
  const auto den = get_le<std::uint32_t>(header.data() + 13);
  const auto count = get_le<std::uint64_t>(header.data() + 17);

  const GridParams grid(dim, Rational(num, den));
  const Codec lengths(grid);
  const std::size_t record = lengths.record_bytes();

  Container result{grid, {}, std::nullopt};
  result.codes.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 20)));
  std::vector<std::uint8_t> bytes(record);
  for (std::uint64_t i = 0; i < count; ++i) {
    read_exact(in, bytes.data(), record, "code records");
    result.codes.emplace_back(grid, bytes, lengths.code_length());
  }

  const int tag = in.get();
  if (tag == std::char_traits<char>::eof()) return result;
  if (tag != kNormSectionTag) throw Error(ErrorCode::BadMagic, "unknown section tag after records");
  std::vector<double> norms(static_cast<std::size_t>(count));
  std::array<std::uint8_t, 8> raw{};
  for (auto& n : norms) {
    read_exact(in, raw.data(), raw.size(), "norm sidecar");
    n = std::bit_cast<double>(get_le<std::uint64_t>(raw.data()));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::BadMagic, "trailing bytes after norm sidecar");
  }
  result.norms = std::move(norms);
  return result;
}

void write_container_file(const std::string& path, const GridParams& grid, std::span<const CodeWord> codes,
                          const std::vector<double>* norms) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  write_container(out, grid, codes, norms);
}

Container read_container_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return read_container(in);
}

}  // namespace ipq
