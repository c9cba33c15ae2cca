#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ipq/codec.hpp"
#include "ipq/grid.hpp"

namespace ipq {

inline constexpr char kContainerMagic[4] = {'I', 'P', 'Q', 'Z'};
inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr std::uint8_t kNormSectionTag = 0x4E;

/// Decoded IPQZ file: one grid, its codes, and optionally the original
/// vector norms (one per code).
struct Container {
  GridParams grid;
  std::vector<CodeWord> codes;
  std::optional<std::vector<double>> norms;
};

// Layout, all integers little-endian:
//   "IPQZ" | version u8 | d u32 | delta_num u32 | delta_den u32 | count u64
//   | crc32(previous 25 bytes) u32
//   | count records of ceil(ℓ/8) bytes
//   | [0x4E | count binary64 norms]
void write_container(std::ostream& out, const GridParams& grid, std::span<const CodeWord> codes,
                     const std::vector<double>* norms = nullptr);
Container read_container(std::istream& in);

void write_container_file(const std::string& path, const GridParams& grid, std::span<const CodeWord> codes,
                          const std::vector<double>* norms = nullptr);
Container read_container_file(const std::string& path);

}  // namespace ipq
