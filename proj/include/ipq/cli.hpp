#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "ipq/error.hpp"

namespace ipq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNumeric = 3;

int exit_code_for(ErrorCode code) noexcept;

/// Entry point of the `ipq` tool. `args` excludes the program name.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ipq
