#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ipq {

enum class ErrorCode {
  InvalidArgument,
  InvalidDelta,
  InvalidEpsilon,
  InvalidThresholds,
  DimensionMismatch,
  NonFinite,
  NormTooLarge,
  BudgetExceeded,
  ZeroVector,
  IndexOutOfRange,
  MalformedCode,
  GridMismatch,
  SpecIncompatible,
  DegenerateAngle,
  GapViolated,
  BadMagic,
  VersionUnsupported,
  TruncatedFile,
  ChecksumMismatch,
  IoError,
  ParseError,
  AllZero,
  SetTooSmall,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure in the library is reported as an ipq::Error carrying a
/// machine-readable code; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ipq
