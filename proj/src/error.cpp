#include "ipq/error.hpp"

namespace ipq {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidDelta: return "InvalidDelta";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::InvalidThresholds: return "InvalidThresholds";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NormTooLarge: return "NormTooLarge";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::MalformedCode: return "MalformedCode";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::SpecIncompatible: return "SpecIncompatible";
    case ErrorCode::DegenerateAngle: return "DegenerateAngle";
    case ErrorCode::GapViolated: return "GapViolated";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::SetTooSmall: return "SetTooSmall";
  }
  return "Unknown";
}

}  // namespace ipq
