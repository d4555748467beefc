#include "pathsum/error.hpp"

namespace pathsum {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidMedium: return "InvalidMedium";
    case ErrorCode::DiscontinuityPoint: return "DiscontinuityPoint";
    case ErrorCode::NonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::NonPositiveSpeed: return "NonPositiveSpeed";
    case ErrorCode::OrderTooDeep: return "OrderTooDeep";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::UnsupportedTopology: return "UnsupportedTopology";
    case ErrorCode::ParityMismatch: return "ParityMismatch";
    case ErrorCode::OutOfDisk: return "OutOfDisk";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::UnresolvedDelta: return "UnresolvedDelta";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ComputeError: return "ComputeError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace pathsum
