#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pathsum {

enum class ErrorCode {
  InvalidArgument,
  InvalidMedium,
  DiscontinuityPoint,
  NonPositiveDepth,
  NonPositiveSpeed,
  OrderTooDeep,
  ToleranceNotMet,
  UnsupportedTopology,
  ParityMismatch,
  OutOfDisk,
  HypothesisViolated,
  TooLarge,
  CFLViolation,
  UnresolvedDelta,
  ConfigError,
  ComputeError,
};

std::string_view to_string(ErrorCode code);

/**
 * The single exception type thrown by the library. The code identifies the
 * failure class; what() carries a human-readable message.
 */
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace pathsum
