#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hhgen {

enum class ErrorCode {
  precondition,
  provider_unavailable,
  provider_refused,
  structure_failure,
  layout_infeasible,
  unrepairable,
  consistency_failure,
  zero_rooms,
  empty_schedule,
  zero_vector,
  length_mismatch,
  degenerate_variance,
  no_shared_labels,
  unknown_adapter,
  unknown_step,
  duplicate_step,
  capability_missing,
  config,
  io,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::precondition: return "Precondition";
    case ErrorCode::provider_unavailable: return "ProviderUnavailable";
    case ErrorCode::provider_refused: return "ProviderRefused";
    case ErrorCode::structure_failure: return "StructureFailure";
    case ErrorCode::layout_infeasible: return "LayoutInfeasible";
    case ErrorCode::unrepairable: return "Unrepairable";
    case ErrorCode::consistency_failure: return "ConsistencyFailure";
    case ErrorCode::zero_rooms: return "ZeroRooms";
    case ErrorCode::empty_schedule: return "EmptySchedule";
    case ErrorCode::zero_vector: return "ZeroVector";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::degenerate_variance: return "DegenerateVariance";
    case ErrorCode::no_shared_labels: return "NoSharedLabels";
    case ErrorCode::unknown_adapter: return "UnknownAdapter";
    case ErrorCode::unknown_step: return "UnknownStep";
    case ErrorCode::duplicate_step: return "DuplicateStep";
    case ErrorCode::capability_missing: return "CapabilityMissing";
    case ErrorCode::config: return "ConfigError";
    case ErrorCode::io: return "IoError";
  }
  return "Unknown";
}

/// Base exception for every failure the library reports. The code is the
/// stable, testable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::precondition, message);
}

}  // namespace hhgen
