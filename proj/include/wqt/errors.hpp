#pragma once

#include <stdexcept>
#include <string>

namespace wqt {

enum class ErrorCode {
  SpaceMismatch,
  Incompatible,
  NotIdempotent,
  PartialMap,
  InvalidObservable,
  InvalidModel,
  NotInSemigroup,
  EmptyPreparation,
  SameSlot,
  DimensionMismatch,
  NotSelfAdjoint,
  InvalidState,
  InvalidArgument,
  RangeShortfall,
  ZeroField,
  LimitExceeded,
};

const char* to_string(ErrorCode code);

/// Error raised by every module operation. The code identifies the failed
/// contract; the message is user-facing.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SpaceMismatch: return "SPACE_MISMATCH";
    case ErrorCode::Incompatible: return "INCOMPATIBLE";
    case ErrorCode::NotIdempotent: return "NOT_IDEMPOTENT";
    case ErrorCode::PartialMap: return "PARTIAL_MAP";
    case ErrorCode::InvalidObservable: return "INVALID_OBSERVABLE";
    case ErrorCode::InvalidModel: return "INVALID_MODEL";
    case ErrorCode::NotInSemigroup: return "NOT_IN_SEMIGROUP";
    case ErrorCode::EmptyPreparation: return "EMPTY_PREPARATION";
    case ErrorCode::SameSlot: return "SAME_SLOT";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::NotSelfAdjoint: return "NOT_SELF_ADJOINT";
    case ErrorCode::InvalidState: return "INVALID_STATE";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::RangeShortfall: return "RANGE_SHORTFALL";
    case ErrorCode::ZeroField: return "ZERO_FIELD";
    case ErrorCode::LimitExceeded: return "LIMIT_EXCEEDED";
  }
  return "UNKNOWN";
}

}  // namespace wqt
