#include "cachedof/error.hpp"

namespace cachedof {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPrimePower: return "NotPrimePower";
    case ErrorCode::kDivisionByZero: return "DivisionByZero";
    case ErrorCode::kInvalidArgs: return "InvalidArgs";
    case ErrorCode::kAmbientMismatch: return "AmbientMismatch";
    case ErrorCode::kConstraintViolation: return "ConstraintViolation";
    case ErrorCode::kNonIntegerCount: return "NonIntegerCount";
    case ErrorCode::kInvalidDemand: return "InvalidDemand";
    case ErrorCode::kIllConditioned: return "IllConditioned";
    case ErrorCode::kPreconditionFailed: return "PreconditionFailed";
    case ErrorCode::kInconsistent: return "Inconsistent";
    case ErrorCode::kFormat: return "Format";
  }
  return "Unknown";
}

}  // namespace cachedof
