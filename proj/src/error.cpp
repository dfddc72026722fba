#include "ckahler/error.hpp"

namespace ckahler {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::BasePointMismatch: return "BasePointMismatch";
    case ErrorCode::OrderMismatch: return "OrderMismatch";
    case ErrorCode::DivisionByNonUnit: return "DivisionByNonUnit";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::OrderExhausted: return "OrderExhausted";
    case ErrorCode::NonPerfectSquareConstantTerm: return "NonPerfectSquareConstantTerm";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UndeclaredIdentifier: return "UndeclaredIdentifier";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::DegenerateMetricAtPoint: return "DegenerateMetricAtPoint";
    case ErrorCode::NonPositiveConformalFactor: return "NonPositiveConformalFactor";
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::SlotMismatch: return "SlotMismatch";
    case ErrorCode::SymmetryViolation: return "SymmetryViolation";
    case ErrorCode::NonAntisymmetricBivector: return "NonAntisymmetricBivector";
    case ErrorCode::InconsistentTraceCount: return "InconsistentTraceCount";
    case ErrorCode::NotKahlerInput: return "NotKahlerInput";
    case ErrorCode::DegenerateOmega: return "DegenerateOmega";
    case ErrorCode::DimensionFour: return "DimensionFour";
    case ErrorCode::SampleNotOnVariety: return "SampleNotOnVariety";
    case ErrorCode::ScaleMismatch: return "ScaleMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace ckahler
