#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ckahler {

enum class ErrorCode {
  // exact scalars and jets
  BasePointMismatch,
  OrderMismatch,
  DivisionByNonUnit,
  NotDivisible,
  OrderExhausted,
  NonPerfectSquareConstantTerm,
  NonPositive,
  // ingestion
  SyntaxError,
  UndeclaredIdentifier,
  SchemaError,
  OddDimension,
  DimensionTooSmall,
  DegenerateMetricAtPoint,
  NonPositiveConformalFactor,
  AsymmetricInput,
  // tensor algebra
  SlotMismatch,
  SymmetryViolation,
  // obstruction
  NonAntisymmetricBivector,
  InconsistentTraceCount,
  // prolongation, constraints, tractors
  NotKahlerInput,
  DegenerateOmega,
  DimensionFour,
  SampleNotOnVariety,
  ScaleMismatch,
  // a computed invariant failed; always a bug
  InvariantViolation,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure in the library surfaces as this exception. The code is
/// stable and machine-readable; the message carries the human context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ckahler
