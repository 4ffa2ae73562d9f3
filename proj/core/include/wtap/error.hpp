#pragma once

#include <stdexcept>
#include <string>

namespace wtap {

enum class ErrorKind {
  NegativeMass,
  NotNormalized,
  ShapeMismatch,
  UnknownVariable,
  OverlappingSets,
  DimensionMismatch,
  TooLarge,
  EmptyArgument,
  CyclicStructure,
  ZeroCoefficient,
  DuplicateSlackName,
  UnboundedRegion,
  DimensionTooLarge,
  ScriptStepMismatch,
  NotDegraded,
  InconsistentAux,
  UnknownCorollary,
  NegativeRate,
  BudgetZero,
  NotPSD,
  CapExceeded,
  SingularMatrix,
  SingularConditionalCovariance,
  StepTooLarge,
  NoRoot,
  QuadratureNonConvergent,
  ParseError,
  ValidationError,
  IoError,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

// Input errors map to CLI exit code 2; everything else is a property failure.
bool is_input_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace wtap
