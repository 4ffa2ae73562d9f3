#include "wtap/error.hpp"

namespace wtap {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::OverlappingSets: return "OverlappingSets";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::EmptyArgument: return "EmptyArgument";
    case ErrorKind::CyclicStructure: return "CyclicStructure";
    case ErrorKind::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorKind::DuplicateSlackName: return "DuplicateSlackName";
    case ErrorKind::UnboundedRegion: return "UnboundedRegion";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::ScriptStepMismatch: return "ScriptStepMismatch";
    case ErrorKind::NotDegraded: return "NotDegraded";
    case ErrorKind::InconsistentAux: return "InconsistentAux";
    case ErrorKind::UnknownCorollary: return "UnknownCorollary";
    case ErrorKind::NegativeRate: return "NegativeRate";
    case ErrorKind::BudgetZero: return "BudgetZero";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::SingularConditionalCovariance: return "SingularConditionalCovariance";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::QuadratureNonConvergent: return "QuadratureNonConvergent";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
    case ErrorKind::IoError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::NegativeMass:
    case ErrorKind::NotNormalized:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::UnknownVariable:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::TooLarge:
    case ErrorKind::NotDegraded:
    case ErrorKind::InconsistentAux:
    case ErrorKind::UnknownCorollary:
    case ErrorKind::NegativeRate:
    case ErrorKind::BudgetZero:
    case ErrorKind::NotPSD:
    case ErrorKind::CapExceeded:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace wtap
