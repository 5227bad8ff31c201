#include "ellip/error.hpp"

namespace ellip {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::UndefinedAngle: return "undefined-angle";
    case ErrorCode::DegenerateDirection: return "degenerate-direction";
    case ErrorCode::SingularJacobian: return "singular-jacobian";
    case ErrorCode::NotPositiveDefinite: return "not-positive-definite";
    case ErrorCode::ZeroRadius: return "zero-radius";
    case ErrorCode::IntegrationFailure: return "integration-failure";
    case ErrorCode::BudgetExceeded: return "budget-exceeded";
    case ErrorCode::DegenerateSpectrum: return "degenerate-spectrum";
    case ErrorCode::DegenerateBandwidth: return "degenerate-bandwidth";
    case ErrorCode::Numeric: return "numeric";
  }
  return "unknown";
}

}  // namespace ellip
