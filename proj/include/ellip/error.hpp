#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace ellip {

enum class ErrorCode {
  Domain,
  UndefinedAngle,
  DegenerateDirection,
  SingularJacobian,
  NotPositiveDefinite,
  ZeroRadius,
  IntegrationFailure,
  BudgetExceeded,
  DegenerateSpectrum,
  DegenerateBandwidth,
  Numeric,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code so
// callers (the CLI, the simulation harness) can classify it without parsing
// messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the zero-radius check; remembers which observation was at the mean.
class ZeroRadiusError : public Error {
 public:
  ZeroRadiusError(std::size_t row, const std::string& what)
      : Error(ErrorCode::ZeroRadius, what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// Quadrature failure at a specific abscissa (non-finite integrand).
class IntegrationError : public Error {
 public:
  IntegrationError(double abscissa, const std::string& what)
      : Error(ErrorCode::IntegrationFailure, what), abscissa_(abscissa) {}

  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

// Wraps an error from one pipeline stage of run_test with the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& inner)
      : Error(inner.code(), stage + ": " + inner.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace ellip
