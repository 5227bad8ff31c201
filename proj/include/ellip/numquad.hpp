#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ellip {

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

inline constexpr double kDefaultQuadTol = 1e-8;
inline constexpr std::size_t kDefaultQuadBudget = 1'000'000;

using Integrand1d = std::function<double(double)>;
using Integrand2d = std::function<double(double, double)>;

struct Rect {
  double a1, b1, a2, b2;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature on [a, b].
///
/// Subintervals with the largest error estimate are bisected until the summed
/// estimate drops below tol (or below roundoff level for the accumulated
/// value). Throws IntegrationError if f returns a non-finite value and
/// Error(BudgetExceeded) once more than `budget` evaluations are needed.
QuadResult integrate1d(const Integrand1d& f, double a, double b, double tol = kDefaultQuadTol,
                       std::size_t budget = kDefaultQuadBudget);

/// Same rule, but the initial partition is given by sorted `breakpoints`
/// (at least two). Used for oscillatory integrands.
QuadResult integrate_partitioned(const Integrand1d& f, std::span<const double> breakpoints,
                                 double tol = kDefaultQuadTol,
                                 std::size_t budget = kDefaultQuadBudget);

/// Iterated adaptive quadrature over a rectangle: the outer integral over the
/// first coordinate of inner integrals over the second.
QuadResult integrate2d(const Integrand2d& f, const Rect& rect, double tol = kDefaultQuadTol,
                       std::size_t budget = kDefaultQuadBudget);

/// Weights of a quadratic form sum_i lambda_i Z_i^2, kept in descending order.
class WeightSpectrum {
 public:
  WeightSpectrum() = default;
  explicit WeightSpectrum(std::vector<double> lambdas);

  const std::vector<double>& lambdas() const noexcept { return lambdas_; }
  std::size_t size() const noexcept { return lambdas_.size(); }
  bool empty() const noexcept { return lambdas_.empty(); }
  double max() const noexcept { return lambdas_.empty() ? 0.0 : lambdas_.front(); }
  double sum() const noexcept;

 private:
  std::vector<double> lambdas_;
};

/// P(sum_i lambda_i Z_i^2 > x) by Imhof's characteristic-function inversion.
///
/// Weights below 1e-12 * max are discarded. The semi-infinite integral is
/// truncated at the smaller of two cut-offs, each holding the discarded part
/// below tol/2: Imhof's envelope bound, or the remainder after two
/// integrations by parts of the oscillating tail (whose leading boundary term
/// is then added back). The remaining tol/2 goes to the adaptive quadrature.
/// The result is clamped to [0, 1].
double imhof_tail(const WeightSpectrum& spectrum, double x, double tol = kDefaultQuadTol,
                  std::size_t budget = kDefaultQuadBudget);

}  // namespace ellip
