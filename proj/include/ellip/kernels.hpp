#pragma once

#include <Eigen/Dense>

#include "ellip/kernel_family.hpp"

namespace ellip {

struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  double gamma = 1.0;
};

/// Throws Error(Domain) unless gamma is finite and positive.
void validate(const KernelSpec& spec);

/// One-dimensional factor: exp(-gamma t^2) or 1 / (1 + gamma t^2), t = a - b.
double k_scalar(const KernelSpec& spec, double a, double b);
/// d/db of k_scalar(a, b).
double k_scalar_d2(const KernelSpec& spec, double a, double b);

inline double k_u(const KernelSpec& spec, double u, double u2) { return k_scalar(spec, u, u2); }
inline double k_u_d2(const KernelSpec& spec, double u, double u2) {
  return k_scalar_d2(spec, u, u2);
}

/// Product over coordinates of k_scalar. Throws Error(Domain) on length mismatch.
double k_theta(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& theta,
               const Eigen::Ref<const Eigen::VectorXd>& theta2);

/// Gradient of k_theta in its second argument.
Eigen::VectorXd k_theta_grad2(const KernelSpec& spec,
                              const Eigen::Ref<const Eigen::VectorXd>& theta,
                              const Eigen::Ref<const Eigen::VectorXd>& theta2);

/// gamma = 1 / (mean pairwise Euclidean distance)^2 over the rows of `points`.
/// Throws Error(DegenerateBandwidth) if all rows coincide, Error(Domain) for
/// fewer than two rows.
double bandwidth_heuristic(const Eigen::Ref<const Eigen::MatrixXd>& points);

/// Gram matrix of the rows of `points` (product kernel over columns).
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& points);

}  // namespace ellip
