#include "ellip/kernels.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "ellip/error.hpp"
#include "ellip/simd/dispatch.hpp"

namespace ellip {

std::string_view to_string(KernelFamily family) {
  return family == KernelFamily::Gaussian ? "gaussian" : "piq";
}

std::optional<KernelFamily> parse_kernel_family(std::string_view name) {
  if (name == "gaussian") return KernelFamily::Gaussian;
  if (name == "piq") return KernelFamily::Piq;
  return std::nullopt;
}

void validate(const KernelSpec& spec) {
  if (!std::isfinite(spec.gamma) || spec.gamma <= 0.0) {
    throw Error(ErrorCode::Domain, "kernel bandwidth gamma must be finite and > 0, got " +
                                       std::to_string(spec.gamma));
  }
}

double k_scalar(const KernelSpec& spec, double a, double b) {
  const double t = a - b;
  if (spec.family == KernelFamily::Gaussian) return std::exp(-spec.gamma * t * t);
  return 1.0 / (1.0 + spec.gamma * t * t);
}

double k_scalar_d2(const KernelSpec& spec, double a, double b) {
  const double t = a - b;
  if (spec.family == KernelFamily::Gaussian) {
    return 2.0 * spec.gamma * t * std::exp(-spec.gamma * t * t);
  }
  const double s = 1.0 + spec.gamma * t * t;
  return 2.0 * spec.gamma * t / (s * s);
}

namespace {

void check_lengths(Eigen::Index a, Eigen::Index b) {
  if (a != b) {
    throw Error(ErrorCode::Domain, "angle vectors differ in length: " + std::to_string(a) +
                                       " vs " + std::to_string(b));
  }
}

}  // namespace

double k_theta(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& theta,
               const Eigen::Ref<const Eigen::VectorXd>& theta2) {
  check_lengths(theta.size(), theta2.size());
  double k = 1.0;
  for (Eigen::Index r = 0; r < theta.size(); ++r) k *= k_scalar(spec, theta[r], theta2[r]);
  return k;
}

Eigen::VectorXd k_theta_grad2(const KernelSpec& spec,
                              const Eigen::Ref<const Eigen::VectorXd>& theta,
                              const Eigen::Ref<const Eigen::VectorXd>& theta2) {
  const double k = k_theta(spec, theta, theta2);
  Eigen::VectorXd grad(theta.size());
  for (Eigen::Index r = 0; r < theta.size(); ++r) {
    const double t = theta[r] - theta2[r];
    // d/dtheta2_r of the r-th factor, divided by that factor
    const double log_slope = spec.family == KernelFamily::Gaussian
                                 ? 2.0 * spec.gamma * t
                                 : 2.0 * spec.gamma * t / (1.0 + spec.gamma * t * t);
    grad[r] = log_slope * k;
  }
  return grad;
}

double bandwidth_heuristic(const Eigen::Ref<const Eigen::MatrixXd>& points) {
  const auto n = static_cast<std::size_t>(points.rows());
  const auto dim = static_cast<std::size_t>(points.cols());
  if (n < 2) throw Error(ErrorCode::Domain, "bandwidth heuristic needs at least two points");
  const Eigen::MatrixXd coords = points;  // column-major = coordinate-major
  const double total = simd::sum_pairwise_distances(
      std::span<const double>(coords.data(), n * dim), n, dim);
  const double mean = total / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
  if (!(mean > 0.0)) throw Error(ErrorCode::DegenerateBandwidth, "all points are identical");
  return 1.0 / (mean * mean);
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec,
                            const Eigen::Ref<const Eigen::MatrixXd>& points) {
  validate(spec);
  const auto n = static_cast<std::size_t>(points.rows());
  const auto dim = static_cast<std::size_t>(points.cols());
  const Eigen::MatrixXd coords = points;
  Eigen::MatrixXd gram(points.rows(), points.rows());
  std::vector<double> point(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < dim; ++r) point[r] = coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r));
    simd::kernel_row(spec.family, spec.gamma, std::span<const double>(coords.data(), n * dim), n,
                     dim, point, std::span<double>(gram.col(static_cast<Eigen::Index>(i)).data(), n));
  }
  // the vector exp and the scalar one may differ in the last bit
  return 0.5 * (gram + gram.transpose());
}

}  // namespace ellip
