#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "ellip/embedstat.hpp"
#include "ellip/kernels.hpp"
#include "ellip/numquad.hpp"
#include "ellip/standardize.hpp"

namespace ellip {

/// Linear maps from (mu*, vec Sigma*) to the influence of the radius U, the
/// direction V and the angles Theta of one observation x. vec is column-major.
struct InfluenceCoeffs {
  Eigen::RowVectorXd a1;  // 1 x d
  Eigen::RowVectorXd a2;  // 1 x d^2
  Eigen::MatrixXd b1;     // d x d
  Eigen::MatrixXd b2;     // d x d^2
  Eigen::MatrixXd c1;     // (d-1) x d
  Eigen::MatrixXd c2;     // (d-1) x d^2
};

/// mu*(z) = z - mu, Sigma*(z) = (z - mu)(z - mu)^T - Sigma (vectorised).
std::pair<Eigen::VectorXd, Eigen::VectorXd> influence_mu_sigma(
    const Eigen::Ref<const Eigen::VectorXd>& z, const Eigen::Ref<const Eigen::VectorXd>& mu_hat,
    const Eigen::Ref<const Eigen::MatrixXd>& sigma_hat);

/// Precomputes the ridged inverse, square roots and the d^2 x d^2 inverse of
/// Sigma^{1/2} (x) Sigma + Sigma (x) Sigma^{1/2} once per sample.
class InfluenceModel {
 public:
  InfluenceModel(Eigen::VectorXd mu_hat, Eigen::MatrixXd sigma_hat, double ridge);

  /// Throws ZeroRadiusError(row = 0) when x sits at the mean.
  InfluenceCoeffs coeffs(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  const Eigen::VectorXd& mu_hat() const noexcept { return mu_; }
  const Eigen::MatrixXd& sigma_hat() const noexcept { return sigma_; }
  const Eigen::MatrixXd& kron_sum_inverse() const noexcept { return kron_inv_; }

 private:
  Eigen::VectorXd mu_;
  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd sigma_inv_;
  Eigen::MatrixXd sigma_inv_sqrt_;
  Eigen::MatrixXd kron_inv_;
};

InfluenceCoeffs coeffs_ABC(const Eigen::Ref<const Eigen::VectorXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& mu_hat,
                           const Eigen::Ref<const Eigen::MatrixXd>& sigma_hat, double ridge);

/// U* = A1 mu* + A2 vec Sigma*, Theta* = C1 mu* + C2 vec Sigma*.
std::pair<double, Eigen::VectorXd> influence_u_theta(const InfluenceCoeffs& c,
                                                     const Eigen::Ref<const Eigen::VectorXd>& mu_star,
                                                     const Eigen::Ref<const Eigen::VectorXd>& sigma_star_vec);

struct MtmOptions {
  // Drops the kernel-derivative terms; only the first coordinate term remains.
  bool zero_derivatives = false;
};

/// n x n Gram matrix of the influence representers whose eigenvalues weight
/// the asymptotic null law.
Eigen::MatrixXd build_mtm(const StandardizedSample& sample, const GramPair& g,
                          const KernelSpec& spec_u, const KernelSpec& spec_theta, double ridge,
                          const MtmOptions& options = {});

/// Symmetrise, eigendecompose, clip negatives to 0, sort descending.
WeightSpectrum null_eigenvalues(const Eigen::Ref<const Eigen::MatrixXd>& mtm);

struct TestConfig {
  KernelFamily kernel = KernelFamily::Gaussian;
  std::optional<double> gamma_u;
  std::optional<double> gamma_theta;
  double ridge = kDefaultRidge;
  double quad_tol = kDefaultQuadTol;
};

struct TestResult {
  double statistic = 0.0;
  WeightSpectrum eigenvalues;
  double p_value = 1.0;
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  double gamma_u = 0.0;
  double gamma_theta = 0.0;
  double ridge = kDefaultRidge;
  KernelFamily kernel = KernelFamily::Gaussian;
};

/// Full pipeline. Library errors are rethrown as StageError naming the stage.
TestResult run_test(const SampleMatrix& x, const TestConfig& config = {});

}  // namespace ellip
