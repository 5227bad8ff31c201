#pragma once

#include <Eigen/Dense>

namespace ellip {

inline constexpr double kDefaultRidge = 1e-6;

/// Observations in rows. Invariants: n > d >= 2, all entries finite.
class SampleMatrix {
 public:
  explicit SampleMatrix(Eigen::MatrixXd x);

  const Eigen::MatrixXd& data() const noexcept { return x_; }
  Eigen::Index n() const noexcept { return x_.rows(); }
  Eigen::Index d() const noexcept { return x_.cols(); }

 private:
  Eigen::MatrixXd x_;
};

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;  // divisor n
};

struct StandardizedSample {
  Eigen::MatrixXd observations;   // the raw rows, n x d
  Eigen::VectorXd u_hat;          // radii, length n
  Eigen::MatrixXd theta_hat;      // n x (d-1), one angle vector per row
  Eigen::MatrixXd v_hat;          // n x d, unit directions
  Eigen::VectorXd mu_hat;
  Eigen::MatrixXd sigma_hat;      // unridged
  Eigen::MatrixXd sigma_inv_sqrt; // (sigma_hat + ridge I)^{-1/2}
  double ridge = kDefaultRidge;

  Eigen::Index n() const noexcept { return u_hat.size(); }
  Eigen::Index d() const noexcept { return mu_hat.size(); }
};

/// Column means and the divisor-n covariance.
Moments sample_moments(const Eigen::Ref<const Eigen::MatrixXd>& x);
inline Moments sample_moments(const SampleMatrix& x) { return sample_moments(x.data()); }

/// Q diag(lambda^{-1/2}) Q^T for S + ridge I = Q diag(lambda) Q^T.
/// Throws Error(NotPositiveDefinite) if any shifted eigenvalue is <= 0.
Eigen::MatrixXd sym_inv_sqrt(const Eigen::Ref<const Eigen::MatrixXd>& s, double ridge);

/// Q diag(lambda^{1/2}) Q^T for S + ridge I.
Eigen::MatrixXd sym_sqrt(const Eigen::Ref<const Eigen::MatrixXd>& s, double ridge);

/// Whitened radii and polar angles of every observation. Throws
/// ZeroRadiusError naming the first row that coincides with the mean.
StandardizedSample standardize_sample(const SampleMatrix& x, double ridge = kDefaultRidge);

}  // namespace ellip
