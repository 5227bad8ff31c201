#include <cmath>
#include <string>

#include "ellip/error.hpp"
#include "ellip/nulldist.hpp"
#include "ellip/polar.hpp"

namespace ellip {
namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> influence_mu_sigma(
    const Eigen::Ref<const Eigen::VectorXd>& z, const Eigen::Ref<const Eigen::VectorXd>& mu_hat,
    const Eigen::Ref<const Eigen::MatrixXd>& sigma_hat) {
  if (z.size() != mu_hat.size() || sigma_hat.rows() != z.size() || sigma_hat.cols() != z.size()) {
    throw Error(ErrorCode::Domain, "influence_mu_sigma: dimension mismatch");
  }
  Eigen::VectorXd mu_star = z - mu_hat;
  Eigen::MatrixXd sigma_star = mu_star * mu_star.transpose() - sigma_hat;
  return {std::move(mu_star), Eigen::Map<const Eigen::VectorXd>(sigma_star.data(), sigma_star.size())};
}

InfluenceModel::InfluenceModel(Eigen::VectorXd mu_hat, Eigen::MatrixXd sigma_hat, double ridge)
    : mu_(std::move(mu_hat)), sigma_(std::move(sigma_hat)) {
  const Eigen::Index d = mu_.size();
  if (sigma_.rows() != d || sigma_.cols() != d) {
    throw Error(ErrorCode::Domain, "InfluenceModel: covariance does not match mean dimension");
  }
  const Eigen::MatrixXd sigma_ridged = sigma_ + ridge * Eigen::MatrixXd::Identity(d, d);
  sigma_inv_sqrt_ = sym_inv_sqrt(sigma_, ridge);
  sigma_inv_ = sigma_inv_sqrt_ * sigma_inv_sqrt_;
  const Eigen::MatrixXd sigma_sqrt = sym_sqrt(sigma_, ridge);
  Eigen::MatrixXd ksum = kron(sigma_sqrt, sigma_ridged) + kron(sigma_ridged, sigma_sqrt);
  ksum.diagonal().array() += ridge;
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (ksum + ksum.transpose()));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "Kronecker-sum matrix is not positive definite");
  }
  kron_inv_ = llt.solve(Eigen::MatrixXd::Identity(d * d, d * d));
}

InfluenceCoeffs InfluenceModel::coeffs(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Eigen::Index d = mu_.size();
  if (x.size() != d) throw Error(ErrorCode::Domain, "coeffs: point has wrong dimension");
  const Eigen::VectorXd y = x - mu_;
  const Eigen::VectorXd w = sigma_inv_ * y;
  const double q = y.dot(w);
  if (!(q > 1e-20)) throw ZeroRadiusError(0, "point coincides with the mean");
  const double u = std::sqrt(q);
  const Eigen::VectorXd white = sigma_inv_sqrt_ * y;

  InfluenceCoeffs c;
  c.a1 = -w.transpose() / u;
  c.a2.resize(d * d);
  for (Eigen::Index b = 0; b < d; ++b) {
    for (Eigen::Index a = 0; a < d; ++a) c.a2[a + b * d] = -w[a] * w[b] / (2.0 * u);
  }
  c.b1 = -white * c.a1 / q - sigma_inv_sqrt_ / u;

  // (y^T (x) I_d) K^{-1}: row k collects rows i*d + k of K^{-1} weighted by y_i
  Eigen::MatrixXd yk = Eigen::MatrixXd::Zero(d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) yk += y[i] * kron_inv_.middleRows(i * d, d);
  c.b2 = -white * c.a2 / q - yk / u;

  const Eigen::MatrixXd jac = dg_dv(white / u);
  c.c1 = jac * c.b1;
  c.c2 = jac * c.b2;
  return c;
}

InfluenceCoeffs coeffs_ABC(const Eigen::Ref<const Eigen::VectorXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& mu_hat,
                           const Eigen::Ref<const Eigen::MatrixXd>& sigma_hat, double ridge) {
  return InfluenceModel(mu_hat, sigma_hat, ridge).coeffs(x);
}

std::pair<double, Eigen::VectorXd> influence_u_theta(
    const InfluenceCoeffs& c, const Eigen::Ref<const Eigen::VectorXd>& mu_star,
    const Eigen::Ref<const Eigen::VectorXd>& sigma_star_vec) {
  if (mu_star.size() != c.a1.size() || sigma_star_vec.size() != c.a2.size()) {
    throw Error(ErrorCode::Domain, "influence_u_theta: shape mismatch");
  }
  const double u_star = c.a1.dot(mu_star) + c.a2.dot(sigma_star_vec);
  Eigen::VectorXd theta_star = c.c1 * mu_star + c.c2 * sigma_star_vec;
  return {u_star, std::move(theta_star)};
}

}  // namespace ellip
