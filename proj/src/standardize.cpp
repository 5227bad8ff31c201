#include "ellip/standardize.hpp"

#include <cmath>
#include <string>

#include "ellip/error.hpp"
#include "ellip/polar.hpp"

namespace ellip {

SampleMatrix::SampleMatrix(Eigen::MatrixXd x) : x_(std::move(x)) {
  if (x_.cols() < 2) throw Error(ErrorCode::Domain, "sample needs at least 2 columns");
  if (x_.rows() <= x_.cols()) {
    throw Error(ErrorCode::Domain, "sample needs more rows than columns (n > d)");
  }
  if (!x_.allFinite()) throw Error(ErrorCode::Domain, "sample contains non-finite entries");
}

Moments sample_moments(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  const double n = static_cast<double>(x.rows());
  Moments m;
  m.mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - m.mean.transpose();
  m.cov = (centered.transpose() * centered) / n;
  m.cov = 0.5 * (m.cov + m.cov.transpose());
  return m;
}

namespace {

template <typename F>
Eigen::MatrixXd spectral_function(const Eigen::Ref<const Eigen::MatrixXd>& s, double ridge, F fn) {
  if (s.rows() != s.cols()) throw Error(ErrorCode::Domain, "matrix must be square");
  Eigen::MatrixXd shifted = 0.5 * (s + s.transpose());
  shifted.diagonal().array() += ridge;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(shifted);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::Numeric, "eigendecomposition failed");
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite, "matrix plus ridge is not positive definite");
  }
  const Eigen::VectorXd mapped = eig.eigenvalues().unaryExpr(fn);
  Eigen::MatrixXd out = eig.eigenvectors() * mapped.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace

Eigen::MatrixXd sym_inv_sqrt(const Eigen::Ref<const Eigen::MatrixXd>& s, double ridge) {
  return spectral_function(s, ridge, [](double l) { return 1.0 / std::sqrt(l); });
}

Eigen::MatrixXd sym_sqrt(const Eigen::Ref<const Eigen::MatrixXd>& s, double ridge) {
  return spectral_function(s, ridge, [](double l) { return std::sqrt(l); });
}

StandardizedSample standardize_sample(const SampleMatrix& x, double ridge) {
  if (!(ridge >= 0.0)) throw Error(ErrorCode::Domain, "ridge must be non-negative");
  const Moments m = sample_moments(x);
  StandardizedSample out;
  out.observations = x.data();
  out.mu_hat = m.mean;
  out.sigma_hat = m.cov;
  out.ridge = ridge;
  out.sigma_inv_sqrt = sym_inv_sqrt(m.cov, ridge);

  const Eigen::Index n = x.n(), d = x.d();
  const Eigen::MatrixXd w = (x.data().rowwise() - m.mean.transpose()) * out.sigma_inv_sqrt;
  out.u_hat.resize(n);
  out.v_hat.resize(n, d);
  out.theta_hat.resize(n, d - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = w.row(i).norm();
    // Whitened radii average sqrt(d); anything this small is the mean up to rounding.
    if (!(r > 1e-10)) {
      throw ZeroRadiusError(static_cast<std::size_t>(i),
                            "row " + std::to_string(i + 1) + " equals the sample mean (zero radius)");
    }
    out.u_hat[i] = r;
    out.v_hat.row(i) = w.row(i) / r;
    out.theta_hat.row(i) = sphere_to_angles(out.v_hat.row(i).transpose()).transpose();
  }
  return out;
}

}  // namespace ellip
