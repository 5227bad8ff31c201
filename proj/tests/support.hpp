#pragma once

// Independent oracles shared by the unit tests and the acceptance binary.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ellip/embedstat.hpp"
#include "ellip/kernels.hpp"
#include "ellip/nulldist.hpp"
#include "ellip/polar.hpp"
#include "ellip/standardize.hpp"

namespace ellip::testing {

struct McEstimate {
  double mean;
  double se;
};

template <class Draw>
McEstimate monte_carlo(std::size_t draws, Draw&& draw) {
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double v = draw();
    s += v;
    s2 += v * v;
  }
  const double m = s / static_cast<double>(draws);
  const double var = s2 / static_cast<double>(draws) - m * m;
  return {m, std::sqrt(std::max(var, 0.0) / static_cast<double>(draws))};
}

// P(chi2_1 > x) = erfc(sqrt(x / 2)).
inline double chi2_1_upper(double x) { return std::erfc(std::sqrt(x / 2.0)); }

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

// Draw of one angle coordinate from the reference law by rejection sampling
// (cos^p is bounded by 1 on [-pi/2, pi/2]).
inline double draw_angle(int j, int d, std::mt19937_64& rng) {
  constexpr double pi = std::numbers::pi;
  if (j == d - 1) return std::uniform_real_distribution<double>(-pi, pi)(rng);
  std::uniform_real_distribution<double> unif(-pi / 2, pi / 2);
  std::uniform_real_distribution<double> accept(0.0, 1.0);
  const int power = d - 1 - j;
  for (;;) {
    const double t = unif(rng);
    if (accept(rng) <= std::pow(std::cos(t), power)) return t;
  }
}

// (1/n) sum_ij kU(Ui,Uj) <k~(.,Ti), k~(.,Tj)> with every term evaluated by
// direct kernel calls and reference-law integrals.
inline double brute_force_statistic(const StandardizedSample& s, const KernelSpec& su,
                                    const KernelSpec& st) {
  const Eigen::Index n = s.n();
  const int d = static_cast<int>(s.d());
  std::vector<double> single(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    single[static_cast<std::size_t>(i)] = p0_single_integral(st, d, s.theta_hat.row(i).transpose());
  }
  const double dbl = p0_double_integral(st, d);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double inner = k_theta(st, s.theta_hat.row(i).transpose(), s.theta_hat.row(j).transpose()) -
                           single[static_cast<std::size_t>(i)] - single[static_cast<std::size_t>(j)] + dbl;
      total += k_u(su, s.u_hat[i], s.u_hat[j]) * inner;
    }
  }
  return total / static_cast<double>(n);
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Eigen::MatrixXd sym_power(const Eigen::MatrixXd& m, double p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvectors() * es.eigenvalues().array().pow(p).matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

// Explicit n^2-coordinate representers: a_i built term by term with full
// d^2 influence vectors, m_i = n^{-1/2} (K_U^{1/2} (x) K_Theta^{1/2}) a_i,
// result M^T M. No compression, no Hadamard identities.
inline Eigen::MatrixXd materialized_mtm(const StandardizedSample& s, const KernelSpec& su,
                                        const KernelSpec& st, double ridge,
                                        bool zero_derivatives = false) {
  const Eigen::Index n = s.n();
  const Eigen::Index d = s.d();
  const double nn = static_cast<double>(n);
  Eigen::MatrixXd ku(n, n), kt(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      ku(i, j) = k_u(su, s.u_hat[i], s.u_hat[j]);
      kt(i, j) = k_theta(st, s.theta_hat.row(i).transpose(), s.theta_hat.row(j).transpose());
    }
  }
  ku.diagonal().array() += ridge;
  kt.diagonal().array() += ridge;
  const Eigen::MatrixXd ku_inv = ku.inverse();
  const Eigen::MatrixXd kt_inv = kt.inverse();
  const Eigen::MatrixXd root = kron(sym_power(ku, 0.5), sym_power(kt, 0.5));

  InfluenceModel model(s.mu_hat, s.sigma_hat, ridge);
  std::vector<InfluenceCoeffs> coeffs;
  for (Eigen::Index j = 0; j < n; ++j) coeffs.push_back(model.coeffs(s.observations.row(j).transpose()));

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Eigen::MatrixXd m(n * n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [mu_star, sigma_star] =
        influence_mu_sigma(s.observations.row(i).transpose(), s.mu_hat, s.sigma_hat);
    Eigen::VectorXd ei = Eigen::VectorXd::Unit(n, i);
    Eigen::VectorXd a = kron(ei, ei - ones / nn);
    if (!zero_derivatives) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto [u_star, theta_star] =
            influence_u_theta(coeffs[static_cast<std::size_t>(j)], mu_star, sigma_star);
        Eigen::VectorXd du(n), dt = Eigen::VectorXd::Zero(n);
        for (Eigen::Index l = 0; l < n; ++l) {
          du[l] = k_u_d2(su, s.u_hat[l], s.u_hat[j]);
          dt[l] = k_theta_grad2(st, s.theta_hat.row(l).transpose(), s.theta_hat.row(j).transpose())
                      .dot(theta_star);
        }
        const Eigen::VectorXd ej = Eigen::VectorXd::Unit(n, j);
        a += kron(ku_inv * du * u_star, ej - ones / nn) / nn;
        a += kron(ej, kt_inv * dt) / nn;
      }
    }
    m.col(i) = root * a / std::sqrt(nn);
  }
  return m.transpose() * m;
}

struct Functionals {
  double u;
  Eigen::VectorXd theta;
};

inline Functionals evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                     double ridge) {
  const Eigen::VectorXd w = sym_inv_sqrt(sigma, ridge) * (x - mu);
  return {w.norm(), sphere_to_angles(w / w.norm())};
}

// Value of U and Theta at x under (1 - eps) F + eps delta_z, minus the value
// under F, divided by eps. F enters through its mean and covariance only.
inline Functionals mixture_fd(const Eigen::VectorXd& x, const Eigen::VectorXd& z, const Eigen::VectorXd& mu,
                       const Eigen::MatrixXd& sigma, double ridge, double eps = 1e-6) {
  const Eigen::VectorXd dz = z - mu;
  const Eigen::VectorXd mu_e = mu + eps * dz;
  const Eigen::MatrixXd sigma_e = (1 - eps) * sigma + eps * (1 - eps) * dz * dz.transpose();
  const Functionals base = evaluate(x, mu, sigma, ridge);
  const Functionals pert = evaluate(x, mu_e, sigma_e, ridge);
  return {(pert.u - base.u) / eps, (pert.theta - base.theta) / eps};
}

}  // namespace ellip::testing
