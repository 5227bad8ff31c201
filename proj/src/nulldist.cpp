#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ellip/error.hpp"
#include "ellip/nulldist.hpp"

namespace ellip {
namespace {

// Sigma* is symmetric, so A2 vec(Sigma*) only needs the upper triangle:
// coefficient columns (a, b) and (b, a) are merged, the Sigma* entry is kept once.
Eigen::Index compressed_size(Eigen::Index d) { return d + d * (d + 1) / 2; }

template <class Lin, class Quad, class Out>
void compress_into(const Lin& lin, const Quad& quad, Eigen::Index d, bool merge, Out&& out) {
  out.head(d) = lin;
  Eigen::Index col = d;
  for (Eigen::Index b = 0; b < d; ++b) {
    for (Eigen::Index a = 0; a <= b; ++a) {
      out[col++] = a == b || !merge ? quad[a + b * d] : quad[a + b * d] + quad[b + a * d];
    }
  }
}

Eigen::MatrixXd centered(const Eigen::MatrixXd& m) {
  // H m H with H = I - 11^T/n
  Eigen::MatrixXd out = m;
  out.rowwise() -= out.colwise().mean();
  out.colwise() -= out.rowwise().mean();
  return out;
}

Eigen::LLT<Eigen::MatrixXd> ridged_cholesky(const Eigen::MatrixXd& k, double ridge, const char* name) {
  Eigen::MatrixXd kr = k;
  kr.diagonal().array() += ridge;
  Eigen::LLT<Eigen::MatrixXd> llt(kr);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, std::string(name) + " Gram matrix is not positive definite");
  }
  return llt;
}

}  // namespace

Eigen::MatrixXd build_mtm(const StandardizedSample& sample, const GramPair& g,
                          const KernelSpec& spec_u, const KernelSpec& spec_theta, double ridge,
                          const MtmOptions& options) {
  const Eigen::Index n = sample.n();
  const Eigen::Index d = sample.d();
  const Eigen::Index p = d - 1;
  const Eigen::Index dim = compressed_size(d);
  if (g.k_u.rows() != n || g.k_theta.rows() != n) {
    throw Error(ErrorCode::Domain, "build_mtm: Gram matrices do not match the sample size");
  }
  const double nn = static_cast<double>(n);

  Eigen::MatrixXd ku = g.k_u;
  ku.diagonal().array() += ridge;
  Eigen::MatrixXd kt = g.k_theta;
  kt.diagonal().array() += ridge;
  const Eigen::MatrixXd m = centered(kt);

  Eigen::MatrixXd mtm = ku.cwiseProduct(m) / nn;
  if (options.zero_derivatives) return 0.5 * (mtm + mtm.transpose());

  const Eigen::LLT<Eigen::MatrixXd> chol_u = ridged_cholesky(g.k_u, ridge, "radius");
  const Eigen::LLT<Eigen::MatrixXd> chol_t = ridged_cholesky(g.k_theta, ridge, "angle");

  // Phi: compressed (mu*, Sigma*) of every observation; alpha / gamma[r]:
  // compressed coefficient rows A and C_r at every observation.
  const InfluenceModel model(sample.mu_hat, sample.sigma_hat, ridge);
  Eigen::MatrixXd phi(n, dim);
  Eigen::MatrixXd alpha(n, dim);
  std::vector<Eigen::MatrixXd> gam(static_cast<std::size_t>(p), Eigen::MatrixXd(n, dim));
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::VectorXd x = sample.observations.row(j).transpose();
    const auto [mu_star, sigma_star] = influence_mu_sigma(x, sample.mu_hat, sample.sigma_hat);
    compress_into(mu_star.transpose(), sigma_star.transpose(), d, false, phi.row(j));
    InfluenceCoeffs c;
    try {
      c = model.coeffs(x);
    } catch (const ZeroRadiusError&) {
      throw ZeroRadiusError(static_cast<std::size_t>(j), "observation " + std::to_string(j + 1) +
                                                             " coincides with the sample mean");
    }
    compress_into(c.a1, c.a2, d, true, alpha.row(j));
    for (Eigen::Index r = 0; r < p; ++r) {
      compress_into(c.c1.row(r), c.c2.row(r), d, true, gam[static_cast<std::size_t>(r)].row(j));
    }
  }

  // Kernel derivatives in the second argument at the sample points.
  Eigen::MatrixXd du(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) du(l, j) = k_u_d2(spec_u, sample.u_hat[l], sample.u_hat[j]);
  }
  std::vector<Eigen::MatrixXd> grad(static_cast<std::size_t>(p), Eigen::MatrixXd(n, n));
  for (Eigen::Index r = 0; r < p; ++r) {
    auto& gr = grad[static_cast<std::size_t>(r)];
    const auto th = sample.theta_hat.col(r);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index l = 0; l < n; ++l) {
        const double t = th[l] - th[j];
        const double slope = spec_theta.family == KernelFamily::Gaussian
                                 ? 2.0 * spec_theta.gamma * t
                                 : 2.0 * spec_theta.gamma * t / (1.0 + spec_theta.gamma * t * t);
        gr(l, j) = slope * g.k_theta(l, j);
      }
    }
  }

  // B = (1/n) [ (Du o M) alpha + sum_r (Ku o H G_r) Gamma_r ]
  Eigen::MatrixXd b = du.cwiseProduct(m) * alpha;
  std::vector<Eigen::MatrixXd> hg(static_cast<std::size_t>(p));
  for (Eigen::Index r = 0; r < p; ++r) {
    const auto ru = static_cast<std::size_t>(r);
    hg[ru] = grad[ru];
    hg[ru].rowwise() -= hg[ru].colwise().mean();
    b.noalias() += ku.cwiseProduct(hg[ru]) * gam[ru];
  }
  b /= nn;

  // W = (1/n^2) [ alpha^T (E o M) alpha + W2 + W2^T + W4 ]
  const Eigen::MatrixXd yu = chol_u.matrixL().solve(du);
  const Eigen::MatrixXd e = yu.transpose() * yu;
  Eigen::MatrixXd w = alpha.transpose() * e.cwiseProduct(m) * alpha;
  Eigen::MatrixXd w2 = Eigen::MatrixXd::Zero(dim, dim);
  const Eigen::MatrixXd dut = du.transpose();
  for (Eigen::Index r = 0; r < p; ++r) {
    const auto ru = static_cast<std::size_t>(r);
    w2.noalias() += alpha.transpose() * (dut.cwiseProduct(hg[ru]) * gam[ru]);
  }
  w += w2 + w2.transpose();
  std::vector<Eigen::MatrixXd> v(static_cast<std::size_t>(p));
  for (Eigen::Index r = 0; r < p; ++r) {
    const auto ru = static_cast<std::size_t>(r);
    v[ru] = chol_t.matrixL().solve(grad[ru]);
  }
  for (Eigen::Index r = 0; r < p; ++r) {
    const auto ru = static_cast<std::size_t>(r);
    for (Eigen::Index s = r; s < p; ++s) {
      const auto su = static_cast<std::size_t>(s);
      const Eigen::MatrixXd inner = ku.cwiseProduct(v[ru].transpose() * v[su]);
      const Eigen::MatrixXd term = gam[ru].transpose() * (inner * gam[su]);
      if (s == r) {
        w += term;
      } else {
        w += term + term.transpose();
      }
    }
  }
  w /= nn * nn;

  const Eigen::MatrixXd bp = b * phi.transpose();
  mtm += (bp + bp.transpose() + phi * w * phi.transpose()) / nn;
  return 0.5 * (mtm + mtm.transpose());
}

WeightSpectrum null_eigenvalues(const Eigen::Ref<const Eigen::MatrixXd>& mtm) {
  if (mtm.rows() != mtm.cols()) throw Error(ErrorCode::Domain, "null_eigenvalues: matrix not square");
  const Eigen::MatrixXd sym = 0.5 * (mtm + mtm.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::Numeric, "eigensolver did not converge");
  std::vector<double> lambdas(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + solver.eigenvalues().size());
  for (double& l : lambdas) l = std::max(l, 0.0);
  return WeightSpectrum(std::move(lambdas));
}

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

}  // namespace

TestResult run_test(const SampleMatrix& x, const TestConfig& config) {
  if (!(config.ridge >= 0.0)) throw Error(ErrorCode::Domain, "ridge must be >= 0");
  TestResult result;
  result.n = x.n();
  result.d = x.d();
  result.ridge = config.ridge;
  result.kernel = config.kernel;

  const StandardizedSample sample = stage("standardize", [&] { return standardize_sample(x, config.ridge); });
  KernelSpec spec_u{config.kernel, 0.0};
  KernelSpec spec_theta{config.kernel, 0.0};
  stage("bandwidth", [&] {
    spec_u.gamma = config.gamma_u ? *config.gamma_u : bandwidth_heuristic(sample.u_hat);
    spec_theta.gamma = config.gamma_theta ? *config.gamma_theta : bandwidth_heuristic(sample.theta_hat);
    validate(spec_u);
    validate(spec_theta);
    return 0;
  });
  result.gamma_u = spec_u.gamma;
  result.gamma_theta = spec_theta.gamma;

  const GramPair g = stage("gram", [&] { return build_gram_pair(sample, spec_u, spec_theta); });
  result.statistic = stage("statistic", [&] { return test_statistic(g); });
  const Eigen::MatrixXd mtm =
      stage("null_matrix", [&] { return build_mtm(sample, g, spec_u, spec_theta, config.ridge); });
  result.eigenvalues = stage("eigenvalues", [&] { return null_eigenvalues(mtm); });
  result.p_value = stage("p_value", [&] {
    return imhof_tail(result.eigenvalues, std::max(result.statistic, 0.0), config.quad_tol);
  });
  return result;
}

}  // namespace ellip
