#include "ellip/simharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "ellip/error.hpp"

namespace ellip {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_shape(Eigen::Index n, Eigen::Index d) {
  if (d < 2 || n <= d) {
    throw Error(ErrorCode::Domain, "generator needs n > d >= 2 (n=" + std::to_string(n) +
                                       ", d=" + std::to_string(d) + ")");
  }
}

}  // namespace

Eigen::MatrixXd random_covariance(Eigen::Index d, Rng& rng) {
  if (d < 2) throw Error(ErrorCode::Domain, "random_covariance needs d >= 2");
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(1.0, 10.0);
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = normal(rng);
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  Eigen::VectorXd lambda(d);
  for (Eigen::Index i = 0; i < d; ++i) lambda[i] = uniform(rng);
  const Eigen::MatrixXd s = q * lambda.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

LatentDraw null_latent(Eigen::Index n, Eigen::Index d, Rng& rng) {
  check_shape(n, d);
  std::normal_distribution<double> normal;
  LatentDraw out;
  out.mu.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) out.mu[k] = 10.0 * normal(rng);
  out.sigma = random_covariance(d, rng);
  out.z.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) out.z(i, k) = normal(rng);
  }
  out.skewed.assign(static_cast<std::size_t>(d), false);
  return out;
}

LatentDraw alt_latent(Eigen::Index n, Eigen::Index d, int df, Rng& rng, const AltOptions& options) {
  check_shape(n, d);
  if (df < 1) throw Error(ErrorCode::Domain, "degrees of freedom must be >= 1");
  std::normal_distribution<double> normal(0.0, 2.0);
  std::gamma_distribution<double> half_gamma(0.5, 1.0);
  std::chi_squared_distribution<double> chisq(static_cast<double>(df));

  LatentDraw out;
  out.mu.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double a = half_gamma(rng);
    const double b = half_gamma(rng);
    out.mu[k] = 40.0 * (a / (a + b)) - 20.0;
  }
  out.sigma = random_covariance(d, rng);

  std::vector<Eigen::Index> coords(static_cast<std::size_t>(d));
  std::iota(coords.begin(), coords.end(), Eigen::Index{0});
  std::shuffle(coords.begin(), coords.end(), rng);
  const auto subset = options.empty_subset ? std::size_t{0} : static_cast<std::size_t>((d + 2) / 3);
  out.skewed.assign(static_cast<std::size_t>(d), false);
  for (std::size_t s = 0; s < subset; ++s) out.skewed[static_cast<std::size_t>(coords[s])] = true;

  out.z.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      out.z(i, k) = out.skewed[static_cast<std::size_t>(k)] ? chisq(rng) - df : normal(rng);
    }
  }
  return out;
}

SampleMatrix assemble(const LatentDraw& draw) {
  const Eigen::MatrixXd root = sym_sqrt(draw.sigma, 0.0);
  Eigen::MatrixXd x = draw.z * root;  // root is symmetric
  x.rowwise() += draw.mu.transpose();
  return SampleMatrix(std::move(x));
}

SampleMatrix gen_null_sample(Eigen::Index n, Eigen::Index d, Rng& rng) {
  return assemble(null_latent(n, d, rng));
}

SampleMatrix gen_alt_sample(Eigen::Index n, Eigen::Index d, int df, Rng& rng,
                            const AltOptions& options) {
  return assemble(alt_latent(n, d, df, rng, options));
}

SampleMatrix generate(const Scenario& scenario, Rng& rng) {
  if (scenario.kind == ScenarioKind::NullGaussian) return gen_null_sample(scenario.n, scenario.d, rng);
  return gen_alt_sample(scenario.n, scenario.d, scenario.df, rng);
}

std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t replicate) {
  return splitmix64(master_seed ^ splitmix64(replicate + 0x632be59bd9b4e019ULL));
}

ExperimentReport run_experiment(const Scenario& scenario, std::size_t reps, double alpha,
                                const TestConfig& config, unsigned threads) {
  if (reps < 1) throw Error(ErrorCode::Domain, "reps must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::Domain, "alpha must lie in (0, 1)");
  check_shape(scenario.n, scenario.d);

  std::vector<double> p(reps, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> errors(reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) {
      try {
        Rng rng(replicate_seed(scenario.master_seed, r));
        const SampleMatrix x = generate(scenario, rng);
        p[r] = run_test(x, config).p_value;
      } catch (const Error& e) {
        errors[r] = e.what();
      }
    }
  };
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, reps));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  ExperimentReport report;
  report.scenario = scenario;
  report.reps = reps;
  report.alpha = alpha;
  std::size_t rejected = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    if (errors[r].empty()) {
      report.replicates.push_back(r);
      report.p_values.push_back(p[r]);
      if (p[r] < alpha) ++rejected;
    } else {
      report.failures.push_back({r, errors[r]});
    }
  }
  report.rejection_rate = report.p_values.empty()
                              ? std::numeric_limits<double>::quiet_NaN()
                              : static_cast<double>(rejected) / static_cast<double>(report.p_values.size());
  return report;
}

namespace {

void check_positive(const Eigen::Ref<const Eigen::VectorXd>& column) {
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    if (!(std::isfinite(column[i]) && column[i] > 0.0)) {
      throw Error(ErrorCode::Domain, "Box-Cox needs positive finite values; entry " +
                                         std::to_string(i + 1) + " is " + std::to_string(column[i]));
    }
  }
}

}  // namespace

Eigen::VectorXd boxcox_apply(const Eigen::Ref<const Eigen::VectorXd>& column, double lambda) {
  check_positive(column);
  Eigen::VectorXd out(column.size());
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    const double lx = std::log(column[i]);
    out[i] = lambda == 0.0 ? lx : std::expm1(lambda * lx) / lambda;
  }
  return out;
}

double boxcox_fit(const Eigen::Ref<const Eigen::VectorXd>& column) {
  check_positive(column);
  if (column.size() < 2) throw Error(ErrorCode::Domain, "Box-Cox needs at least two values");
  const double n = static_cast<double>(column.size());
  const Eigen::VectorXd logs = column.array().log();
  const double sum_log = logs.sum();
  const auto steps = static_cast<long>(std::lround((kBoxCoxGridMax - kBoxCoxGridMin) / kBoxCoxGridStep));
  double best_lambda = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd y(column.size());
  for (long s = 0; s <= steps; ++s) {
    double lambda = kBoxCoxGridMin + static_cast<double>(s) * kBoxCoxGridStep;
    if (std::abs(lambda) < 0.5 * kBoxCoxGridStep) lambda = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      y[i] = lambda == 0.0 ? logs[i] : std::expm1(lambda * logs[i]) / lambda;
    }
    const double var = (y.array() - y.mean()).square().mean();
    if (!(var > 0.0) || !std::isfinite(var)) continue;
    const double ll = -0.5 * n * std::log(var) + (lambda - 1.0) * sum_log;
    if (ll > best) {
      best = ll;
      best_lambda = lambda;
    }
  }
  if (!std::isfinite(best)) throw Error(ErrorCode::Domain, "Box-Cox likelihood is degenerate (constant column?)");
  return best_lambda;
}

}  // namespace ellip
