#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ellip/nulldist.hpp"
#include "ellip/standardize.hpp"

namespace ellip {

using Rng = std::mt19937_64;

enum class ScenarioKind { NullGaussian, AltChisq };

struct Scenario {
  ScenarioKind kind = ScenarioKind::NullGaussian;
  int df = 0;  // alternative only
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  std::uint64_t master_seed = 0;
};

struct ReplicateFailure {
  std::size_t replicate = 0;
  std::string message;
};

struct ExperimentReport {
  Scenario scenario;
  std::size_t reps = 0;
  double alpha = 0.0;
  std::vector<std::size_t> replicates;  // indices of successful replicates, ascending
  std::vector<double> p_values;         // aligned with `replicates`
  std::vector<ReplicateFailure> failures;
  double rejection_rate = 0.0;          // #{p < alpha} / #successful
};

/// Q diag(l) Q^T with l_i ~ U[1, 10] and Q Haar-distributed (QR of a Gaussian
/// matrix with the signs of R's diagonal folded into Q).
Eigen::MatrixXd random_covariance(Eigen::Index d, Rng& rng);

/// mu ~ N(0, 100 I), Sigma = random_covariance, rows mu + Sigma^{1/2} z.
SampleMatrix gen_null_sample(Eigen::Index n, Eigen::Index d, Rng& rng);

struct AltOptions {
  // Skip the chi-square replacement, leaving the N(0, 4) coordinates intact.
  bool empty_subset = false;
};

/// Z_k ~ N(0, 4); a random subset of ceil(d/3) coordinates is replaced by
/// W - df with W ~ chi2(df); mu_k = 40 beta_k - 20, beta_k ~ Beta(1/2, 1/2).
SampleMatrix gen_alt_sample(Eigen::Index n, Eigen::Index d, int df, Rng& rng,
                            const AltOptions& options = {});

/// The pieces a generated sample is assembled from: rows are mu + Sigma^{1/2} z_i.
struct LatentDraw {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd z;         // n x d, before correlation
  std::vector<bool> skewed;  // coordinates carrying the chi-square replacement
};

/// Same random stream as gen_null_sample / gen_alt_sample.
LatentDraw null_latent(Eigen::Index n, Eigen::Index d, Rng& rng);
LatentDraw alt_latent(Eigen::Index n, Eigen::Index d, int df, Rng& rng, const AltOptions& options = {});
SampleMatrix assemble(const LatentDraw& draw);

SampleMatrix generate(const Scenario& scenario, Rng& rng);

/// Stream seed for one replicate; independent of scheduling.
std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t replicate);

/// Runs `reps` seeded replicates on `threads` workers (0 = hardware
/// concurrency). The report does not depend on the thread count.
ExperimentReport run_experiment(const Scenario& scenario, std::size_t reps, double alpha,
                                const TestConfig& config = {}, unsigned threads = 0);

inline constexpr double kBoxCoxGridMin = -2.0;
inline constexpr double kBoxCoxGridMax = 2.0;
inline constexpr double kBoxCoxGridStep = 1e-3;

/// Grid maximiser of the Gaussian profile log-likelihood
/// -(n/2) log sigma^2(lambda) + (lambda - 1) sum log x.
/// Throws Error(Domain) on non-positive or non-finite values.
double boxcox_fit(const Eigen::Ref<const Eigen::VectorXd>& column);

/// (x^lambda - 1) / lambda, or log x for lambda = 0.
Eigen::VectorXd boxcox_apply(const Eigen::Ref<const Eigen::VectorXd>& column, double lambda);

}  // namespace ellip
