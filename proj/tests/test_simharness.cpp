#include <gtest/gtest.h>

#include <cmath>

#include "ellip/error.hpp"
#include "ellip/simharness.hpp"

using namespace ellip;

TEST(RandomCovariance, SymmetricWithEigenvaluesInRange) {
  Rng rng(1);
  for (Eigen::Index d : {2, 3, 7, 15}) {
    const Eigen::MatrixXd s = random_covariance(d, rng);
    EXPECT_LT((s - s.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s).eigenvalues();
    EXPECT_GE(ev.minCoeff(), 1.0 - 1e-10);
    EXPECT_LE(ev.maxCoeff(), 10.0 + 1e-10);
  }
}

TEST(RandomCovariance, Deterministic) {
  Rng a(77), b(77);
  EXPECT_EQ(random_covariance(2, a), random_covariance(2, b));
}

TEST(RandomCovariance, LargestEigenvalueMean) {
  Rng rng(2);
  double total = 0;
  for (int i = 0; i < 1000; ++i) {
    total += Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(random_covariance(2, rng)).eigenvalues().maxCoeff();
  }
  const double mean = total / 1000;
  EXPECT_GE(mean, 6.0);
  EXPECT_LE(mean, 8.5);
}

TEST(RandomCovariance, RejectsScalar) {
  Rng rng(3);
  EXPECT_THROW(random_covariance(1, rng), Error);
}

TEST(NullSample, MomentsMatchLatentParameters) {
  Rng rng(4), replay(4);
  const SampleMatrix x = gen_null_sample(10'000, 4, rng);
  const LatentDraw latent = null_latent(10'000, 4, replay);
  EXPECT_EQ(x.data(), assemble(latent).data());
  const Moments m = sample_moments(x);
  for (Eigen::Index k = 0; k < 4; ++k) {
    const double se = std::sqrt(latent.sigma(k, k) / 10'000.0);
    EXPECT_LT(std::abs(m.mean[k] - latent.mu[k]), 5 * se);
  }
  EXPECT_LT((m.cov - latent.sigma).norm() / latent.sigma.norm(), 0.1);
}

TEST(NullSample, DeterministicAndValidated) {
  Rng a(5), b(5);
  EXPECT_EQ(gen_null_sample(50, 3, a).data(), gen_null_sample(50, 3, b).data());
  EXPECT_THROW(gen_null_sample(3, 3, a), Error);
}

TEST(AltSample, EmptySubsetGivesGaussianLatents) {
  Rng rng(6);
  const LatentDraw latent = alt_latent(20'000, 6, 2, rng, AltOptions{.empty_subset = true});
  for (bool s : latent.skewed) EXPECT_FALSE(s);
  for (Eigen::Index k = 0; k < 6; ++k) {
    const Eigen::ArrayXd c = latent.z.col(k).array() - latent.z.col(k).mean();
    const double var = c.square().mean();
    EXPECT_NEAR(var, 4.0, 0.15);
    EXPECT_LT(std::abs((c.cube().mean()) / std::pow(var, 1.5)), 0.06);
  }
}

TEST(AltSample, SkewedCoordinatesFollowChiSquare) {
  for (int df : {2, 4}) {
    Rng rng(7 + df);
    const LatentDraw latent = alt_latent(100'000, 9, df, rng);
    int count = 0;
    for (Eigen::Index k = 0; k < 9; ++k) {
      if (!latent.skewed[static_cast<std::size_t>(k)]) continue;
      ++count;
      const Eigen::ArrayXd c = latent.z.col(k).array() - latent.z.col(k).mean();
      const double skew = c.cube().mean() / std::pow(c.square().mean(), 1.5);
      const double target = std::sqrt(8.0 / df);
      EXPECT_LT(std::abs(skew - target), 0.2 * target) << "df=" << df;
      EXPECT_NEAR(latent.z.col(k).mean(), 0.0, 0.05);
    }
    EXPECT_EQ(count, 3);
  }
}

TEST(AltSample, SubsetSizeAndMeanRange) {
  Rng rng(10);
  for (Eigen::Index d : {2, 3, 4, 10, 15}) {
    const LatentDraw latent = alt_latent(d + 5, d, 2, rng);
    EXPECT_EQ(std::count(latent.skewed.begin(), latent.skewed.end(), true), (d + 2) / 3);
    EXPECT_LE(latent.mu.cwiseAbs().maxCoeff(), 20.0);
  }
}

TEST(AltSample, Deterministic) {
  Rng a(11), b(11);
  EXPECT_EQ(gen_alt_sample(40, 5, 4, a).data(), gen_alt_sample(40, 5, 4, b).data());
  Rng c(11);
  EXPECT_THROW(gen_alt_sample(40, 5, 0, c), Error);
}

TEST(ReplicateSeed, DistinctAndStable) {
  EXPECT_EQ(replicate_seed(1, 2), replicate_seed(1, 2));
  EXPECT_NE(replicate_seed(1, 2), replicate_seed(1, 3));
  EXPECT_NE(replicate_seed(1, 2), replicate_seed(2, 2));
}

TEST(RunExperiment, SingleReplicate) {
  const Scenario sc{ScenarioKind::NullGaussian, 0, 40, 3, 99};
  const ExperimentReport r = run_experiment(sc, 1, 0.1);
  ASSERT_EQ(r.p_values.size(), 1u);
  EXPECT_TRUE(r.rejection_rate == 0.0 || r.rejection_rate == 1.0);
  EXPECT_EQ(r.rejection_rate, r.p_values[0] < 0.1 ? 1.0 : 0.0);
}

TEST(RunExperiment, IndependentOfThreadCount) {
  const Scenario sc{ScenarioKind::AltChisq, 2, 60, 3, 1234};
  const ExperimentReport one = run_experiment(sc, 6, 0.1, {}, 1);
  const ExperimentReport three = run_experiment(sc, 6, 0.1, {}, 3);
  EXPECT_EQ(one.p_values, three.p_values);
  EXPECT_EQ(one.replicates, three.replicates);
  EXPECT_EQ(one.rejection_rate, three.rejection_rate);
  std::size_t rejected = 0;
  for (double p : one.p_values) rejected += p < 0.1;
  EXPECT_EQ(one.rejection_rate, static_cast<double>(rejected) / static_cast<double>(one.p_values.size()));
}

TEST(RunExperiment, Validation) {
  const Scenario sc{ScenarioKind::NullGaussian, 0, 40, 3, 1};
  EXPECT_THROW(run_experiment(sc, 0, 0.1), Error);
  EXPECT_THROW(run_experiment(sc, 5, 1.5), Error);
}

TEST(BoxCox, LogNormalColumnGivesLogTransform) {
  Rng rng(12);
  std::normal_distribution<double> normal;
  Eigen::VectorXd col(10'000);
  for (auto& v : col) v = std::exp(normal(rng));
  EXPECT_LE(std::abs(boxcox_fit(col)), 0.1);
}

TEST(BoxCox, SquaredNormalColumnGivesSquareRoot) {
  Rng rng(13);
  std::normal_distribution<double> normal(10.0, 1.0);
  Eigen::VectorXd col(10'000);
  for (auto& v : col) v = std::pow(normal(rng), 2);
  EXPECT_NEAR(boxcox_fit(col), 0.5, 0.15);
}

TEST(BoxCox, ScalingMovesLambdaByAtMostOneStep) {
  Rng rng(14);
  std::gamma_distribution<double> gamma(3.0, 1.0);
  Eigen::VectorXd col(2000);
  for (auto& v : col) v = gamma(rng);
  const double base = boxcox_fit(col);
  for (double c : {0.01, 3.0, 1000.0}) {
    EXPECT_LE(std::abs(boxcox_fit(c * col) - base), kBoxCoxGridStep + 1e-12) << c;
  }
}

TEST(BoxCox, ApplyExamples) {
  const Eigen::Vector3d x(0.5, 3.0, 7.0);
  EXPECT_TRUE(boxcox_apply(x, 1.0).isApprox((x.array() - 1.0).matrix(), 1e-15));
  EXPECT_TRUE(boxcox_apply(x, 0.0).isApprox(x.array().log().matrix(), 1e-15));
  EXPECT_NEAR(boxcox_apply(Eigen::VectorXd::Constant(1, 3.0), 2.0)[0], 4.0, 1e-14);
}

TEST(BoxCox, RejectsNonPositive) {
  const Eigen::Vector3d x(1.0, 0.0, 2.0);
  EXPECT_THROW(boxcox_fit(x), Error);
  EXPECT_THROW(boxcox_apply(x, 0.5), Error);
  EXPECT_THROW(boxcox_apply(-x, 0.5), Error);
}
