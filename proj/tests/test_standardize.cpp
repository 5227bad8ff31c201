#include <gtest/gtest.h>

#include <random>

#include "ellip/error.hpp"
#include "ellip/polar.hpp"
#include "ellip/standardize.hpp"
#include "support.hpp"

using namespace ellip;
using ellip::testing::gaussian_matrix;

TEST(SampleMatrix, Validates) {
  EXPECT_THROW(SampleMatrix(Eigen::MatrixXd::Zero(2, 2)), Error);  // n <= d
  EXPECT_THROW(SampleMatrix(Eigen::MatrixXd::Zero(5, 1)), Error);  // d < 2
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(5, 2);
  x(3, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(SampleMatrix{x}, Error);
}

TEST(SampleMoments, RepeatedRow) {
  Eigen::MatrixXd x(2, 3);
  x << 1, 2, 3, 1, 2, 3;
  const Moments m = sample_moments(x);
  EXPECT_TRUE(m.mean.isApprox(Eigen::Vector3d(1, 2, 3)));
  EXPECT_TRUE(m.cov.isZero(0));
}

TEST(SampleMoments, Square) {
  Eigen::MatrixXd x(4, 2);
  x << 0, 0, 2, 0, 0, 2, 2, 2;
  const Moments m = sample_moments(x);
  EXPECT_TRUE(m.mean.isApprox(Eigen::Vector2d(1, 1)));
  EXPECT_LT((m.cov - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SampleMoments, MatchesDoubleLoop) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd x = gaussian_matrix(50, 3, rng);
  const Moments m = sample_moments(x);
  for (int a = 0; a < 3; ++a) {
    double mean_a = 0;
    for (int i = 0; i < 50; ++i) mean_a += x(i, a) / 50;
    EXPECT_NEAR(m.mean[a], mean_a, 1e-12);
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      double s = 0;
      for (int i = 0; i < 50; ++i) s += (x(i, a) - m.mean[a]) * (x(i, b) - m.mean[b]);
      EXPECT_NEAR(m.cov(a, b), s / 50, 1e-12);
    }
  }
}

TEST(SymInvSqrt, Examples) {
  EXPECT_TRUE(sym_inv_sqrt(Eigen::Matrix3d::Identity(), 0.0).isApprox(Eigen::Matrix3d::Identity()));
  const Eigen::MatrixXd r = sym_inv_sqrt(Eigen::Vector2d(4, 9).asDiagonal().toDenseMatrix(), 0.0);
  EXPECT_NEAR(r(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(r(1, 1), 1.0 / 3, 1e-15);
  EXPECT_NEAR(r(0, 1), 0.0, 1e-15);
}

TEST(SymInvSqrt, DefiningEquation) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd g = gaussian_matrix(5, 5, rng);
    const Eigen::MatrixXd s = g * g.transpose() + 0.1 * Eigen::MatrixXd::Identity(5, 5);
    const double ridge = 1e-6;
    const Eigen::MatrixXd r = sym_inv_sqrt(s, ridge);
    EXPECT_LT((r - r.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    const Eigen::MatrixXd id = r * (s + ridge * Eigen::MatrixXd::Identity(5, 5)) * r;
    EXPECT_LT((id - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-8);
    const Eigen::MatrixXd root = sym_sqrt(s, ridge);
    EXPECT_LT((root * r - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(SymInvSqrt, NotPositiveDefinite) {
  try {
    sym_inv_sqrt(Eigen::Vector2d(1, -1).asDiagonal().toDenseMatrix(), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
  }
  EXPECT_THROW(sym_inv_sqrt(Eigen::Matrix2d::Zero(), 0.0), Error);
  EXPECT_NO_THROW(sym_inv_sqrt(Eigen::Matrix2d::Zero(), 1e-6));
}

TEST(Standardize, WhitenedDataKeepsNorms) {
  // rows chosen so the mean is 0 and the divisor-n covariance is I
  Eigen::MatrixXd x(4, 2);
  x << 1, 1, -1, 1, 1, -1, -1, -1;
  const StandardizedSample s = standardize_sample(SampleMatrix(x), 0.0);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.u_hat[i], x.row(i).norm(), 1e-14);
}

TEST(Standardize, ScriptedSmallDataset) {
  Eigen::MatrixXd x(5, 2);
  x << 1, 2, 3, 1, 0, 0, 2, 5, 4, 2;
  const StandardizedSample s = standardize_sample(SampleMatrix(x), 0.0);
  // step by step: mean, covariance (divisor n), its inverse root via a 2x2
  // closed form, then norms and angles
  const Eigen::Vector2d mean(2.0, 2.0);
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (int i = 0; i < 5; ++i) {
    const Eigen::Vector2d c = x.row(i).transpose() - mean;
    cov += c * c.transpose() / 5.0;
  }
  // sqrt of a 2x2 SPD: (A + sqrt(det) I) / sqrt(tr + 2 sqrt(det))
  const double sd = std::sqrt(cov.determinant());
  const Eigen::Matrix2d root = (cov + sd * Eigen::Matrix2d::Identity()) / std::sqrt(cov.trace() + 2 * sd);
  const Eigen::Matrix2d inv_root = root.inverse();
  for (int i = 0; i < 5; ++i) {
    const Eigen::Vector2d w = inv_root * (x.row(i).transpose() - mean);
    EXPECT_NEAR(s.u_hat[i], w.norm(), 1e-12);
    EXPECT_NEAR(s.theta_hat(i, 0), std::atan2(w[0], w[1]), 1e-12);
  }
}

TEST(Standardize, AffineInvarianceOfRadii) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd x = gaussian_matrix(40, 3, rng);
  Eigen::MatrixXd a = gaussian_matrix(3, 3, rng);
  a += 3 * Eigen::MatrixXd::Identity(3, 3);
  const Eigen::RowVector3d b(5.0, -2.0, 0.5);
  const Eigen::MatrixXd y = (x * a.transpose()).rowwise() + b;
  const StandardizedSample sx = standardize_sample(SampleMatrix(x), 0.0);
  const StandardizedSample sy = standardize_sample(SampleMatrix(y), 0.0);
  EXPECT_LT((sx.u_hat - sy.u_hat).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Standardize, MahalanobisIdentityAndRanges) {
  std::mt19937_64 rng(4);
  for (int d : {2, 3, 6}) {
    const Eigen::MatrixXd x = gaussian_matrix(100, d, rng);
    const StandardizedSample s = standardize_sample(SampleMatrix(x), 0.0);
    EXPECT_NEAR(s.u_hat.squaredNorm() / 100.0, d, 1e-8);
    for (int i = 0; i < 100; ++i) {
      EXPECT_GE(s.u_hat[i], 0.0);
      EXPECT_TRUE(in_angle_box(s.theta_hat.row(i).transpose()));
    }
    const Eigen::MatrixXd ridged = s.sigma_hat + s.ridge * Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd id = s.sigma_inv_sqrt * ridged * s.sigma_inv_sqrt;
    EXPECT_LT((id - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Standardize, ZeroRadiusNamesRow) {
  Eigen::MatrixXd x(5, 2);
  x << 1, 0, -1, 0, 0, 0, 0, 1, 0, -1;
  try {
    standardize_sample(SampleMatrix(x));
    FAIL();
  } catch (const ZeroRadiusError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.code(), ErrorCode::ZeroRadius);
  }
}
