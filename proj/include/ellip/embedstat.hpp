#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <map>
#include <tuple>

#include "ellip/kernels.hpp"
#include "ellip/standardize.hpp"

namespace ellip {

/// Absolute tolerance for every integral against the reference angular law.
inline constexpr double kP0QuadTol = 1e-9;

/// Density of the j-th angle (1-based, j <= d-1) under a spherical law:
/// proportional to cos^{d-1-j} on [-pi/2, pi/2] for j <= d-2, uniform on
/// [-pi, pi] for j = d-1. Throws Error(Domain) outside that range.
double theta_marginal_density(int j, int d, double theta);

/// Support [lo, hi] of the j-th angle.
std::pair<double, double> theta_support(int j, int d);

/// Integrals of the angle kernel against the reference law, with the
/// one-dimensional factors memoised. One instance serves a single test run.
class P0Integrator {
 public:
  P0Integrator(KernelSpec spec, int d);

  /// prod_j  int k(theta_j, t) f_j(t) dt
  double single(const Eigen::Ref<const Eigen::VectorXd>& theta);
  /// prod_j  int int k(t, t') f_j(t) f_j(t') dt dt'
  double dbl();

  double single_factor(int j, double theta_j);
  double double_factor(int j);

 private:
  KernelSpec spec_;
  int d_;
  std::map<std::tuple<int, long long>, double> single_cache_;
  std::map<int, double> double_cache_;
};

double p0_single_integral(const KernelSpec& spec, int d,
                          const Eigen::Ref<const Eigen::VectorXd>& theta);
double p0_double_integral(const KernelSpec& spec, int d);

struct GramPair {
  Eigen::MatrixXd k_u;
  Eigen::MatrixXd k_theta;           // uncentered
  Eigen::MatrixXd k_theta_centered;  // centered at the reference law
  Eigen::VectorXd p0_single;
  double p0_double = 0.0;
};

GramPair build_gram_pair(const StandardizedSample& sample, const KernelSpec& spec_u,
                         const KernelSpec& spec_theta);

/// (1/n) sum_ij (K_U)_ij (K~_Theta)_ij. Throws Error(Domain) on shape mismatch.
double test_statistic(const GramPair& g);

}  // namespace ellip
