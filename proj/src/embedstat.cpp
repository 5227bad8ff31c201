#include "ellip/embedstat.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "ellip/error.hpp"
#include "ellip/numquad.hpp"
#include "ellip/simd/dispatch.hpp"

namespace ellip {
namespace {

constexpr double kPi = std::numbers::pi;

void check_index(int j, int d) {
  if (d < 2 || j < 1 || j > d - 1) {
    throw Error(ErrorCode::Domain, "angle index " + std::to_string(j) + " out of range for d=" +
                                       std::to_string(d));
  }
}

double cos_power_normalizer(int power) {
  static std::mutex mutex;
  static std::map<int, double> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(power); it != cache.end()) return it->second;
  const double value =
      integrate1d([power](double t) { return std::pow(std::cos(t), power); }, -kPi / 2, kPi / 2,
                  1e-13)
          .value;
  cache.emplace(power, value);
  return value;
}

// Unnormalised density and its normaliser; avoids the domain check on the
// quadrature path.
double density_unchecked(int j, int d, double theta) {
  if (j == d - 1) return 1.0 / (2.0 * kPi);
  const int power = d - 1 - j;
  return std::pow(std::cos(theta), power) / cos_power_normalizer(power);
}

}  // namespace

std::pair<double, double> theta_support(int j, int d) {
  check_index(j, d);
  if (j == d - 1) return {-kPi, kPi};
  return {-kPi / 2, kPi / 2};
}

double theta_marginal_density(int j, int d, double theta) {
  const auto [lo, hi] = theta_support(j, d);
  if (!(theta >= lo && theta <= hi)) {
    throw Error(ErrorCode::Domain, "angle " + std::to_string(theta) + " outside support of " +
                                       "coordinate " + std::to_string(j));
  }
  return density_unchecked(j, d, theta);
}

P0Integrator::P0Integrator(KernelSpec spec, int d) : spec_(spec), d_(d) {
  validate(spec_);
  if (d_ < 2) throw Error(ErrorCode::Domain, "dimension must be at least 2");
}

double P0Integrator::single_factor(int j, double theta_j) {
  const auto key = std::make_tuple(j, std::llround(theta_j * 1e12));
  if (auto it = single_cache_.find(key); it != single_cache_.end()) return it->second;
  const auto [lo, hi] = theta_support(j, d_);
  const int d = d_;
  const KernelSpec spec = spec_;
  // split at the kernel peak so the bisection starts with it on a node boundary
  const double peak = std::clamp(theta_j, lo, hi);
  auto f = [&](double t) { return k_scalar(spec, theta_j, t) * density_unchecked(j, d, t); };
  double value = 0.0;
  if (peak > lo && peak < hi) {
    const double pts[] = {lo, peak, hi};
    value = integrate_partitioned(f, pts, kP0QuadTol).value;
  } else {
    value = integrate1d(f, lo, hi, kP0QuadTol).value;
  }
  single_cache_.emplace(key, value);
  return value;
}

double P0Integrator::double_factor(int j) {
  if (auto it = double_cache_.find(j); it != double_cache_.end()) return it->second;
  const auto [lo, hi] = theta_support(j, d_);
  const int d = d_;
  const KernelSpec spec = spec_;
  auto f = [&](double t, double t2) {
    return k_scalar(spec, t, t2) * density_unchecked(j, d, t) * density_unchecked(j, d, t2);
  };
  const double value = integrate2d(f, Rect{lo, hi, lo, hi}, kP0QuadTol).value;
  double_cache_.emplace(j, value);
  return value;
}

double P0Integrator::single(const Eigen::Ref<const Eigen::VectorXd>& theta) {
  if (theta.size() != d_ - 1) {
    throw Error(ErrorCode::Domain, "angle vector length " + std::to_string(theta.size()) +
                                       " does not match d-1=" + std::to_string(d_ - 1));
  }
  double value = 1.0;
  for (int j = 1; j <= d_ - 1; ++j) value *= single_factor(j, theta[j - 1]);
  return value;
}

double P0Integrator::dbl() {
  double value = 1.0;
  for (int j = 1; j <= d_ - 1; ++j) value *= double_factor(j);
  return value;
}

double p0_single_integral(const KernelSpec& spec, int d,
                          const Eigen::Ref<const Eigen::VectorXd>& theta) {
  return P0Integrator(spec, d).single(theta);
}

double p0_double_integral(const KernelSpec& spec, int d) { return P0Integrator(spec, d).dbl(); }

GramPair build_gram_pair(const StandardizedSample& sample, const KernelSpec& spec_u,
                         const KernelSpec& spec_theta) {
  const Eigen::Index n = sample.n();
  const int d = static_cast<int>(sample.d());
  GramPair g;
  g.k_u = gram_matrix(spec_u, sample.u_hat);
  g.k_theta = gram_matrix(spec_theta, sample.theta_hat);
  P0Integrator p0(spec_theta, d);
  g.p0_single.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) g.p0_single[i] = p0.single(sample.theta_hat.row(i).transpose());
  g.p0_double = p0.dbl();
  // s_i + s_j is formed first so the result is exactly symmetric
  const Eigen::VectorXd& s = g.p0_single;
  g.k_theta_centered =
      (g.k_theta.array() - (s.replicate(1, n) + s.transpose().replicate(n, 1)).array() + g.p0_double).matrix();
  return g;
}

double test_statistic(const GramPair& g) {
  const Eigen::Index n = g.k_u.rows();
  if (g.k_u.cols() != n || g.k_theta_centered.rows() != n || g.k_theta_centered.cols() != n) {
    throw Error(ErrorCode::Domain, "Gram matrices must be square and of equal size");
  }
  if (n == 0) throw Error(ErrorCode::Domain, "empty Gram matrices");
  const auto len = static_cast<std::size_t>(n * n);
  return simd::dot(std::span<const double>(g.k_u.data(), len),
                   std::span<const double>(g.k_theta_centered.data(), len)) /
         static_cast<double>(n);
}

}  // namespace ellip
