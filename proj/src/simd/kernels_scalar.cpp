#include <cmath>

#include "kernels_impl.hpp"

namespace ellip::simd::scalar {
namespace {

void kernel_row(KernelFamily family, double gamma, const double* coords, std::size_t n,
                std::size_t dim, const double* point, double* out) {
  if (family == KernelFamily::Gaussian) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < dim; ++r) {
        const double diff = point[r] - coords[r * n + j];
        acc += diff * diff;
      }
      out[j] = std::exp(-gamma * acc);
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 1.0;
      for (std::size_t r = 0; r < dim; ++r) {
        const double diff = point[r] - coords[r * n + j];
        acc *= 1.0 / (1.0 + gamma * diff * diff);
      }
      out[j] = acc;
    }
  }
}

double dot(const double* a, const double* b, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += a[i] * b[i];
  return s;
}

double sum_pairwise_distances(const double* coords, std::size_t n, std::size_t dim) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < dim; ++r) {
        const double diff = coords[r * n + i] - coords[r * n + j];
        acc += diff * diff;
      }
      total += std::sqrt(acc);
    }
  }
  return total;
}

void vexp(const double* in, double* out, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) out[i] = std::exp(in[i]);
}

}  // namespace

const KernelTable table{kernel_row, dot, sum_pairwise_distances, vexp};

}  // namespace ellip::simd::scalar
