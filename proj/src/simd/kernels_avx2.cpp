// AVX2 + FMA variants. This translation unit alone is compiled with
// -mavx2 -mfma; the dispatcher only hands out this table after checking CPUID.

#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace ellip::simd::avx2 {
namespace {

constexpr std::size_t kLanes = 4;

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// exp(x) = 2^k * exp(r), |r| <= ln2/2, with a degree-13 Taylor polynomial
// for exp(r) (truncation error < 1e-17). Inputs above 709 are clamped,
// inputs below -708 return 0.
inline __m256d exp_pd(__m256d x) {
  const __m256d hi_limit = _mm256_set1_pd(709.0);
  const __m256d lo_limit = _mm256_set1_pd(-708.0);
  const __m256d underflow = _mm256_cmp_pd(x, lo_limit, _CMP_LT_OQ);
  x = _mm256_min_pd(x, hi_limit);
  x = _mm256_max_pd(x, lo_limit);

  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, ln2_hi, x);
  r = _mm256_fnmadd_pd(k, ln2_lo, r);

  static constexpr double kInvFact[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0,
      1.0 / 40320.0,      1.0 / 5040.0,      1.0 / 720.0,      1.0 / 120.0,     1.0 / 24.0,
      1.0 / 6.0,          0.5,               1.0,              1.0};
  __m256d p = _mm256_set1_pd(kInvFact[0]);
  for (int i = 1; i < 14; ++i) {
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFact[i]));
  }

  const __m128i k32 = _mm256_cvtpd_epi32(k);
  __m256i bits = _mm256_cvtepi32_epi64(k32);
  bits = _mm256_add_epi64(bits, _mm256_set1_epi64x(1023));
  bits = _mm256_slli_epi64(bits, 52);
  const __m256d scale = _mm256_castsi256_pd(bits);
  const __m256d result = _mm256_mul_pd(p, scale);
  return _mm256_andnot_pd(underflow, result);
}

void kernel_row(KernelFamily family, double gamma, const double* coords, std::size_t n,
                std::size_t dim, const double* point, double* out) {
  const std::size_t vec_end = n - n % kLanes;
  const __m256d vgamma = _mm256_set1_pd(gamma);
  const __m256d one = _mm256_set1_pd(1.0);
  if (family == KernelFamily::Gaussian) {
    for (std::size_t j = 0; j < vec_end; j += kLanes) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t r = 0; r < dim; ++r) {
        const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(point[r]), _mm256_loadu_pd(coords + r * n + j));
        acc = _mm256_fmadd_pd(diff, diff, acc);
      }
      _mm256_storeu_pd(out + j, exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(vgamma, acc))));
    }
    for (std::size_t j = vec_end; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < dim; ++r) {
        const double diff = point[r] - coords[r * n + j];
        acc = std::fma(diff, diff, acc);
      }
      out[j] = std::exp(-gamma * acc);
    }
  } else {
    for (std::size_t j = 0; j < vec_end; j += kLanes) {
      __m256d acc = one;
      for (std::size_t r = 0; r < dim; ++r) {
        const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(point[r]), _mm256_loadu_pd(coords + r * n + j));
        const __m256d denom = _mm256_fmadd_pd(_mm256_mul_pd(vgamma, diff), diff, one);
        acc = _mm256_div_pd(acc, denom);
      }
      _mm256_storeu_pd(out + j, acc);
    }
    for (std::size_t j = vec_end; j < n; ++j) {
      double acc = 1.0;
      for (std::size_t r = 0; r < dim; ++r) {
        const double diff = point[r] - coords[r * n + j];
        acc /= 1.0 + gamma * diff * diff;
      }
      out[j] = acc;
    }
  }
}

double dot(const double* a, const double* b, std::size_t len) {
  const std::size_t vec_end = len - len % (2 * kLanes);
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  for (std::size_t i = 0; i < vec_end; i += 2 * kLanes) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + kLanes), _mm256_loadu_pd(b + i + kLanes), s1);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (std::size_t i = vec_end; i < len; ++i) s += a[i] * b[i];
  return s;
}

double sum_pairwise_distances(const double* coords, std::size_t n, std::size_t dim) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t start = i + 1;
    const std::size_t count = n - start;
    const std::size_t vec_end = start + (count - count % kLanes);
    __m256d vsum = _mm256_setzero_pd();
    for (std::size_t j = start; j < vec_end; j += kLanes) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t r = 0; r < dim; ++r) {
        const __m256d diff =
            _mm256_sub_pd(_mm256_set1_pd(coords[r * n + i]), _mm256_loadu_pd(coords + r * n + j));
        acc = _mm256_fmadd_pd(diff, diff, acc);
      }
      vsum = _mm256_add_pd(vsum, _mm256_sqrt_pd(acc));
    }
    total += hsum(vsum);
    for (std::size_t j = vec_end; j < n; ++j) {
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
  const std::size_t vec_end = len - len % kLanes;
  for (std::size_t i = 0; i < vec_end; i += kLanes) {
    _mm256_storeu_pd(out + i, exp_pd(_mm256_loadu_pd(in + i)));
  }
  for (std::size_t i = vec_end; i < len; ++i) out[i] = std::exp(in[i]);
}

}  // namespace

const KernelTable table{kernel_row, dot, sum_pairwise_distances, vexp};

}  // namespace ellip::simd::avx2
