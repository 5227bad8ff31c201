#include "ellip/simd/dispatch.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ellip/error.hpp"
#include "kernels_impl.hpp"

namespace ellip::simd {
namespace {

bool detect_avx2() noexcept {
#if defined(ELLIP_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Backend backend) noexcept {
#if defined(ELLIP_HAVE_AVX2_TU)
  if (backend == Backend::Avx2) return &avx2::table;
#endif
  (void)backend;
  return &scalar::table;
}

Backend initial_backend() noexcept {
  if (const char* env = std::getenv("ELLIP_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return Backend::Scalar;
  }
  return detect_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

const KernelTable& table() { return *table_for(current().load(std::memory_order_relaxed)); }

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::Domain, what);
}

}  // namespace

std::string_view to_string(Backend backend) {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

bool avx2_available() noexcept {
  static const bool available = detect_avx2();
  return available;
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (backend == Backend::Avx2 && !avx2_available()) {
    throw std::invalid_argument("AVX2 backend requested but not supported by this CPU");
  }
  current().store(backend, std::memory_order_relaxed);
}

void kernel_row(KernelFamily family, double gamma, std::span<const double> coords, std::size_t n,
                std::size_t dim, std::span<const double> point, std::span<double> out) {
  require(coords.size() >= n * dim && point.size() >= dim && out.size() >= n,
          "kernel_row: buffer sizes do not match n and dim");
  table().kernel_row(family, gamma, coords.data(), n, dim, point.data(), out.data());
}

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "dot: length mismatch");
  return table().dot(a.data(), b.data(), a.size());
}

double sum_pairwise_distances(std::span<const double> coords, std::size_t n, std::size_t dim) {
  require(coords.size() >= n * dim, "sum_pairwise_distances: buffer too small");
  return table().sum_pairwise_distances(coords.data(), n, dim);
}

void exp(std::span<const double> in, std::span<double> out) {
  require(in.size() == out.size(), "exp: length mismatch");
  table().exp(in.data(), out.data(), in.size());
}

}  // namespace ellip::simd
