#pragma once

// Data-parallel inner loops with a scalar reference implementation and an
// AVX2+FMA variant. The variant is chosen once at startup from CPUID (the
// ELLIP_SIMD=scalar environment variable forces the reference path) and can
// be switched at runtime by tests.

#include <cstddef>
#include <span>
#include <string_view>

#include "ellip/kernel_family.hpp"

namespace ellip::simd {

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend backend);

bool avx2_available() noexcept;
Backend active_backend() noexcept;
// Throws std::invalid_argument if the backend is not available on this CPU.
void set_backend(Backend backend);

// Points are passed coordinate-major: coords[r * n + j] is coordinate r of
// point j.

/// out[j] = k(point, coords(:, j)) for the gaussian exp(-gamma ||.||^2) or
/// the product inverse-quadratic kernel prod_r 1 / (1 + gamma diff_r^2).
void kernel_row(KernelFamily family, double gamma, std::span<const double> coords, std::size_t n,
                std::size_t dim, std::span<const double> point, std::span<double> out);

/// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

/// sum over i < j of the Euclidean distance between points i and j.
double sum_pairwise_distances(std::span<const double> coords, std::size_t n, std::size_t dim);

/// out[i] = exp(in[i]) for in[i] <= 709. The vector path flushes results
/// below exp(-708) to 0.
void exp(std::span<const double> in, std::span<double> out);

}  // namespace ellip::simd
