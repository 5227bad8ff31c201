#pragma once

#include <cstddef>

#include "ellip/kernel_family.hpp"

namespace ellip::simd {

struct KernelTable {
  void (*kernel_row)(KernelFamily, double, const double*, std::size_t, std::size_t, const double*,
                     double*);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_pairwise_distances)(const double*, std::size_t, std::size_t);
  void (*exp)(const double*, double*, std::size_t);
};

namespace scalar {
extern const KernelTable table;
}

#if defined(ELLIP_HAVE_AVX2_TU)
namespace avx2 {
extern const KernelTable table;
}
#endif

}  // namespace ellip::simd
