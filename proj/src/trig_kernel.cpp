// Built with -ffast-math -fopenmp-simd so the loops below map onto libmvec.
// Keep this translation unit limited to these loops.

#include "trig_kernel.hpp"

#include <cmath>

namespace aoa::detail {

__attribute__((target_clones("avx2", "default")))
void cos_sin(const double* __restrict phase, double* __restrict cos_out, double* __restrict sin_out,
             std::size_t n) {
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) cos_out[i] = std::cos(phase[i]);
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) sin_out[i] = std::sin(phase[i]);
}

}  // namespace aoa::detail
