#pragma once

#include <cstddef>

namespace aoa::detail {

/// cos_out[i] = cos(phase[i]), sin_out[i] = sin(phase[i]) using the vector
/// math library (few-ulp accuracy). Inputs must be finite.
void cos_sin(const double* phase, double* cos_out, double* sin_out, std::size_t n);

}  // namespace aoa::detail
