#pragma once

#include "xsb/multiplier.hpp"

namespace xsb {

// integral over Gamma_k(Z) of m(xi) * prod_j fs[j](xi_j), realized as the
// (k-1)-fold weighted sum with the last coordinate forced.  Deterministic:
// fixed chunking plus pairwise combination, independent of thread count.
cplx gamma_integrate(const MultiplierK& m, const std::vector<GridFunction>& fs);

// Same contract on the precomputed support (used when the support is already
// materialized; identical value up to summation order).
cplx gamma_integrate_support(const MultiplierK& m, const std::vector<GridFunction>& fs);

// Convolution-theorem path for k=3 factored multipliers on FFT-capable
// groups; falls back with an error for non-separable inputs (callers catch
// and use gamma_integrate).
cplx gamma_integrate_fast(const MultiplierK& m, const std::vector<GridFunction>& fs);

// Serial reference for the parallel kernel; bitwise-equal results.
cplx gamma_integrate_serial(const MultiplierK& m, const std::vector<GridFunction>& fs);

void check_same_group(const MultiplierK& m, const std::vector<GridFunction>& fs);

}  // namespace xsb
