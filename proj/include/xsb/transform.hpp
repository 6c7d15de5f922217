#pragma once

#include "xsb/norm.hpp"

namespace xsb {

// m'(xi) = m(xi + xi0); xi0 is a hyperplane tuple (k points, sum zero).
// Exact relabeling on modular groups; on truncated grids entries shifted out
// of the box are dropped.
MultiplierK transform_translate(const MultiplierK& m, const std::vector<std::int64_t>& xi0);

// (m . sigma)(xi_1, ..., xi_k) = m(xi_sigma(1), ..., xi_sigma(k)); sigma is
// 0-based.  The matching function reordering for the measure symmetry is
// fs'[j] = fs[sigma^{-1}(j)].
MultiplierK transform_permute(const MultiplierK& m, const std::vector<int>& sigma);

// Dilation.  On cycle/torus groups lambda must be an integer automorphism
// (coprime to M): m'(xi) = m(lambda^{-1} xi), norm-preserving.  On real
// grids the grid is re-spaced h -> lambda*h with values carried over, the
// exact change-of-variables route; the [k;Z] norm picks up
// |lambda^d|^(k/2-1).
MultiplierK transform_dilate(const MultiplierK& m, const Rat& lambda);

// Conjugation/reflection of the factors indexed by J (0-based); requires a
// factored multiplier.  Norm-preserving per the conjugation identity.
MultiplierK transform_conjugate_reflect(const MultiplierK& m, const std::vector<int>& J);

// Tensor product of two [k;.] multipliers over composable groups (same
// kind, M, spacing, no time axis).  Norm is multiplicative.
MultiplierK tensor_product(const MultiplierK& m1, const MultiplierK& m2);

// TT* composite: m(xi_1..xi_k) * conj(m(-xi_{k+1}..-xi_{2k})) restricted to
// Gamma_2k; requires a real-valued full-space m.  The [2k;Z] norm equals the
// square of the [k+1;Z] norm of m.
MultiplierK tt_star(const MultiplierK& m);

struct SchurPart {
  MultiplierK m;
  std::vector<std::int64_t> supp1;  // declared j1-support (group points)
  std::vector<std::int64_t> supp2;  // declared j2-support
};

// Schur orthogonality bound: sqrt(A1*A2) * max_alpha cs_upper_best(m_alpha),
// after verifying that the declared supports contain the actual ones and
// that their overlap counts are at most A1, A2.  j1, j2 are 1-based and
// distinct.
double schur_sum_bound(const std::vector<SchurPart>& parts, int j1, int j2, int a1,
                       int a2);

// The summed multiplier (for comparing the bound against alt_max).
MultiplierK schur_sum(const std::vector<SchurPart>& parts);

}  // namespace xsb
