#pragma once

#include <functional>

#include "xsb/blocks.hpp"
#include "xsb/multiplier.hpp"

namespace xsb {

// Dispersion h_j(xi) of variable j for a family (wave/Schrodinger use the
// per-index signs carried by the parameters).
double dispersion(Family f, const BlockParams& p, int j, const double* xi, int dim);

// Family resonance magnitude used for the H shell (bounded constants
// dropped: |xi1 xi2 xi3| for KdV, |xi1.xi2| for (++-) Schrodinger).
double resonance_value(Family f, const BlockParams& p, const double* xi1,
                       const double* xi2, const double* xi3, int dim);

// Grid points of variable j's frequency/modulation shell.
std::vector<std::int64_t> variable_shell(const BlockParams& p, Family f, int j,
                                         const GroupSpec& grid);

// The 0/1 indicator of the dyadic block on Gamma_3(grid), as an explicit
// support.  Throws "grid too small" when the shells are not representable.
MultiplierK block_multiplier(const BlockParams& p, Family f, const GroupSpec& grid);

// The paper-style test-function triple for the given case (Knapp slabs for
// coherent cases, angular caps for the wave, tubes for (++-) Schrodinger,
// plain shell indicators otherwise).  The case label must match the active
// case of the closed-form bound at p.
std::vector<GridFunction> block_extremizer(const BlockParams& p, Family f,
                                           const std::string& case_label,
                                           const GroupSpec& grid);

// Spatial-only d>=2 multiplier chi(|xi1|~R) chi(|xi2|~r)
// chi(angle(xi1,xi2) = pi/2 + O(theta)), and its extremizer triple.
MultiplierK rotate_multiplier(double big_r, double small_r, double theta,
                              const GroupSpec& grid);
std::vector<GridFunction> rotate_extremizer(double big_r, double small_r, double theta,
                                            const GroupSpec& grid);

}  // namespace xsb
