#pragma once

#include <limits>
#include <optional>
#include <string>

#include "xsb/gamma.hpp"

namespace xsb {

struct AltMaxConfig {
  int restarts = 8;
  int iterations = 50;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;

  void validate() const;
};

struct NormEstimate {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  std::optional<std::vector<GridFunction>> witness;
  std::string lower_method;
  std::string upper_method;
  bool zero_multiplier = false;
};

// |gamma_integrate(m, fs)| / prod_j l2(f_j); a certified lower bound for
// the [k;Z] norm.
double rayleigh(const MultiplierK& m, const std::vector<GridFunction>& fs);

// Block-coordinate ascent on the Rayleigh quotient.  Seeds, when given, are
// used as the initial iterates of the first restarts; remaining restarts
// start from seeded complex gaussians.  Returns a lower bound with witness.
NormEstimate alt_max(const MultiplierK& m, const AltMaxConfig& cfg,
                     const std::vector<std::vector<GridFunction>>& seeds = {});

// sup_eta of the frozen-coordinate section L2 mass of m; certified upper
// bound (Cauchy-Schwarz).  j is 1-based.
double cs_upper(const MultiplierK& m, int j);
double cs_upper_best(const MultiplierK& m);

// cs_upper^2 split into the raw section maximum and the exact measure
// weight, so exact scaling identities can be checked without rounding
// through the square root.
struct SectionSq {
  double max_section = 0.0;  // max_eta sum of |m|^2 over the section
  Rat weight = 1;            // measure^(k-2), exact
};
SectionSq cs_upper_sq(const MultiplierK& m, int j);

// Exact [2;Z] norm: sup over Gamma_2 of |m|.
double k2_exact(const MultiplierK& m);

// alt_max lower + best Cauchy-Schwarz upper in one estimate.
NormEstimate estimate_norm(const MultiplierK& m, const AltMaxConfig& cfg,
                           const std::vector<std::vector<GridFunction>>& seeds = {});

}  // namespace xsb
