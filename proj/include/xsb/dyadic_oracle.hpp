#pragma once

#include <cstdint>

#include "xsb/dyadic.hpp"

namespace xsb {

// Direct numeric partial sums over the dyadic lattice, used as an
// implementation-independent cross-check of sum_verdict.  For a cap c the
// lattice is restricted to log2 coordinates in [-c, c]; the quantity is
//   Q(c) = max over SUP assignments of the sum over SUM assignments of
//          2^(objective . x).
struct OracleProfile {
  std::vector<int> caps;
  std::vector<double> sums;      // Q(c)
  std::vector<double> max_term;  // largest single term log2, -inf if empty
};

OracleProfile oracle_profile(const DyadicSumProblem& p, const std::vector<int>& caps,
                             std::uint64_t budget = 400'000'000);

// Taxonomy check against a verdict:
//   Converges    -> Q(10) and Q(20) differ by <= 10% relative
//   LogDivergent -> Q grows affinely in the cap with positive fitted slope
//   Diverges     -> Q grows geometrically (log2 Q slope bounded away from 0)
// Requires decay margins resolvable at cap 20 (suite problems are drawn
// accordingly).
bool oracle_matches(const DyadicSumProblem& p, VerdictKind k, std::string* why = nullptr,
                    std::uint64_t budget = 400'000'000);

// Sound necessary condition usable for slowly-decaying (epsilon-exponent)
// cases: the largest term must not grow with the cap when the verdict is
// Converges or LogDivergent.
bool oracle_no_geometric_growth(const DyadicSumProblem& p,
                                std::uint64_t budget = 400'000'000);

}  // namespace xsb
