#pragma once

#include <vector>

#include "xsb/rational.hpp"

namespace xsb {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rat value = 0;
  std::vector<Rat> x;
};

// maximize c.x  subject to  A x (rel) b,  x >= 0.
// rel[i]: -1 for <=, 0 for ==, +1 for >=.
// Exact rational two-phase simplex with Bland's rule.
LpResult solve_lp(const std::vector<std::vector<Rat>>& a, const std::vector<int>& rel,
                  const std::vector<Rat>& b, const std::vector<Rat>& c);

}  // namespace xsb
