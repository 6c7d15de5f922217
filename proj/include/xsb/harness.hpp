#pragma once

#include "xsb/block_grid.hpp"
#include "xsb/norm.hpp"

namespace xsb {

struct VerifyRow {
  BlockParams params;
  double formula_bound = 0.0;
  double cs_upper = 0.0;
  double altmax_lower = 0.0;
  double extremizer_lower = 0.0;
  double ratio_upper = 0.0;  // altmax_lower / formula_bound
  double ratio_lower = 0.0;  // extremizer_lower / formula_bound
  std::string case_label;
  double runtime_ms = 0.0;
  bool skipped = false;
  std::string skip_reason;
};

// One row per parameter tuple: closed-form bound, Cauchy-Schwarz upper
// bound, alternating-maximization lower bound (extremizer-seeded), and the
// extremizer Rayleigh quotient.  Rows are computed in parallel across
// tuples and emitted in input order.
std::vector<VerifyRow> run_grid_verification(Family f,
                                             const std::vector<BlockParams>& tuples,
                                             const GroupSpec& grid,
                                             const AltMaxConfig& cfg);

// JSON output is a pure function of (inputs, seed); wall-clock timings are
// included only on request so repeat runs compare bitwise.
std::string rows_json(const std::vector<VerifyRow>& rows, Family f,
                      const GroupSpec& grid, const AltMaxConfig& cfg,
                      double c_up = 16.0, double c_low = 16.0,
                      bool include_runtime = false);
std::string rows_csv(const std::vector<VerifyRow>& rows);
void emit_report(const std::string& content, const std::string& path);

// Least-squares slope of log2(altmax) against the swept exponent for a one-
// parameter dyadic sweep; used by the slope-fidelity checks.
double fitted_slope(const std::vector<long>& exponents, const std::vector<double>& values);

struct SuiteCheck {
  std::string name;
  int pass = 0;
  int fail = 0;
  std::vector<std::string> failures;  // serialized failing instances
};

struct SuiteResult {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<SuiteCheck> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (c.fail) return false;
    return true;
  }
  std::string json() const;
};

// Randomized execution of the library's invariants: comparison
// monotonicity, convexity, translation/permutation invariance, tensor
// multiplicativity, Schur and composition bounds, block formula invariants
// and support vanishing, and the dyadic verdict-vs-partial-sum oracle.
SuiteResult run_property_suite(std::uint64_t seed, int trials);

}  // namespace xsb
