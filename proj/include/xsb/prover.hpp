#pragma once

#include <map>
#include <set>

#include "xsb/blocks.hpp"

namespace xsb {

// A bilinear X^{s,b} estimate reduction request: a monomial majorant of the
// spatial weight, modulation exponents, a dispersion family, and optional
// reductions.  Weight symbols: N1, N2, N3, H plus the derived NMIN, NMED,
// NMAX; bracketed symbols are read as <.> (unit floor).
struct EstimateSpec {
  Family family = Family::kdv_r;
  bool spatial_only = false;  // Sobolev-type reductions: no modulations
  int dim = 1;

  struct WeightTerm {
    std::string sym;
    Rat e;
    bool bracket = false;
  };
  std::vector<WeightTerm> weight;
  std::vector<Atom> weight_atoms;  // atom args use weight symbols
  std::array<Rat, 3> b{Rat(0), Rat(0), Rat(0)};

  bool homogeneous = false;
  bool pin_all_n_equal = false;
  std::vector<std::pair<int, int>> averaging;  // (j, partner), 1-based; applied
  std::vector<std::string> schur_vars;
  std::optional<Rat> weird_b1_override;  // kdv coherent-case exponent swap
  Rat eps = 0;
};

struct ReducedCase {
  DyadicSumProblem problem;
  Verdict verdict;
};

struct ProofBranch {
  std::string label;  // "low-modulation" / "high-modulation" / "spatial"
  std::vector<ReducedCase> cases;
};

struct ProofReport {
  VerdictKind overall = VerdictKind::Converges;
  bool any_case = false;
  std::vector<ProofBranch> branches;
  std::vector<std::string> reductions_applied;
  std::vector<std::string> certificate_chain;
  std::string builtin;
  std::map<std::string, std::string> params;
  std::optional<Rat> certified_exponent;
};

// Emits the dyadic summation problems of the reduction: per frequency-
// ordering case, a low-modulation branch (H = Lmax) and a high-modulation
// branch (Lmax = Lmed, H << Lmax), with the family's closed-form block
// bounds substituted symbolically.  N is always a SUP variable (the
// Schur-to-sup step); additional schur refinements are opt-in.
std::vector<DyadicSumProblem> reduce_to_blocks(const EstimateSpec& spec);

// Pins L_j = 1 after checking the averaging hypothesis
// b_j > 1/2, b_j > 1/2 + b_partner, b_j >= -b_partner (exact); throws with
// the violated inequality otherwise.
EstimateSpec apply_averaging(EstimateSpec spec, int j, int partner);

ProofReport prove(const EstimateSpec& spec);

// Built-in estimates; params are name=rational strings.
ProofReport prove_builtin(const std::string& name,
                          const std::map<std::string, std::string>& params = {});
std::vector<std::string> builtin_names();

std::string report_json(const ProofReport& r);

// Declarative spec file (family/dim/weight/b/option lines).
EstimateSpec spec_from_text(const std::string& text);

}  // namespace xsb
