#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xsb/rational.hpp"

namespace xsb {

// All dyadic machinery works in log2 coordinates: a dyadic value 2^x is
// represented by the integer (lattice) variable x; "A ~ B" is exact equality
// and "A <~ B" is <= with zero slack.  Bounded multiplicative constants
// never change convergence verdicts.

// 2^{sum_i exp[i] * x_i}.
struct DyadicMonomial {
  std::map<std::string, Rat> exp;

  Rat eval_log2(const std::map<std::string, Rat>& x) const;
  std::string str() const;
};

// Linear form sum coef_i x_i + constant, in log2 scale.
struct LinForm {
  std::map<std::string, Rat> coef;
  Rat constant = 0;

  static LinForm var(const std::string& v, Rat c = 1) {
    LinForm f;
    f.coef[v] = std::move(c);
    return f;
  }
  static LinForm lit(Rat c) {
    LinForm f;
    f.constant = std::move(c);
    return f;
  }
  LinForm& add(const LinForm& o, const Rat& scale = 1);
  Rat eval(const std::map<std::string, Rat>& x) const;
  std::string str() const;
};

LinForm operator+(LinForm a, const LinForm& b);
LinForm operator-(LinForm a, const LinForm& b);
LinForm operator*(const Rat& s, LinForm a);

enum class VarRole { SUM, SUP };
enum class Rel { LE, EQ };  // form <= 0 or form == 0

struct Constraint {
  LinForm form;
  Rel rel = Rel::LE;
  std::string str() const;
};

struct DyadicRegion {
  // Ordered (name, role) pairs; SUM variables are dyadically summed, SUP
  // variables are uniform parameters.
  std::vector<std::pair<std::string, VarRole>> vars;
  std::vector<Constraint> constraints;

  bool has_var(const std::string& v) const;
  VarRole role(const std::string& v) const;
  void declare(const std::string& v, VarRole r);
  void require_le(LinForm lhs, LinForm rhs);  // lhs <= rhs
  void require_eq(LinForm lhs, LinForm rhs);
  bool contains(const std::map<std::string, Rat>& x) const;
};

struct DyadicSumProblem {
  DyadicRegion region;
  DyadicMonomial objective;
  Rat log2_scale = 0;  // constant factor 2^log2_scale, irrelevant to verdicts
  std::string label;
};

enum class VerdictKind { Converges, LogDivergent, Diverges };

const char* verdict_name(VerdictKind k);

// Verdict ordering for merges: Converges < LogDivergent < Diverges.
inline int verdict_rank(VerdictKind k) { return static_cast<int>(k); }

struct Verdict {
  VerdictKind kind = VerdictKind::Converges;
  bool empty_region = false;
  std::map<std::string, Rat> witness_ray;  // recession ray, when divergent
};

bool region_feasible(const DyadicRegion& r);
std::optional<std::map<std::string, Rat>> feasible_point(const DyadicRegion& r);

// Whether every point of the region satisfies the constraint (exact LP).
bool region_implies(const DyadicRegion& r, const Constraint& c);

// Recession-cone analysis with exact rational LP.
//  - a cone ray with positive objective  -> Diverges
//  - two objective-flat cone rays agreeing on all SUP coordinates but
//    differing in a SUM coordinate -> LogDivergent (an unbounded count of
//    comparable terms in some parameter slice)
//  - otherwise Converges.  SUP-only flat rays are benign.
// Infeasible regions fold into Converges with empty_region set.
Verdict sum_verdict(const DyadicSumProblem& p);

// Piecewise closed-form machinery: monomial times min/max/med/positive-part
// atoms of linear forms.
struct Atom {
  enum class Kind { MIN, MAX, MED, POS } kind = Kind::MIN;
  Rat exponent = 1;
  std::vector<LinForm> args;  // MED needs exactly 3
};

struct DyadicExpr {
  LinForm base;
  std::vector<Atom> atoms;
};

struct PiecewiseBound {
  std::vector<std::pair<DyadicRegion, LinForm>> cases;
};

// Enumerates consistent atom selections; one case per consistent choice,
// with the atom replaced by the selected form.  Inconsistent orderings are
// dropped.  Case regions overlap on selection boundaries; their union covers
// the parent region.
PiecewiseBound resolve_minmax(const DyadicExpr& e, const DyadicRegion& parent,
                              bool dedupe = true);

// Reclassifies a SUM variable as SUP (sum-to-sup orthogonality refinements).
DyadicSumProblem schur_refine(DyadicSumProblem p, const std::string& var);

// Declarative text format: var/constraint/objective lines.
std::string problem_to_text(const DyadicSumProblem& p);
DyadicSumProblem problem_from_text(const std::string& text);

std::string verdict_json(const DyadicSumProblem& p, const Verdict& v);

}  // namespace xsb
