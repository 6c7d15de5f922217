#include "xsb/dyadic_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace xsb {

namespace {

struct Enumerator {
  const DyadicSumProblem& p;
  int cap;
  std::uint64_t budget;
  std::uint64_t visited = 0;

  std::vector<std::string> order;   // SUP vars first, then SUM
  std::vector<bool> is_sum;
  std::vector<Rat> objcoef;
  // constraints as (coef per order slot, constant, rel)
  struct Row {
    std::vector<Rat> a;
    Rat c;
    Rel rel;
  };
  std::vector<Row> rows;

  std::vector<long> x;  // current assignment
  double best_q = 0.0;
  double max_term = -std::numeric_limits<double>::infinity();

  explicit Enumerator(const DyadicSumProblem& prob, int cap_, std::uint64_t budget_)
      : p(prob), cap(cap_), budget(budget_) {
    for (const auto& [v, role] : p.region.vars)
      if (role == VarRole::SUP) order.push_back(v);
    std::size_t nsup = order.size();
    for (const auto& [v, role] : p.region.vars)
      if (role == VarRole::SUM) order.push_back(v);
    is_sum.assign(order.size(), false);
    for (std::size_t i = nsup; i < order.size(); ++i) is_sum[i] = true;

    objcoef.assign(order.size(), Rat(0));
    for (std::size_t i = 0; i < order.size(); ++i) {
      auto it = p.objective.exp.find(order[i]);
      if (it != p.objective.exp.end()) objcoef[i] = it->second;
    }
    for (const auto& con : p.region.constraints) {
      Row r;
      r.a.assign(order.size(), Rat(0));
      r.c = con.form.constant;
      r.rel = con.rel;
      for (const auto& [v, coef] : con.form.coef) {
        auto it = std::find(order.begin(), order.end(), v);
        if (it == order.end()) throw std::invalid_argument("constraint uses unknown var");
        r.a[static_cast<std::size_t>(it - order.begin())] = coef;
      }
      rows.push_back(std::move(r));
    }
    x.assign(order.size(), 0);
  }

  static long floor_rat(const Rat& r) {
    BigInt n = numerator(r), d = denominator(r);
    BigInt q = n / d;
    if (n % d != 0 && ((n < 0) != (d < 0))) q -= 1;
    return static_cast<long>(q);
  }
  static long ceil_rat(const Rat& r) { return -floor_rat(-r); }

  // Interval for variable at `depth` given fixed x[0..depth).
  std::pair<long, long> bounds(std::size_t depth) const {
    long lo = -cap, hi = cap;
    for (const auto& r : rows) {
      const Rat& a = r.a[depth];
      if (a == 0) continue;
      Rat fixed = r.c;
      for (std::size_t i = 0; i < depth; ++i) fixed += r.a[i] * x[i];
      Rat slack_min = 0, slack_max = 0;
      for (std::size_t i = depth + 1; i < order.size(); ++i) {
        const Rat& ai = r.a[i];
        if (ai == 0) continue;
        if (ai > 0) {
          slack_min += ai * Rat(-cap);
          slack_max += ai * Rat(cap);
        } else {
          slack_min += ai * Rat(cap);
          slack_max += ai * Rat(-cap);
        }
      }
      // LE: a*x + fixed + slack_min <= 0 must be achievable.
      // EQ additionally: a*x + fixed + slack_max >= 0 achievable.
      Rat ub = -(fixed + slack_min);
      if (a > 0)
        hi = std::min(hi, floor_rat(ub / a));
      else
        lo = std::max(lo, ceil_rat(ub / a));
      if (r.rel == Rel::EQ) {
        Rat lb = -(fixed + slack_max);
        if (a > 0)
          lo = std::max(lo, ceil_rat(lb / a));
        else
          hi = std::min(hi, floor_rat(lb / a));
      }
    }
    return {lo, hi};
  }

  bool satisfied() const {
    for (const auto& r : rows) {
      Rat v = r.c;
      for (std::size_t i = 0; i < order.size(); ++i) v += r.a[i] * x[i];
      if (r.rel == Rel::LE ? v > 0 : v != 0) return false;
    }
    return true;
  }

  double term_log2() const {
    Rat e = 0;
    for (std::size_t i = 0; i < order.size(); ++i) e += objcoef[i] * x[i];
    return to_double(e);
  }

  double sum_recurse(std::size_t depth) {
    if (depth == order.size()) {
      if (++visited > budget) throw std::runtime_error("oracle budget exceeded");
      if (!satisfied()) return 0.0;
      double t = term_log2();
      max_term = std::max(max_term, t);
      return std::exp2(t);
    }
    auto [lo, hi] = bounds(depth);
    double acc = 0.0;
    for (long v = lo; v <= hi; ++v) {
      x[depth] = v;
      acc += sum_recurse(depth + 1);
    }
    return acc;
  }

  void sup_recurse(std::size_t depth, std::size_t nsup) {
    if (depth == nsup) {
      best_q = std::max(best_q, sum_recurse(depth));
      return;
    }
    auto [lo, hi] = bounds(depth);
    for (long v = lo; v <= hi; ++v) {
      x[depth] = v;
      sup_recurse(depth + 1, nsup);
    }
  }

  double run() {
    std::size_t nsup = 0;
    while (nsup < order.size() && !is_sum[nsup]) ++nsup;
    sup_recurse(0, nsup);
    return best_q;
  }
};

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

OracleProfile oracle_profile(const DyadicSumProblem& p, const std::vector<int>& caps,
                             std::uint64_t budget) {
  OracleProfile out;
  out.caps = caps;
  for (int c : caps) {
    Enumerator en(p, c, budget);
    out.sums.push_back(en.run());
    out.max_term.push_back(en.max_term);
  }
  return out;
}

bool oracle_matches(const DyadicSumProblem& p, VerdictKind k, std::string* why,
                    std::uint64_t budget) {
  std::vector<int> caps = {10, 12, 14, 16, 18, 20};
  OracleProfile prof = oracle_profile(p, caps, budget);
  double q10 = prof.sums.front(), q20 = prof.sums.back();

  std::vector<double> cd(caps.begin(), caps.end());
  bool all_positive = true;
  std::vector<double> logq;
  for (double q : prof.sums) {
    if (q <= 0) all_positive = false;
    logq.push_back(q > 0 ? std::log2(q) : -60.0);
  }
  double geo_slope = all_positive ? fit_slope(cd, logq) : 0.0;
  double affine_slope = fit_slope(cd, prof.sums);

  std::ostringstream why_os;
  bool ok = false;
  switch (k) {
    case VerdictKind::Converges:
      ok = (q20 == 0.0 && q10 == 0.0) || std::abs(q20 - q10) <= 0.10 * std::abs(q20);
      why_os << "Q(10)=" << q10 << " Q(20)=" << q20;
      break;
    case VerdictKind::LogDivergent:
      ok = affine_slope > 0 && geo_slope < 0.45;
      why_os << "affine slope=" << affine_slope << " geometric slope=" << geo_slope;
      break;
    case VerdictKind::Diverges:
      ok = geo_slope >= 0.45;
      why_os << "geometric slope=" << geo_slope;
      break;
  }
  if (why) *why = why_os.str();
  return ok;
}

bool oracle_no_geometric_growth(const DyadicSumProblem& p, std::uint64_t budget) {
  OracleProfile prof = oracle_profile(p, {10, 20}, budget);
  if (prof.sums[1] == 0.0) return true;
  return prof.max_term[1] <= prof.max_term[0] + 0.5;
}

}  // namespace xsb
