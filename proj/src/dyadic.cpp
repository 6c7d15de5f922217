#include "xsb/dyadic.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "xsb/simplex.hpp"

namespace xsb {

Rat DyadicMonomial::eval_log2(const std::map<std::string, Rat>& x) const {
  Rat v = 0;
  for (const auto& [name, e] : exp) {
    auto it = x.find(name);
    if (it == x.end()) throw std::invalid_argument("unbound symbol " + name);
    v += e * it->second;
  }
  return v;
}

std::string DyadicMonomial::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, e] : exp) {
    if (e == 0) continue;
    if (!first) os << " ";
    os << name << "^" << rat_str(e);
    first = false;
  }
  if (first) os << "1";
  return os.str();
}

LinForm& LinForm::add(const LinForm& o, const Rat& scale) {
  for (const auto& [v, c] : o.coef) {
    Rat& slot = coef[v];
    slot += scale * c;
    if (slot == 0) coef.erase(v);
  }
  constant += scale * o.constant;
  return *this;
}

Rat LinForm::eval(const std::map<std::string, Rat>& x) const {
  Rat v = constant;
  for (const auto& [name, c] : coef) {
    auto it = x.find(name);
    if (it == x.end()) throw std::invalid_argument("unbound symbol " + name);
    v += c * it->second;
  }
  return v;
}

std::string LinForm::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : coef) {
    if (c == 0) continue;
    if (!first) os << " + ";
    os << rat_str(c) << "*" << v;
    first = false;
  }
  if (constant != 0 || first) {
    if (!first) os << " + ";
    os << rat_str(constant);
  }
  return os.str();
}

LinForm operator+(LinForm a, const LinForm& b) { return a.add(b, 1); }
LinForm operator-(LinForm a, const LinForm& b) { return a.add(b, -1); }
LinForm operator*(const Rat& s, LinForm a) {
  LinForm out;
  out.constant = s * a.constant;
  for (const auto& [v, c] : a.coef)
    if (s * c != 0) out.coef[v] = s * c;
  return out;
}

std::string Constraint::str() const {
  return form.str() + (rel == Rel::LE ? " <= 0" : " == 0");
}

bool DyadicRegion::has_var(const std::string& v) const {
  for (const auto& [name, role] : vars)
    if (name == v) return true;
  return false;
}

VarRole DyadicRegion::role(const std::string& v) const {
  for (const auto& [name, role] : vars)
    if (name == v) return role;
  throw std::invalid_argument("unknown variable " + v);
}

void DyadicRegion::declare(const std::string& v, VarRole r) {
  if (!has_var(v)) vars.emplace_back(v, r);
}

void DyadicRegion::require_le(LinForm lhs, LinForm rhs) {
  constraints.push_back({lhs.add(rhs, -1), Rel::LE});
}

void DyadicRegion::require_eq(LinForm lhs, LinForm rhs) {
  constraints.push_back({lhs.add(rhs, -1), Rel::EQ});
}

bool DyadicRegion::contains(const std::map<std::string, Rat>& x) const {
  for (const auto& c : constraints) {
    Rat v = c.form.eval(x);
    if (c.rel == Rel::LE ? v > 0 : v != 0) return false;
  }
  return true;
}

const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Converges: return "Converges";
    case VerdictKind::LogDivergent: return "LogDivergent";
    case VerdictKind::Diverges: return "Diverges";
  }
  return "?";
}

namespace {

// Index of each region variable; LPs use the split x = p - q with p, q >= 0.
struct LpBuilder {
  std::vector<std::string> names;
  std::map<std::string, std::size_t> index;
  std::size_t ncopies;  // how many ray copies (1 or 2)
  std::vector<std::vector<Rat>> a;
  std::vector<int> rel;
  std::vector<Rat> b;

  explicit LpBuilder(const DyadicRegion& r, std::size_t copies) : ncopies(copies) {
    for (const auto& [name, role] : r.vars) {
      index[name] = names.size();
      names.push_back(name);
    }
  }
  std::size_t width() const { return 2 * names.size() * ncopies; }
  // Column of p (sign +) / q (sign -) for variable v in copy c.
  std::size_t pcol(std::size_t v, std::size_t c) const {
    return 2 * (c * names.size() + v);
  }

  void add_form_row(const LinForm& f, std::size_t copy, int relation, Rat rhs,
                    bool homogeneous) {
    std::vector<Rat> row(width(), Rat(0));
    for (const auto& [v, coef] : f.coef) {
      std::size_t col = pcol(index.at(v), copy);
      row[col] += coef;
      row[col + 1] -= coef;
    }
    if (!homogeneous) rhs -= f.constant;
    a.push_back(std::move(row));
    rel.push_back(relation);
    b.push_back(std::move(rhs));
  }

  void add_norm_row() {
    std::vector<Rat> row(width(), Rat(1));
    a.push_back(std::move(row));
    rel.push_back(-1);
    b.push_back(Rat(1));
  }
};

std::map<std::string, Rat> extract_ray(const LpBuilder& lp, const std::vector<Rat>& x,
                                       std::size_t copy) {
  std::map<std::string, Rat> ray;
  for (std::size_t v = 0; v < lp.names.size(); ++v) {
    Rat val = x[lp.pcol(v, copy)] - x[lp.pcol(v, copy) + 1];
    if (val != 0) ray[lp.names[v]] = val;
  }
  return ray;
}

// Clears denominators for presentation.
std::map<std::string, Rat> integerize(std::map<std::string, Rat> ray) {
  BigInt l = 1;
  for (const auto& [v, r] : ray) l = boost::multiprecision::lcm(l, denominator(r));
  for (auto& [v, r] : ray) r *= Rat(l);
  return ray;
}

}  // namespace

bool region_feasible(const DyadicRegion& r) { return feasible_point(r).has_value(); }

std::optional<std::map<std::string, Rat>> feasible_point(const DyadicRegion& r) {
  LpBuilder lp(r, 1);
  for (const auto& c : r.constraints)
    lp.add_form_row(c.form, 0, c.rel == Rel::LE ? -1 : 0, 0, /*homogeneous=*/false);
  std::vector<Rat> obj(lp.width(), Rat(0));
  LpResult res = solve_lp(lp.a, lp.rel, lp.b, obj);
  if (res.status == LpStatus::infeasible) return std::nullopt;
  std::map<std::string, Rat> pt;
  for (std::size_t v = 0; v < lp.names.size(); ++v)
    pt[lp.names[v]] = res.x[lp.pcol(v, 0)] - res.x[lp.pcol(v, 0) + 1];
  return pt;
}

bool region_implies(const DyadicRegion& r, const Constraint& c) {
  auto bounded_above_by_zero = [&](const LinForm& f) {
    LpBuilder lp(r, 1);
    for (const auto& con : r.constraints)
      lp.add_form_row(con.form, 0, con.rel == Rel::LE ? -1 : 0, 0, false);
    std::vector<Rat> obj(lp.width(), Rat(0));
    for (const auto& [v, coef] : f.coef) {
      if (!lp.index.count(v)) return false;
      obj[lp.pcol(lp.index.at(v), 0)] += coef;
      obj[lp.pcol(lp.index.at(v), 0) + 1] -= coef;
    }
    LpResult res = solve_lp(lp.a, lp.rel, lp.b, obj);
    if (res.status == LpStatus::infeasible) return true;
    if (res.status == LpStatus::unbounded) return false;
    return res.value + f.constant <= 0;
  };
  if (!bounded_above_by_zero(c.form)) return false;
  if (c.rel == Rel::EQ) return bounded_above_by_zero(Rat(-1) * c.form);
  return true;
}

namespace {

bool regions_equivalent(const DyadicRegion& a, const DyadicRegion& b) {
  for (const auto& c : b.constraints)
    if (!region_implies(a, c)) return false;
  for (const auto& c : a.constraints)
    if (!region_implies(b, c)) return false;
  return true;
}

bool forms_equal_on(const DyadicRegion& r, const LinForm& a, const LinForm& b) {
  LinForm d = a;
  d.add(b, -1);
  return region_implies(r, {d, Rel::EQ});
}

}  // namespace

Verdict sum_verdict(const DyadicSumProblem& p) {
  Verdict out;
  if (!region_feasible(p.region)) {
    out.kind = VerdictKind::Converges;
    out.empty_region = true;
    return out;
  }

  LinForm obj_form;
  for (const auto& [v, e] : p.objective.exp)
    if (e != 0) obj_form.coef[v] = e;

  // Divergence LP: maximize obj . r over the recession cone, |r|_1 <= 1.
  {
    LpBuilder lp(p.region, 1);
    for (const auto& c : p.region.constraints)
      lp.add_form_row(c.form, 0, c.rel == Rel::LE ? -1 : 0, 0, true);
    lp.add_norm_row();
    std::vector<Rat> obj(lp.width(), Rat(0));
    for (const auto& [v, coef] : obj_form.coef) {
      obj[lp.pcol(lp.index.at(v), 0)] = coef;
      obj[lp.pcol(lp.index.at(v), 0) + 1] = -coef;
    }
    LpResult res = solve_lp(lp.a, lp.rel, lp.b, obj);
    if (res.status == LpStatus::optimal && res.value > 0) {
      out.kind = VerdictKind::Diverges;
      out.witness_ray = integerize(extract_ray(lp, res.x, 0));
      return out;
    }
  }

  // Quick test: if the only objective-flat recession ray is zero, the sum
  // converges and the pair LPs can be skipped.
  {
    LpBuilder lp(p.region, 1);
    for (const auto& c : p.region.constraints)
      lp.add_form_row(c.form, 0, c.rel == Rel::LE ? -1 : 0, 0, true);
    lp.add_form_row(obj_form, 0, 0, 0, true);
    lp.add_norm_row();
    std::vector<Rat> obj(lp.width(), Rat(1));  // maximize |r|_1
    LpResult res = solve_lp(lp.a, lp.rel, lp.b, obj);
    if (res.status == LpStatus::optimal && res.value == 0) {
      out.kind = VerdictKind::Converges;
      return out;
    }
  }

  // Log divergence: two flat rays with equal SUP coordinates but a different
  // SUM coordinate.
  for (const auto& [sname, role] : p.region.vars) {
    if (role != VarRole::SUM) continue;
    LpBuilder lp(p.region, 2);
    for (std::size_t copy = 0; copy < 2; ++copy) {
      for (const auto& c : p.region.constraints)
        lp.add_form_row(c.form, copy, c.rel == Rel::LE ? -1 : 0, 0, true);
      lp.add_form_row(obj_form, copy, 0, 0, true);
    }
    for (const auto& [v, role2] : p.region.vars) {
      if (role2 != VarRole::SUP) continue;
      // r_v - r'_v = 0.
      std::vector<Rat> row(lp.width(), Rat(0));
      std::size_t c0 = lp.pcol(lp.index.at(v), 0);
      std::size_t c1 = lp.pcol(lp.index.at(v), 1);
      row[c0] = 1;
      row[c0 + 1] = -1;
      row[c1] = -1;
      row[c1 + 1] = 1;
      lp.a.push_back(std::move(row));
      lp.rel.push_back(0);
      lp.b.push_back(Rat(0));
    }
    lp.add_norm_row();
    std::vector<Rat> obj(lp.width(), Rat(0));
    std::size_t cs0 = lp.pcol(lp.index.at(sname), 0);
    std::size_t cs1 = lp.pcol(lp.index.at(sname), 1);
    obj[cs0] = 1;
    obj[cs0 + 1] = -1;
    obj[cs1] = -1;
    obj[cs1 + 1] = 1;
    LpResult res = solve_lp(lp.a, lp.rel, lp.b, obj);
    if (res.status == LpStatus::optimal && res.value > 0) {
      out.kind = VerdictKind::LogDivergent;
      auto r0 = extract_ray(lp, res.x, 0);
      auto r1 = extract_ray(lp, res.x, 1);
      out.witness_ray = integerize(r0.count(sname) ? r0 : r1);
      return out;
    }
  }

  out.kind = VerdictKind::Converges;
  return out;
}

PiecewiseBound resolve_minmax(const DyadicExpr& e, const DyadicRegion& parent,
                              bool dedupe) {
  PiecewiseBound out;
  // selections[i] ranges over the cases of atom i.
  struct Choice {
    std::vector<Constraint> guards;
    LinForm selected;
  };
  std::vector<std::vector<Choice>> menu;
  for (const auto& atom : e.atoms) {
    std::vector<Choice> choices;
    if (atom.kind == Atom::Kind::POS) {
      if (atom.args.size() != 1) throw std::invalid_argument("POS atom needs 1 arg");
      const LinForm& g = atom.args[0];
      Choice hi;  // g >= 0: the bracket is g itself
      hi.guards.push_back({Rat(-1) * g, Rel::LE});
      hi.selected = g;
      Choice lo;  // g <= 0: the bracket is 1 (log 0)
      lo.guards.push_back({g, Rel::LE});
      lo.selected = LinForm{};
      choices.push_back(std::move(hi));
      choices.push_back(std::move(lo));
    } else if (atom.kind == Atom::Kind::MED) {
      if (atom.args.size() != 3) throw std::invalid_argument("MED atom needs 3 args");
      int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
      for (auto& pm : perm) {
        Choice ch;
        ch.guards.push_back({atom.args[pm[0]] - atom.args[pm[1]], Rel::LE});
        ch.guards.push_back({atom.args[pm[1]] - atom.args[pm[2]], Rel::LE});
        ch.selected = atom.args[pm[1]];
        choices.push_back(std::move(ch));
      }
    } else {
      for (std::size_t i = 0; i < atom.args.size(); ++i) {
        Choice ch;
        for (std::size_t j = 0; j < atom.args.size(); ++j) {
          if (i == j) continue;
          LinForm diff = atom.kind == Atom::Kind::MIN ? atom.args[i] - atom.args[j]
                                                      : atom.args[j] - atom.args[i];
          ch.guards.push_back({std::move(diff), Rel::LE});
        }
        ch.selected = atom.args[i];
        choices.push_back(std::move(ch));
      }
    }
    menu.push_back(std::move(choices));
  }

  std::vector<std::size_t> pick(menu.size(), 0);
  while (true) {
    DyadicRegion region = parent;
    LinForm total = e.base;
    for (std::size_t i = 0; i < menu.size(); ++i) {
      const Choice& ch = menu[i][pick[i]];
      for (const auto& g : ch.guards) region.constraints.push_back(g);
      total.add(ch.selected, e.atoms[i].exponent);
    }
    if (region_feasible(region)) {
      bool duplicate = false;
      if (dedupe) {
        for (const auto& [reg, form] : out.cases) {
          if (regions_equivalent(reg, region) && forms_equal_on(region, form, total)) {
            duplicate = true;
            break;
          }
        }
      }
      if (!duplicate) out.cases.emplace_back(std::move(region), total);
    }
    if (menu.empty()) break;
    std::size_t i = 0;
    while (i < menu.size()) {
      if (++pick[i] < menu[i].size()) break;
      pick[i] = 0;
      ++i;
    }
    if (i == menu.size()) break;
  }
  return out;
}

std::string verdict_json(const DyadicSumProblem& p, const Verdict& v) {
  std::ostringstream os;
  os << "{\"verdict\":\"" << verdict_name(v.kind) << "\"";
  if (v.empty_region) os << ",\"empty_region\":true";
  os << ",\"label\":\"" << p.label << "\"";
  os << ",\"objective\":\"" << p.objective.str() << "\"";
  os << ",\"constraints\":[";
  for (std::size_t i = 0; i < p.region.constraints.size(); ++i) {
    if (i) os << ",";
    os << "\"" << p.region.constraints[i].str() << "\"";
  }
  os << "]";
  if (!v.witness_ray.empty()) {
    os << ",\"witness_ray\":{";
    bool first = true;
    for (const auto& [name, val] : v.witness_ray) {
      if (!first) os << ",";
      os << "\"" << name << "\":\"" << rat_str(val) << "\"";
      first = false;
    }
    os << "}";
  }
  os << "}";
  return os.str();
}

DyadicSumProblem schur_refine(DyadicSumProblem p, const std::string& var) {
  bool found = false;
  for (auto& [name, role] : p.region.vars)
    if (name == var) {
      role = VarRole::SUP;
      found = true;
    }
  if (!found) throw std::invalid_argument("unknown variable " + var);
  return p;
}

std::string problem_to_text(const DyadicSumProblem& p) {
  std::ostringstream os;
  for (const auto& [name, role] : p.region.vars)
    os << "var " << name << " " << (role == VarRole::SUM ? "sum" : "sup") << "\n";
  for (const auto& c : p.region.constraints) {
    os << "constraint";
    for (const auto& [v, coef] : c.form.coef) os << " " << rat_str(coef) << "*" << v;
    os << (c.rel == Rel::LE ? " <= " : " = ") << rat_str(-c.form.constant) << "\n";
  }
  os << "objective";
  for (const auto& [v, e] : p.objective.exp) os << " " << rat_str(e) << "*" << v;
  os << "\n";
  return os.str();
}

DyadicSumProblem problem_from_text(const std::string& text) {
  DyadicSumProblem p;
  std::istringstream is(text);
  std::string line;
  auto parse_terms = [](std::istringstream& ls, LinForm& form, std::string& tail) {
    std::string tok;
    while (ls >> tok) {
      if (tok == "<=" || tok == "=" || tok == "==") {
        tail = tok;
        return;
      }
      auto star = tok.find('*');
      if (star == std::string::npos)
        throw std::invalid_argument("expected coef*Var, got " + tok);
      Rat coef = parse_rat(tok.substr(0, star));
      std::string v = tok.substr(star + 1);
      form.coef[v] += coef;
    }
    tail.clear();
  };
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "var") {
      std::string name, role;
      ls >> name >> role;
      if (role != "sum" && role != "sup") throw std::invalid_argument("bad role " + role);
      p.region.declare(name, role == "sum" ? VarRole::SUM : VarRole::SUP);
    } else if (head == "constraint") {
      LinForm form;
      std::string tail;
      parse_terms(ls, form, tail);
      if (tail.empty()) throw std::invalid_argument("constraint missing relation");
      std::string rhs;
      ls >> rhs;
      form.constant -= parse_rat(rhs);
      p.region.constraints.push_back({std::move(form), tail == "<=" ? Rel::LE : Rel::EQ});
    } else if (head == "objective") {
      LinForm form;
      std::string tail;
      parse_terms(ls, form, tail);
      for (const auto& [v, c] : form.coef) p.objective.exp[v] = c;
    } else {
      throw std::invalid_argument("unknown directive " + head);
    }
  }
  for (const auto& c : p.region.constraints)
    for (const auto& [v, coef] : c.form.coef)
      if (!p.region.has_var(v)) throw std::invalid_argument("undeclared variable " + v);
  for (const auto& [v, e] : p.objective.exp)
    if (!p.region.has_var(v)) throw std::invalid_argument("undeclared variable " + v);
  return p;
}

}  // namespace xsb
