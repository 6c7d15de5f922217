#include "xsb/prover.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace xsb {

namespace {

// Emission context for one frequency-ordering case: which original index is
// the minimum (others are pinned to the comparable size N).
struct CaseCtx {
  int min_index = 0;      // 0-based; -1 when all pinned equal
  bool pinned_equal = false;

  LinForm freq(int j) const {  // 0-based original index
    if (pinned_equal || j != min_index) return LinForm::var("N");
    return LinForm::var("Nmin");
  }
  LinForm nmin() const {
    return pinned_equal ? LinForm::var("N") : LinForm::var("Nmin");
  }
  LinForm nmax() const { return LinForm::var("N"); }
};

LinForm lvar(int j) { return LinForm::var("L" + std::to_string(j + 1)); }

struct Piece {
  std::string label;
  std::vector<Constraint> extra;
  DyadicExpr bound;

  void guard_le(LinForm a, const LinForm& b) { extra.push_back({a.add(b, -1), Rel::LE}); }
  void guard_eq(LinForm a, const LinForm& b) { extra.push_back({a.add(b, -1), Rel::EQ}); }
};

Atom min_atom(Rat e, std::vector<LinForm> args) {
  return Atom{Atom::Kind::MIN, std::move(e), std::move(args)};
}
Atom pos_atom(Rat e, LinForm arg) {
  return Atom{Atom::Kind::POS, std::move(e), {std::move(arg)}};
}

// Closed-form block bound pieces for one frequency-ordering case; the union
// of piece regions covers the case (overlapping closed covers are fine for
// upper bounds, and the special-case bounds dominate the general one on
// their regions).
std::vector<Piece> family_pieces(const EstimateSpec& spec, const CaseCtx& ctx,
                                 const std::array<int, 3>& lorder) {
  std::vector<Piece> out;
  const bool per = spec.family == Family::kdv_t;
  LinForm lmin = lvar(lorder[0]);
  LinForm lmed = lvar(lorder[1]);
  LinForm lmax = lvar(lorder[2]);
  LinForm H = LinForm::var("H");
  LinForm N = ctx.nmax();
  LinForm Nmin = ctx.nmin();
  const Rat d(spec.dim);

  auto zbracket = [&](Piece& p, LinForm content, Rat e) {
    if (per)
      p.bound.atoms.push_back(pos_atom(std::move(e), std::move(content)));
    else
      p.bound.base.add(content, e);
  };

  if (spec.family == Family::kdv_r || spec.family == Family::kdv_t) {
    {
      Piece std_piece;
      std_piece.label = "kdv-standard";
      std_piece.bound.base.add(lmin, Rat(1, 2));
      if (per) {
        // <N^-1 min(H,Lmed)^1/2>_Z: resolve the min inside the bracket by
        // splitting on it explicitly.
        Piece a = std_piece;
        a.label += "/min=H";
        a.guard_le(H, lmed);
        LinForm ca = Rat(-1) * N + Rat(1, 2) * H;
        a.bound.atoms.push_back(pos_atom(Rat(1), ca));
        Piece b = std_piece;
        b.label += "/min=Lmed";
        b.guard_le(lmed, H);
        LinForm cb = Rat(-1) * N + Rat(1, 2) * lmed;
        b.bound.atoms.push_back(pos_atom(Rat(1), cb));
        out.push_back(std::move(a));
        out.push_back(std::move(b));
      } else {
        std_piece.bound.base.add(N, Rat(-1));
        std_piece.bound.atoms.push_back(min_atom(Rat(1, 2), {H, lmed}));
        out.push_back(std::move(std_piece));
      }
    }
    if (!ctx.pinned_equal || true) {
      Piece ex;
      ex.label = "kdv-excep";
      ex.guard_eq(Nmin, N);
      ex.guard_eq(lmax, H);
      ex.bound.base.add(lmin, Rat(1, 2));
      zbracket(ex, Rat(-1, 4) * N + Rat(1, 4) * lmed, Rat(1));
      out.push_back(std::move(ex));
    }
    if (!ctx.pinned_equal && lorder[2] == ctx.min_index) {
      Piece w;
      w.label = "kdv-weird";
      w.guard_eq(lvar(ctx.min_index), H);
      w.bound.base.add(lmin, Rat(1, 2));
      if (per) {
        Piece a = w;
        a.label += "/min=H";
        a.guard_le(H, N - Nmin + lmed);
        a.bound.atoms.push_back(pos_atom(Rat(1), Rat(-1) * N + Rat(1, 2) * H));
        Piece b = w;
        b.label += "/min=ratio";
        b.guard_le(N - Nmin + lmed, H);
        b.bound.atoms.push_back(
            pos_atom(Rat(1), Rat(-1) * N + Rat(1, 2) * (N - Nmin + lmed)));
        out.push_back(std::move(a));
        out.push_back(std::move(b));
      } else {
        w.bound.base.add(N, Rat(-1));
        w.bound.atoms.push_back(min_atom(Rat(1, 2), {H, N - Nmin + lmed}));
        out.push_back(std::move(w));
      }
    }
    return out;
  }

  if (spec.family == Family::wave) {
    if (ctx.pinned_equal)
      throw std::invalid_argument("wave reduction needs the frequency cases");
    if (ctx.min_index == 2) {
      // (++) high-high: genuine small minus frequency forces H = N1 and the
      // low-modulation vanishing structure.
      for (int sub = 0; sub < 2; ++sub) {
        Piece p;
        p.label = sub == 0 ? "wpp/L3-large" : "wpp/L3-small";
        p.guard_le(Nmin, N + LinForm::lit(-2));
        p.guard_eq(H, N);
        if (sub == 0) {
          p.guard_le(N, lvar(2));
        } else {
          p.guard_le(lvar(2), N + LinForm::lit(-1));
          p.guard_eq(lvar(0), N);
          p.guard_eq(lvar(1), N);
        }
        p.bound.base.add(lmin, Rat(1, 2));
        p.bound.base.add(Nmin, (d - 1) / 2);
        p.bound.atoms.push_back(min_atom(Rat(1, 2), {lmed, Nmin}));
        out.push_back(std::move(p));
      }
      // Comparable sliver: all frequencies within a factor two; high-low
      // structure with the small plus index playing the low role.
      for (int sub = 0; sub < 2; ++sub) {
        Piece p;
        p.label = sub == 0 ? "w-standard/comparable" : "w-pm/comparable";
        p.guard_le(N + LinForm::lit(-1), Nmin);
        p.bound.base.add(H - Nmin, (d - 3) / 4);
        p.bound.base.add(lmin, Rat(1, 2));
        p.bound.base.add(Nmin, (d - 1) / 2);
        if (sub == 0) {
          p.bound.atoms.push_back(min_atom(Rat(1, 2), {H, lmed}));
        } else {
          p.bound.atoms.push_back(min_atom(Rat(1, 2), {H, N - Nmin + lmed}));
        }
        out.push_back(std::move(p));
      }
      return out;
    }
    // Low frequency at a plus index: high-low / (+-) high-high.
    {
      Piece p;
      p.label = "w-standard";
      p.bound.base.add(H - Nmin, (d - 3) / 4);
      p.bound.base.add(lmin, Rat(1, 2));
      p.bound.base.add(Nmin, (d - 1) / 2);
      p.bound.atoms.push_back(min_atom(Rat(1, 2), {H, lmed}));
      out.push_back(std::move(p));
    }
    if (lorder[2] == ctx.min_index) {
      Piece p;
      p.label = "w-pm";
      p.guard_eq(lvar(ctx.min_index), lmax);
      p.bound.base.add(H - Nmin, (d - 3) / 4);
      p.bound.base.add(lmin, Rat(1, 2));
      p.bound.base.add(Nmin, (d - 1) / 2);
      p.bound.atoms.push_back(min_atom(Rat(1, 2), {H, N - Nmin + lmed}));
      out.push_back(std::move(p));
    }
    return out;
  }

  auto sppx_standard = [&](const char* label) {
    Piece p;
    p.label = label;
    p.bound.base.add(lmin, Rat(1, 2));
    p.bound.base.add(N, Rat(-1, 2));
    p.bound.base.add(Nmin, (d - 1) / 2);
    p.bound.atoms.push_back(min_atom(Rat(1, 2), {N + Nmin, lmed}));
    return p;
  };

  if (spec.family == Family::schro_ppp) {
    out.push_back(sppx_standard("sppp-standard"));
    if (spec.dim == 1) {
      Piece ex;
      ex.label = "sppp-excep";
      ex.guard_eq(Nmin, N);
      ex.guard_eq(lmax, H);
      ex.bound.base.add(lmin, Rat(1, 2));
      ex.bound.base.add(lmed, Rat(1, 4));
      out.push_back(std::move(ex));
    }
    return out;
  }

  if (spec.family == Family::schro_ppm) {
    if (ctx.pinned_equal)
      throw std::invalid_argument("(++-) reduction needs the frequency cases");
    if (spec.dim == 1) {
      out.push_back(sppx_standard("sppm-1d-standard"));
      if (ctx.min_index != 2) {
        Piece w;
        w.label = "sppm-1d-weak";
        w.guard_eq(lvar(ctx.min_index), lmax);
        w.guard_eq(lvar(ctx.min_index), H);
        w.bound.base.add(lmin, Rat(1, 2));
        w.bound.base.add(Nmin, Rat(-1, 2));
        w.bound.base.add(lmed, Rat(1, 2));
        out.push_back(std::move(w));
      }
      Piece ex;
      ex.label = "sppm-1d-excep";
      ex.guard_eq(Nmin, N);
      ex.guard_eq(lmax, H);
      ex.bound.base.add(lmin, Rat(1, 2));
      ex.bound.base.add(lmed, Rat(1, 4));
      out.push_back(std::move(ex));
      return out;
    }
    Rat edge = Rat(1, 2) - (spec.dim == 2 ? Rat(0) : spec.eps);
    if (ctx.min_index == 2) {
      // (++): genuine high-high needs H = N1^2 = 2N.
      {
        Piece p = sppx_standard("sppm-pp");
        p.guard_le(Nmin, N + LinForm::lit(-2));
        p.guard_eq(H, Rat(2) * N);
        out.push_back(std::move(p));
      }
      // Comparable sliver behaves like the general (+-) case.
      Piece p;
      p.label = "sppm-est/comparable";
      p.guard_le(N + LinForm::lit(-1), Nmin);
      p.bound.base.add(lmin, Rat(1, 2));
      p.bound.base.add(N, Rat(-1, 2));
      p.bound.base.add(Nmin, (d - 1) / 2);
      p.bound.atoms.push_back(min_atom(Rat(1, 2), {H, lmed}));
      p.bound.atoms.push_back(min_atom(edge, {LinForm::lit(0), H - Rat(2) * Nmin}));
      out.push_back(std::move(p));
      return out;
    }
    {
      Piece p;
      p.label = "sppm-est";
      p.bound.base.add(lmin, Rat(1, 2));
      p.bound.base.add(N, Rat(-1, 2));
      p.bound.base.add(Nmin, (d - 1) / 2);
      p.bound.atoms.push_back(min_atom(Rat(1, 2), {H, lmed}));
      p.bound.atoms.push_back(min_atom(edge, {LinForm::lit(0), H - Rat(2) * Nmin}));
      out.push_back(std::move(p));
    }
    {
      Piece p;
      p.label = "sppm-excep";
      p.guard_eq(lvar(ctx.min_index), lmax);
      p.guard_eq(lvar(ctx.min_index), H);
      p.guard_le(Rat(2) * Nmin + LinForm::lit(1), H);
      p.bound.base.add(lmin, Rat(1, 2));
      p.bound.base.add(N, Rat(-1, 2));
      p.bound.base.add(Nmin, (d - 1) / 2);
      p.bound.atoms.push_back(min_atom(Rat(1, 2), {H, H - Rat(2) * Nmin + lmed}));
      out.push_back(std::move(p));
    }
    return out;
  }

  throw std::invalid_argument("unsupported family in reduction");
}

// Maps a weight symbol to its linear form in the emitted variables.
LinForm map_symbol(const std::string& s, const CaseCtx& ctx) {
  if (s == "N1") return ctx.freq(0);
  if (s == "N2") return ctx.freq(1);
  if (s == "N3") return ctx.freq(2);
  if (s == "H") return LinForm::var("H");
  if (s == "NMIN") return ctx.nmin();
  if (s == "NMAX" || s == "NMED") return ctx.nmax();
  throw std::invalid_argument("weight references unknown symbol " + s);
}

void emit_weight(const EstimateSpec& spec, const CaseCtx& ctx, DyadicExpr& expr) {
  for (const auto& term : spec.weight) {
    if (term.e == 0) continue;
    LinForm f = map_symbol(term.sym, ctx);
    // <N> = N on the region N >= 1; only genuinely two-sided symbols split.
    bool provably_nonneg = f.coef.size() == 1 && f.coef.count("N") && f.constant >= 0;
    if (term.bracket && !spec.homogeneous && !provably_nonneg)
      expr.atoms.push_back(pos_atom(term.e, std::move(f)));
    else
      expr.base.add(f, term.e);
  }
  for (const auto& atom : spec.weight_atoms) {
    Atom mapped = atom;
    mapped.args.clear();
    for (const auto& arg : atom.args) {
      LinForm f;
      f.constant = arg.constant;
      for (const auto& [sym, c] : arg.coef) f.add(map_symbol(sym, ctx), c);
      mapped.args.push_back(std::move(f));
    }
    expr.atoms.push_back(std::move(mapped));
  }
}

std::vector<std::array<int, 3>> all_orders() {
  std::vector<std::array<int, 3>> out;
  std::array<int, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end());
  do {
    out.push_back(idx);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

}  // namespace

std::vector<DyadicSumProblem> reduce_to_blocks(const EstimateSpec& spec) {
  std::vector<DyadicSumProblem> out;

  std::vector<char> pinned(3, 0);
  for (auto [j, partner] : spec.averaging) pinned[static_cast<std::size_t>(j - 1)] = 1;

  std::vector<CaseCtx> cases;
  if (spec.pin_all_n_equal || spec.spatial_only) {
    if (spec.pin_all_n_equal)
      cases.push_back({-1, true});
  }
  if (!spec.pin_all_n_equal)
    for (int mu = 0; mu < 3; ++mu) cases.push_back({mu, false});

  for (const CaseCtx& ctx : cases) {
    // Spatial-only reductions: no modulation variables, single branch.
    if (spec.spatial_only) {
      DyadicSumProblem p;
      p.region.declare("N", VarRole::SUP);
      if (!spec.homogeneous) p.region.require_le(LinForm::lit(0), LinForm::var("N"));
      if (!ctx.pinned_equal) {
        p.region.declare("Nmin", VarRole::SUM);
        p.region.require_le(LinForm::var("Nmin"), LinForm::var("N"));
      }
      DyadicExpr expr;
      emit_weight(spec, ctx, expr);
      expr.base.add(ctx.nmin(), Rat(spec.dim) / 2);  // |{|xi| ~ Nmin}|^(1/2) squared mass
      PiecewiseBound pw = resolve_minmax(expr, p.region, /*dedupe=*/false);
      int cidx = 0;
      for (auto& [region, form] : pw.cases) {
        DyadicSumProblem q;
        q.region = region;
        for (const auto& [v, c] : form.coef) q.objective.exp[v] = c;
        q.log2_scale = form.constant;
        q.label = "spatial/min-index-" + std::to_string(ctx.min_index + 1) + "/case-" +
                  std::to_string(cidx++);
        out.push_back(std::move(q));
      }
      continue;
    }

    for (const auto& lorder : all_orders()) {
      for (int branch = 0; branch < 2; ++branch) {
        DyadicRegion base;
        base.declare("N", VarRole::SUP);
        base.require_le(LinForm::lit(0), LinForm::var("N"));
        if (!ctx.pinned_equal) {
          base.declare("Nmin", VarRole::SUM);
          base.require_le(LinForm::var("Nmin"), LinForm::var("N"));
        }
        for (int j = 0; j < 3; ++j) {
          base.declare("L" + std::to_string(j + 1), VarRole::SUM);
          base.require_le(LinForm::lit(0), lvar(j));
          if (pinned[static_cast<std::size_t>(j)])
            base.require_eq(lvar(j), LinForm::lit(0));
        }
        base.declare("H", VarRole::SUM);
        base.require_le(lvar(lorder[0]), lvar(lorder[1]));
        base.require_le(lvar(lorder[1]), lvar(lorder[2]));

        // Family resonance constraint.
        switch (spec.family) {
          case Family::kdv_r:
          case Family::kdv_t:
            base.require_eq(LinForm::var("H"), ctx.freq(0) + ctx.freq(1) + ctx.freq(2));
            break;
          case Family::schro_ppp:
            base.require_eq(LinForm::var("H"), Rat(2) * ctx.nmax());
            break;
          case Family::schro_ppm:
            if (spec.dim == 1)
              base.require_eq(LinForm::var("H"), ctx.freq(0) + ctx.freq(1));
            else
              base.require_le(LinForm::var("H"), ctx.freq(0) + ctx.freq(1));
            break;
          case Family::wave: {
            LinForm lesser = (ctx.min_index == 2) ? ctx.nmax() : ctx.nmin();
            base.require_le(LinForm::var("H"), lesser);
            break;
          }
        }

        if (branch == 0) {
          base.require_eq(LinForm::var("H"), lvar(lorder[2]));
        } else {
          base.require_eq(lvar(lorder[2]), lvar(lorder[1]));
          base.require_le(LinForm::var("H"), lvar(lorder[2]) + LinForm::lit(-1));
        }

        for (Piece& piece : family_pieces(spec, ctx, lorder)) {
          DyadicRegion region = base;
          for (const auto& c : piece.extra) region.constraints.push_back(c);
          if (!region_feasible(region)) continue;

          DyadicExpr expr = piece.bound;
          emit_weight(spec, ctx, expr);
          std::array<Rat, 3> beff = spec.b;
          if (spec.weird_b1_override && piece.label == "kdv-weird" &&
              ctx.min_index != 2)
            beff[0] = *spec.weird_b1_override;
          for (int j = 0; j < 3; ++j) expr.base.add(lvar(j), -beff[static_cast<std::size_t>(j)]);

          PiecewiseBound pw = resolve_minmax(expr, region, /*dedupe=*/false);
          int cidx = 0;
          for (auto& [reg, form] : pw.cases) {
            DyadicSumProblem q;
            q.region = reg;
            for (const auto& [v, c] : form.coef)
              if (c != 0) q.objective.exp[v] = c;
            q.log2_scale = form.constant;
            std::ostringstream label;
            label << (branch == 0 ? "A" : "B") << "/min-index-" << (ctx.min_index + 1)
                  << "/L(" << lorder[0] + 1 << "<=" << lorder[1] + 1 << "<="
                  << lorder[2] + 1 << ")/" << piece.label << "/case-" << cidx++;
            q.label = label.str();
            for (const auto& v : spec.schur_vars) q = schur_refine(std::move(q), v);
            out.push_back(std::move(q));
          }
        }
      }
    }
  }
  return out;
}

EstimateSpec apply_averaging(EstimateSpec spec, int j, int partner) {
  if (j < 1 || j > 3 || partner < 1 || partner > 3 || j == partner)
    throw std::invalid_argument("averaging indices out of range");
  const Rat& bj = spec.b[static_cast<std::size_t>(j - 1)];
  const Rat& bp = spec.b[static_cast<std::size_t>(partner - 1)];
  if (!(bj > Rat(1, 2)))
    throw std::invalid_argument("averaging hypothesis fails: b_j > 1/2");
  if (!(bj > Rat(1, 2) + bp))
    throw std::invalid_argument("averaging hypothesis fails: b_j > 1/2 + b_partner");
  if (!(bj >= -bp))
    throw std::invalid_argument("averaging hypothesis fails: b_j >= -b_partner");
  spec.averaging.emplace_back(j, partner);
  return spec;
}

ProofReport prove(const EstimateSpec& spec) {
  ProofReport report;
  for (auto [j, partner] : spec.averaging)
    report.reductions_applied.push_back("averaging: L" + std::to_string(j) +
                                        " pinned to 1 (partner " +
                                        std::to_string(partner) + ")");
  for (const auto& v : spec.schur_vars)
    report.reductions_applied.push_back("schur-to-sup: " + v);

  auto problems = reduce_to_blocks(spec);
  ProofBranch low{"low-modulation", {}}, high{"high-modulation", {}},
      spatial{"spatial", {}};
  VerdictKind overall = VerdictKind::Converges;
  for (auto& p : problems) {
    Verdict v = sum_verdict(p);
    if (!v.empty_region && verdict_rank(v.kind) > verdict_rank(overall))
      overall = v.kind;
    ReducedCase rc{std::move(p), std::move(v)};
    if (rc.problem.label.rfind("spatial", 0) == 0)
      spatial.cases.push_back(std::move(rc));
    else if (rc.problem.label.rfind("A/", 0) == 0)
      low.cases.push_back(std::move(rc));
    else
      high.cases.push_back(std::move(rc));
  }
  report.any_case = !problems.empty();
  for (auto* br : {&low, &high, &spatial})
    if (!br->cases.empty()) report.branches.push_back(std::move(*br));
  report.overall = overall;
  return report;
}

std::string report_json(const ProofReport& r) {
  std::ostringstream os;
  os << "{\"verdict\":\"" << verdict_name(r.overall) << "\"";
  if (!r.builtin.empty()) os << ",\"builtin\":\"" << r.builtin << "\"";
  if (!r.params.empty()) {
    os << ",\"params\":{";
    bool first = true;
    for (const auto& [k, v] : r.params) {
      if (!first) os << ",";
      os << "\"" << k << "\":\"" << v << "\"";
      first = false;
    }
    os << "}";
  }
  if (r.certified_exponent)
    os << ",\"certified_exponent\":\"" << rat_str(*r.certified_exponent) << "\"";
  os << ",\"reductions_applied\":[";
  for (std::size_t i = 0; i < r.reductions_applied.size(); ++i) {
    if (i) os << ",";
    os << "\"" << r.reductions_applied[i] << "\"";
  }
  os << "],\"certificate_chain\":[";
  for (std::size_t i = 0; i < r.certificate_chain.size(); ++i) {
    if (i) os << ",";
    os << "\"" << r.certificate_chain[i] << "\"";
  }
  os << "],\"branches\":[";
  for (std::size_t bi = 0; bi < r.branches.size(); ++bi) {
    if (bi) os << ",";
    const auto& br = r.branches[bi];
    os << "{\"branch_label\":\"" << br.label << "\",\"cases\":[";
    for (std::size_t ci = 0; ci < br.cases.size(); ++ci) {
      if (ci) os << ",";
      os << verdict_json(br.cases[ci].problem, br.cases[ci].verdict);
    }
    os << "]}";
  }
  os << "]}";
  return os.str();
}

EstimateSpec spec_from_text(const std::string& text) {
  EstimateSpec spec;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "family") {
      std::string f;
      ls >> f;
      if (f == "sobolev") {
        spec.spatial_only = true;
      } else {
        spec.family = family_from_name(f);
      }
    } else if (head == "dim") {
      ls >> spec.dim;
    } else if (head == "weight") {
      std::string sym, e, flag;
      ls >> sym >> e;
      bool bracket = (ls >> flag) && flag == "bracket";
      spec.weight.push_back({sym, parse_rat(e), bracket});
    } else if (head == "weight_min") {
      // weight_min <exponent> <sym> <sym> ...
      std::string e, sym;
      ls >> e;
      Atom a{Atom::Kind::MIN, parse_rat(e), {}};
      while (ls >> sym) a.args.push_back(LinForm::var(sym));
      spec.weight_atoms.push_back(std::move(a));
    } else if (head == "b") {
      std::string b1, b2, b3;
      ls >> b1 >> b2 >> b3;
      spec.b = {parse_rat(b1), parse_rat(b2), parse_rat(b3)};
    } else if (head == "averaging") {
      int j, partner;
      ls >> j >> partner;
      spec = apply_averaging(std::move(spec), j, partner);
    } else if (head == "schur") {
      std::string v;
      ls >> v;
      spec.schur_vars.push_back(v);
    } else if (head == "homogeneous") {
      spec.homogeneous = true;
    } else if (head == "pin_all_n_equal") {
      spec.pin_all_n_equal = true;
    } else if (head == "eps") {
      std::string e;
      ls >> e;
      spec.eps = parse_rat(e);
    } else {
      throw std::invalid_argument("unknown spec directive " + head);
    }
  }
  return spec;
}

}  // namespace xsb
