#include <cmath>
#include <sstream>

#include "xsb/dyadic_oracle.hpp"
#include "xsb/harness.hpp"
#include "xsb/rng.hpp"
#include "xsb/transform.hpp"

namespace xsb {

namespace {

struct Checker {
  SuiteCheck check;
  explicit Checker(std::string name) { check.name = std::move(name); }
  void record(bool ok, const std::string& instance) {
    if (ok) {
      ++check.pass;
    } else {
      ++check.fail;
      if (check.failures.size() < 16) check.failures.push_back(instance);
    }
  }
};

std::vector<cplx> random_values(const CounterRng& rng, std::uint64_t stream,
                                std::int64_t n, bool nonneg) {
  CounterRng r{rng.seed, stream};
  std::vector<cplx> v(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < v.size(); ++i) {
    cplx z = r.gaussian(static_cast<std::uint64_t>(i));
    v[i] = nonneg ? cplx(std::abs(z.real()), 0.0) : z;
  }
  return v;
}

MultiplierK random_dense3(const CounterRng& rng, std::uint64_t stream,
                          const GroupSpec& g, bool nonneg) {
  auto v = random_values(rng, stream, g.total_points() * g.total_points(), nonneg);
  return MultiplierK::dense3(g, std::move(v));
}

std::string fmt_trial(const char* what, int t) {
  std::ostringstream os;
  os << what << " trial=" << t;
  return os.str();
}

}  // namespace

SuiteResult run_property_suite(std::uint64_t seed, int trials) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  SuiteResult result;
  result.seed = seed;
  result.trials = trials;
  CounterRng rng{seed, 0};
  const int n_small = std::max(4, trials / 8);

  // --- Comparison principle: |m| <= M pointwise forces the section bounds
  // and nonnegative integrals to be monotone.
  {
    Checker c("comparison-monotonicity");
    GroupSpec g = GroupSpec::cycle(8);
    for (int t = 0; t < n_small; ++t) {
      auto mv = random_values(rng, 100 + static_cast<std::uint64_t>(t), 64, false);
      auto env = mv;
      CounterRng bump{seed, 9000 + static_cast<std::uint64_t>(t)};
      for (std::size_t i = 0; i < env.size(); ++i)
        env[i] = std::abs(mv[i]) + std::abs(bump.gaussian(static_cast<std::uint64_t>(i)).real());
      auto m = MultiplierK::dense3(g, mv);
      auto big = MultiplierK::dense3(g, env);
      bool ok = true;
      for (int j = 1; j <= 3; ++j)
        ok = ok && cs_upper(m, j) <= cs_upper(big, j) * (1 + 1e-12);
      // gamma monotone on nonnegative data
      std::vector<GridFunction> fs;
      CounterRng fr{seed, 9100 + static_cast<std::uint64_t>(t)};
      for (int j = 0; j < 3; ++j) {
        GridFunction f(g);
        for (std::int64_t i = 0; i < 8; ++i)
          f.values[static_cast<std::size_t>(i)] =
              std::abs(fr.gaussian(static_cast<std::uint64_t>(j * 8 + i)).real());
        fs.push_back(std::move(f));
      }
      std::vector<cplx> absm(mv.size());
      for (std::size_t i = 0; i < mv.size(); ++i) absm[i] = std::abs(mv[i]);
      auto mabs = MultiplierK::dense3(g, absm);
      ok = ok && gamma_integrate(mabs, fs).real() <=
                     gamma_integrate(big, fs).real() * (1 + 1e-12);
      c.record(ok, fmt_trial("comparison", t));
    }
    result.checks.push_back(std::move(c.check));
  }

  // --- Convexity of the section bound at theta in {1/4, 1/2, 3/4}.
  {
    Checker c("convexity");
    GroupSpec g = GroupSpec::cycle(8);
    for (int t = 0; t < n_small; ++t) {
      auto v1 = random_values(rng, 200 + static_cast<std::uint64_t>(t), 64, true);
      auto v2 = random_values(rng, 300 + static_cast<std::uint64_t>(t), 64, true);
      auto m1 = MultiplierK::dense3(g, v1);
      auto m2 = MultiplierK::dense3(g, v2);
      bool ok = true;
      for (double theta : {0.25, 0.5, 0.75}) {
        std::vector<cplx> mix(v1.size());
        for (std::size_t i = 0; i < v1.size(); ++i)
          mix[i] = std::pow(v1[i].real(), theta) * std::pow(v2[i].real(), 1 - theta);
        auto mm = MultiplierK::dense3(g, mix);
        for (int j = 1; j <= 3; ++j) {
          double lhs = cs_upper(mm, j);
          double rhs = std::pow(cs_upper(m1, j), theta) * std::pow(cs_upper(m2, j), 1 - theta);
          ok = ok && lhs <= rhs * (1 + 1e-9);
        }
      }
      c.record(ok, fmt_trial("convexity", t));
    }
    result.checks.push_back(std::move(c.check));
  }

  // --- Translation and permutation invariance (exact).
  {
    Checker c("translation-permutation-invariance");
    GroupSpec g = GroupSpec::cycle(6);
    for (int t = 0; t < n_small; ++t) {
      auto m = random_dense3(rng, 400 + static_cast<std::uint64_t>(t), g, false);
      CounterRng tr{seed, 9500 + static_cast<std::uint64_t>(t)};
      std::int64_t a = static_cast<std::int64_t>(tr.below(0, 6));
      std::int64_t b = static_cast<std::int64_t>(tr.below(1, 6));
      std::int64_t cc = ((-(a + b)) % 6 + 6) % 6;
      auto shifted = transform_translate(m, {a, b, cc});
      bool ok = true;
      for (int j = 1; j <= 3; ++j) ok = ok && cs_upper(shifted, j) == cs_upper(m, j);
      std::vector<int> sigma = {2, 0, 1};
      auto ms = transform_permute(m, sigma);
      for (int j = 0; j < 3; ++j)
        ok = ok && cs_upper(ms, sigma[static_cast<std::size_t>(j)] + 1) == cs_upper(m, j + 1);
      c.record(ok, fmt_trial("invariance", t));
    }
    result.checks.push_back(std::move(c.check));
  }

  // --- Tensor multiplicativity.
  {
    Checker c("tensor-multiplicativity");
    GroupSpec g = GroupSpec::cycle(4);
    AltMaxConfig cfg;
    cfg.restarts = 4;
    cfg.iterations = 60;
    cfg.tolerance = 1e-9;
    cfg.seed = seed ^ 0xabc;
    for (int t = 0; t < std::max(2, n_small / 2); ++t) {
      auto fac = [&](std::uint64_t s) {
        std::vector<std::vector<cplx>> f;
        for (int j = 0; j < 3; ++j)
          f.push_back(random_values(rng, s + static_cast<std::uint64_t>(j), 4, false));
        return MultiplierK::from_factors(g, f);
      };
      auto m1 = fac(500 + 8 * static_cast<std::uint64_t>(t));
      auto m2 = fac(600 + 8 * static_cast<std::uint64_t>(t));
      auto tp = tensor_product(m1, m2);
      bool ok = true;
      for (int j = 1; j <= 3; ++j) {
        double lhs = cs_upper(tp, j);
        double rhs = cs_upper(m1, j) * cs_upper(m2, j);
        ok = ok && std::abs(lhs - rhs) <= 1e-12 * (rhs + 1);
      }
      double prod = alt_max(m1, cfg).lower * alt_max(m2, cfg).lower;
      ok = ok && alt_max(tp, cfg).lower >= prod * (1 - 1e-6);
      c.record(ok, fmt_trial("tensor", t));
    }
    result.checks.push_back(std::move(c.check));
  }

  // --- Schur bound against alt_max on dyadically separated parts.
  {
    Checker c("schur-bound");
    GroupSpec g = GroupSpec::cycle(16);
    AltMaxConfig cfg;
    cfg.restarts = 4;
    cfg.iterations = 60;
    cfg.tolerance = 1e-9;
    cfg.seed = seed ^ 0xdef;
    for (int t = 0; t < std::max(2, n_small / 2); ++t) {
      std::vector<SchurPart> parts;
      // dyadic index annuli {1}, {2,3}, {4..7} on both xi1 and xi2
      std::vector<std::vector<std::int64_t>> shells = {{1}, {2, 3}, {4, 5, 6, 7}};
      CounterRng vr{seed, 9800 + static_cast<std::uint64_t>(t)};
      std::uint64_t ctr = 0;
      for (const auto& shell : shells) {
        std::vector<cplx> a(16, 0.0), b(16, 0.0), ones(16, 1.0);
        for (auto i : shell) {
          a[static_cast<std::size_t>(i)] = std::abs(vr.gaussian(ctr++).real());
          b[static_cast<std::size_t>(i)] = std::abs(vr.gaussian(ctr++).real());
        }
        parts.push_back({MultiplierK::from_factors(g, {a, b, ones}), shell, shell});
      }
      double bound = schur_sum_bound(parts, 1, 2, 1, 1);
      double lower = alt_max(schur_sum(parts), cfg).lower;
      c.record(lower <= bound * (1 + 1e-6), fmt_trial("schur", t));
    }
    result.checks.push_back(std::move(c.check));
  }

  // --- Composition bound: [3]-form m1(xi1,xi2) m2(xi3) against the product
  // of the [3]-norm certificate of m1 and the sup of m2.
  {
    Checker c("composition-bound");
    GroupSpec g = GroupSpec::cycle(8);
    AltMaxConfig cfg;
    cfg.restarts = 4;
    cfg.iterations = 60;
    cfg.tolerance = 1e-9;
    cfg.seed = seed ^ 0x77;
    for (int t = 0; t < std::max(2, n_small / 2); ++t) {
      auto v1 = random_values(rng, 700 + static_cast<std::uint64_t>(t), 64, false);
      auto a3 = random_values(rng, 800 + static_cast<std::uint64_t>(t), 8, false);
      auto m1table = std::make_shared<std::vector<cplx>>(v1);
      auto m1 = MultiplierK::dense3(g, v1);  // constant in xi3 by construction below
      std::vector<cplx> full(64);
      for (std::int64_t i = 0; i < 8; ++i)
        for (std::int64_t j = 0; j < 8; ++j)
          full[static_cast<std::size_t>(i * 8 + j)] =
              (*m1table)[static_cast<std::size_t>(i * 8 + j)];
      auto composed_table = full;
      // compose with m2(xi3): xi3 = -(xi1+xi2)
      for (std::int64_t i = 0; i < 8; ++i)
        for (std::int64_t j = 0; j < 8; ++j) {
          std::int64_t k = ((-(i + j)) % 8 + 8) % 8;
          composed_table[static_cast<std::size_t>(i * 8 + j)] *=
              a3[static_cast<std::size_t>(k)];
        }
      auto composed = MultiplierK::dense3(g, composed_table);
      double supm2 = 0;
      for (const auto& z : a3) supm2 = std::max(supm2, std::abs(z));
      double bound = cs_upper_best(m1) * supm2;
      double lower = alt_max(composed, cfg).lower;
      c.record(lower <= bound * (1 + 1e-6), fmt_trial("composition", t));
    }
    result.checks.push_back(std::move(c.check));
  }

  // --- Block formula invariants: permutation/swap symmetry and modulation
  // monotonicity within a case.
  {
    Checker c("block-symmetry-monotonicity");
    std::uint64_t ctr = 0;
    CounterRng br{seed, 42};
    for (int t = 0; t < trials; ++t) {
      auto p = BlockParams::from_values(
          exp2i(static_cast<long>(br.below(ctr++, 4)) - 1),
          exp2i(static_cast<long>(br.below(ctr++, 4)) - 1),
          exp2i(static_cast<long>(br.below(ctr++, 4)) - 1),
          exp2i(static_cast<long>(br.below(ctr++, 3))),
          exp2i(static_cast<long>(br.below(ctr++, 3))),
          exp2i(static_cast<long>(br.below(ctr++, 3))),
          exp2i(static_cast<long>(br.below(ctr++, 8)) - 3));
      auto q = p;
      std::swap(q.n[0], q.n[1]);
      std::swap(q.l[0], q.l[1]);
      bool ok = std::abs(kdv_block(p).value - kdv_block(q).value) <=
                1e-12 * (kdv_block(p).value + 1);
      auto pw = p;
      pw.dim = 3;
      pw.signs = {+1, +1, -1};
      auto qw = q;
      qw.dim = 3;
      qw.signs = {+1, +1, -1};
      ok = ok && std::abs(wave_block(pw).value - wave_block(qw).value) <=
                     1e-12 * (wave_block(pw).value + 1);
      ok = ok && std::abs(schro_ppm_block(pw).value - schro_ppm_block(qw).value) <=
                     1e-12 * (schro_ppm_block(pw).value + 1);
      auto b0 = kdv_block(p);
      if (!b0.vanishes) {
        for (int j = 0; j < 3; ++j) {
          auto r = p;
          r.l[static_cast<std::size_t>(j)] += 1;
          auto b1 = kdv_block(r);
          if (!b1.vanishes && b1.case_label == b0.case_label)
            ok = ok && b1.value >= b0.value * (1 - 1e-12);
        }
        ok = ok && b0.symbolic_consistent(p);
      }
      c.record(ok, fmt_trial("block", t));
    }
    result.checks.push_back(std::move(c.check));
  }

  // --- Vanishing consistency: formula zero iff empty support, on a curated
  // parameter set whose shells are resolvable at this grid.
  {
    Checker c("block-vanishing-support");
    GroupSpec grid = GroupSpec::real_grid(64, Rat(1, 4), 1, TimeAxis{64, Rat(1, 2)});
    struct Tuple {
      double n1, n2, n3, l1, l2, l3, h;
    };
    std::vector<Tuple> curated = {
        {1, 1, 0.5, 2, 1, 1, 1},    {1, 1, 0.5, 2, 1, 1, 0.5},
        {1, 1, 0.5, 2, 1, 1, 0.25},  // below the resonance window: vanishes
        {1, 1, 0.5, 2, 1, 1, 8},     // above the window: vanishes
        {1, 1, 2, 4, 2, 1, 1},      {1, 1, 2, 4, 4, 2, 2},
        {1, 1, 2, 1, 2, 8, 2},       // coherent (N,N,2N); doubled index carries Lmax
        {2, 0.5, 0.5, 1, 1, 1, 1},   // n-comp violated: vanishes
        {1, 1, 0.5, 8, 1, 1, 1},     // t-comp violated: vanishes
    };
    for (std::size_t i = 0; i < curated.size(); ++i) {
      const auto& t = curated[i];
      auto p = BlockParams::from_values(t.n1, t.n2, t.n3, t.l1, t.l2, t.l3, t.h);
      auto bound = kdv_block(p);
      auto support = block_multiplier(p, Family::kdv_r, grid).support().size();
      bool ok = bound.vanishes == (support == 0);
      std::ostringstream os;
      os << "kdv vanishing tuple " << i << " label=" << bound.case_label
         << " support=" << support;
      c.record(ok, os.str());
    }
    result.checks.push_back(std::move(c.check));
  }

  // --- Dyadic verdicts against the direct partial-sum oracle.
  {
    Checker c("dyadic-verdict-oracle");
    CounterRng pr{seed, 77};
    std::uint64_t ctr = 0;
    int count = std::max(6, trials / 8);
    for (int t = 0; t < count; ++t) {
      DyadicSumProblem p;
      int nvars = 2 + static_cast<int>(pr.below(ctr++, 2));
      std::vector<std::string> names;
      for (int i = 0; i < nvars; ++i) {
        std::string v = "X" + std::to_string(i);
        p.region.declare(v, pr.below(ctr++, 3) > 0 ? VarRole::SUM : VarRole::SUP);
        p.region.require_le(LinForm::lit(0), LinForm::var(v));
        long num = 1 + static_cast<long>(pr.below(ctr++, 4));
        Rat e(num, 2);
        if (pr.below(ctr++, 2)) e = -e;
        p.objective.exp[v] = e;
        names.push_back(v);
      }
      for (int i = 0; i + 1 < nvars; ++i)
        if (pr.below(ctr++, 2))
          p.region.require_le(LinForm::var(names[static_cast<std::size_t>(i)]),
                              LinForm::var(names[static_cast<std::size_t>(i + 1)]));
      p.label = "suite-" + std::to_string(t);
      auto v = sum_verdict(p);
      std::string why;
      bool ok = oracle_matches(p, v.kind, &why);
      c.record(ok, p.label + " -> " + verdict_name(v.kind) + " (" + why + ")");
    }
    result.checks.push_back(std::move(c.check));
  }

  return result;
}

}  // namespace xsb
