#include "xsb/norm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "xsb/rng.hpp"

namespace xsb {

void AltMaxConfig::validate() const {
  if (restarts < 1 || iterations < 1 || !(tolerance > 0))
    throw std::invalid_argument("bad alt_max configuration");
}

double rayleigh(const MultiplierK& m, const std::vector<GridFunction>& fs) {
  check_same_group(m, fs);
  double denom = 1.0;
  for (const auto& f : fs) {
    double n = l2_norm(f);
    if (n == 0.0) throw std::invalid_argument("rayleigh with a zero function");
    denom *= n;
  }
  return std::abs(gamma_integrate(m, fs)) / denom;
}

namespace {

std::uint64_t dbits(double d) { return std::bit_cast<std::uint64_t>(d); }

// Multiset-deterministic sum of doubles: sort by bit pattern, then pairwise.
double sorted_sum(std::vector<double>& v) {
  std::sort(v.begin(), v.end(), [](double a, double b) { return dbits(a) < dbits(b); });
  return pairwise_sum(std::span<const double>(v));
}

struct SectionAccum {
  // (section point, term) pairs; summed per section with a multiset-
  // deterministic order so that relabelled reruns match bitwise.
  std::vector<std::pair<std::int64_t, cplx>> terms;

  void sort_terms() {
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      if (dbits(a.second.real()) != dbits(b.second.real()))
        return dbits(a.second.real()) < dbits(b.second.real());
      return dbits(a.second.imag()) < dbits(b.second.imag());
    });
  }
};

struct RestartResult {
  double value = 0.0;
  std::vector<std::vector<cplx>> fs;
  bool dead = false;
};

RestartResult run_restart(const MultiplierK& m, const AltMaxConfig& cfg, int restart,
                          const std::vector<std::vector<GridFunction>>& seeds) {
  const Support& sup = m.support();
  const int k = m.k();
  const GroupSpec& g = m.group();
  const std::int64_t total = g.total_points();
  const double measure = g.point_measure_d();
  const double wfac = std::pow(measure, k - 2);

  RestartResult out;
  out.fs.assign(static_cast<std::size_t>(k),
                std::vector<cplx>(static_cast<std::size_t>(total)));

  // Active index sets per variable.
  std::vector<std::vector<std::int64_t>> active(static_cast<std::size_t>(k));
  {
    std::vector<char> seen(static_cast<std::size_t>(total));
    for (int j = 0; j < k; ++j) {
      std::fill(seen.begin(), seen.end(), 0);
      for (std::size_t e = 0; e < sup.size(); ++e)
        seen[static_cast<std::size_t>(sup.tuple(e)[j])] = 1;
      for (std::int64_t i = 0; i < total; ++i)
        if (seen[static_cast<std::size_t>(i)]) active[static_cast<std::size_t>(j)].push_back(i);
    }
  }

  if (restart < static_cast<int>(seeds.size())) {
    const auto& seed = seeds[static_cast<std::size_t>(restart)];
    if (static_cast<int>(seed.size()) != k)
      throw std::invalid_argument("seed witness arity mismatch");
    for (int j = 0; j < k; ++j)
      out.fs[static_cast<std::size_t>(j)] = seed[static_cast<std::size_t>(j)].values;
  } else {
    for (int j = 0; j < k; ++j) {
      CounterRng rng{cfg.seed, static_cast<std::uint64_t>(restart) * 64 +
                                   static_cast<std::uint64_t>(j)};
      for (auto i : active[static_cast<std::size_t>(j)])
        out.fs[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
            rng.gaussian(static_cast<std::uint64_t>(i));
    }
  }
  // Normalize.
  for (int j = 0; j < k; ++j) {
    auto& fj = out.fs[static_cast<std::size_t>(j)];
    std::vector<double> sq;
    sq.reserve(fj.size());
    for (const auto& v : fj)
      if (v != cplx{}) sq.push_back(std::norm(v));
    double n2 = sorted_sum(sq) * measure;
    if (n2 == 0.0) {
      out.dead = true;
      return out;
    }
    double inv = 1.0 / std::sqrt(n2);
    for (auto& v : fj) v *= inv;
  }

  SectionAccum acc;
  acc.terms.reserve(sup.size());
  std::vector<double> usq;

  double value = 0.0;
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    double cycle_start = value;
    for (int j = 0; j < k; ++j) {
      acc.terms.clear();
      for (std::size_t e = 0; e < sup.size(); ++e) {
        const std::int64_t* t = sup.tuple(e);
        cplx v = sup.values[e];
        for (int l = 0; l < k; ++l)
          if (l != j) v *= out.fs[static_cast<std::size_t>(l)][static_cast<std::size_t>(t[l])];
        acc.terms.emplace_back(t[j], v);
      }
      acc.sort_terms();

      auto& fj = out.fs[static_cast<std::size_t>(j)];
      std::fill(fj.begin(), fj.end(), cplx{});
      usq.clear();
      std::vector<cplx> run;
      std::size_t e = 0;
      while (e < acc.terms.size()) {
        std::int64_t sec = acc.terms[e].first;
        run.clear();
        while (e < acc.terms.size() && acc.terms[e].first == sec) {
          run.push_back(acc.terms[e].second);
          ++e;
        }
        cplx u = pairwise_sum(std::span<const cplx>(run));
        fj[static_cast<std::size_t>(sec)] = std::conj(u);
        usq.push_back(std::norm(u));
      }
      double l2u = std::sqrt(sorted_sum(usq) * measure);
      if (l2u == 0.0) {
        out.dead = true;
        out.value = 0.0;
        return out;
      }
      double inv = 1.0 / l2u;
      for (auto& v : fj) v *= inv;
      value = wfac * l2u;
    }
    if (value - cycle_start < cfg.tolerance && iter > 0) break;
  }
  out.value = value;
  return out;
}

}  // namespace

NormEstimate alt_max(const MultiplierK& m, const AltMaxConfig& cfg,
                     const std::vector<std::vector<GridFunction>>& seeds) {
  cfg.validate();
  for (const auto& s : seeds)
    for (const auto& f : s)
      if (!(f.group == m.group())) throw std::invalid_argument("seed group mismatch");

  NormEstimate est;
  est.lower_method = "alt_max";
  const Support& sup = m.support();
  if (sup.size() == 0) {
    est.lower = 0.0;
    est.zero_multiplier = true;
    return est;
  }

  std::vector<RestartResult> results(static_cast<std::size_t>(cfg.restarts));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel_enabled() && cfg.restarts > 1)
#endif
  for (int r = 0; r < cfg.restarts; ++r)
    results[static_cast<std::size_t>(r)] = run_restart(m, cfg, r, seeds);

  int best = -1;
  for (int r = 0; r < cfg.restarts; ++r) {
    const auto& rr = results[static_cast<std::size_t>(r)];
    if (rr.dead) continue;
    if (best < 0 || rr.value > results[static_cast<std::size_t>(best)].value) best = r;
  }
  if (best < 0) {
    est.lower = 0.0;
    est.zero_multiplier = true;
    return est;
  }
  const auto& win = results[static_cast<std::size_t>(best)];
  est.lower = win.value;
  std::vector<GridFunction> wit;
  wit.reserve(static_cast<std::size_t>(m.k()));
  for (int j = 0; j < m.k(); ++j)
    wit.emplace_back(m.group(), win.fs[static_cast<std::size_t>(j)]);
  est.witness = std::move(wit);
  return est;
}

SectionSq cs_upper_sq(const MultiplierK& m, int j) {
  if (j < 1 || j > m.k()) throw std::invalid_argument("cs_upper index out of range");
  const Support& sup = m.support();
  const int jj = j - 1;
  std::vector<std::pair<std::int64_t, double>> terms;
  terms.reserve(sup.size());
  for (std::size_t e = 0; e < sup.size(); ++e)
    terms.emplace_back(sup.tuple(e)[jj], std::norm(sup.values[e]));
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return dbits(a.second) < dbits(b.second);
  });
  double best = 0.0;
  std::vector<double> run;
  std::size_t e = 0;
  while (e < terms.size()) {
    std::int64_t sec = terms[e].first;
    run.clear();
    while (e < terms.size() && terms[e].first == sec) {
      run.push_back(terms[e].second);
      ++e;
    }
    best = std::max(best, pairwise_sum(std::span<const double>(run)));
  }
  SectionSq out;
  out.max_section = best;
  out.weight = 1;
  for (int i = 0; i + 2 < m.k(); ++i) out.weight *= m.group().point_measure();
  return out;
}

double cs_upper(const MultiplierK& m, int j) {
  SectionSq s = cs_upper_sq(m, j);
  return std::sqrt(s.max_section * to_double(s.weight));
}

double cs_upper_best(const MultiplierK& m) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= m.k(); ++j) best = std::min(best, cs_upper(m, j));
  return best;
}

double k2_exact(const MultiplierK& m) {
  if (m.k() != 2) throw std::invalid_argument("k2_exact requires k = 2");
  const GroupSpec& g = m.group();
  double best = 0.0;
  std::int64_t pts[2];
  for (std::int64_t i = 0; i < g.total_points(); ++i) {
    auto n = g.neg(i);
    if (!n) continue;
    pts[0] = i;
    pts[1] = *n;
    best = std::max(best, std::abs(m.eval(pts)));
  }
  return best;
}

NormEstimate estimate_norm(const MultiplierK& m, const AltMaxConfig& cfg,
                           const std::vector<std::vector<GridFunction>>& seeds) {
  NormEstimate est = alt_max(m, cfg, seeds);
  est.upper = cs_upper_best(m);
  est.upper_method = "cs_upper";
  if (m.k() == 2) {
    double exact = k2_exact(m);
    if (exact < est.upper) {
      est.upper = exact;
      est.upper_method = "k2_exact";
    }
  }
  return est;
}

}  // namespace xsb
