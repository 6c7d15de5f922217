#include "xsb/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace xsb {

namespace {

void require_hyperplane_tuple(const GroupSpec& g, const std::vector<std::int64_t>& xi0,
                              int k) {
  if (static_cast<int>(xi0.size()) != k)
    throw std::invalid_argument("translation tuple arity mismatch");
  auto forced = g.forced_last(xi0.data(), k - 1);
  if (!forced || *forced != xi0[static_cast<std::size_t>(k - 1)])
    throw std::invalid_argument("translation tuple is off the hyperplane");
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  std::int64_t t = 0, nt = 1, r = m, nr = a % m;
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  if (r != 1) throw std::invalid_argument("dilation factor not coprime to M");
  return (t % m + m) % m;
}

}  // namespace

MultiplierK transform_translate(const MultiplierK& m, const std::vector<std::int64_t>& xi0) {
  const GroupSpec& g = m.group();
  const int k = m.k();
  require_hyperplane_tuple(g, xi0, k);

  if (m.factored()) {
    auto factors = m.factors();
    for (int j = 0; j < k; ++j) {
      std::vector<cplx> shifted(factors[static_cast<std::size_t>(j)].size());
      for (std::int64_t i = 0; i < g.total_points(); ++i) {
        auto src = g.add(i, xi0[static_cast<std::size_t>(j)]);
        shifted[static_cast<std::size_t>(i)] =
            src ? factors[static_cast<std::size_t>(j)][static_cast<std::size_t>(*src)]
                : cplx{};
      }
      factors[static_cast<std::size_t>(j)] = std::move(shifted);
    }
    return MultiplierK::from_factors(g, std::move(factors));
  }

  const Support& s = m.support();
  Support out;
  out.k = k;
  std::array<std::int64_t, 8> pts{};
  for (std::size_t e = 0; e < s.size(); ++e) {
    const std::int64_t* t = s.tuple(e);
    bool ok = true;
    for (int j = 0; j < k && ok; ++j) {
      auto nx = g.neg(xi0[static_cast<std::size_t>(j)]);
      if (!nx) {
        ok = false;
        break;
      }
      auto shifted = g.add(t[j], *nx);
      if (!shifted)
        ok = false;
      else
        pts[static_cast<std::size_t>(j)] = *shifted;
    }
    if (ok) out.push(pts.data(), s.values[e]);
  }
  return MultiplierK::from_support(k, g, std::move(out));
}

MultiplierK transform_permute(const MultiplierK& m, const std::vector<int>& sigma) {
  const int k = m.k();
  if (static_cast<int>(sigma.size()) != k)
    throw std::invalid_argument("permutation arity mismatch");
  std::vector<int> inv(static_cast<std::size_t>(k), -1);
  for (int j = 0; j < k; ++j) {
    int s = sigma[static_cast<std::size_t>(j)];
    if (s < 0 || s >= k || inv[static_cast<std::size_t>(s)] != -1)
      throw std::invalid_argument("not a permutation");
    inv[static_cast<std::size_t>(s)] = j;
  }

  if (m.factored()) {
    std::vector<std::vector<cplx>> factors(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
      factors[static_cast<std::size_t>(j)] =
          m.factors()[static_cast<std::size_t>(sigma[static_cast<std::size_t>(j)])];
    return MultiplierK::from_factors(m.group(), std::move(factors));
  }

  const Support& s = m.support();
  Support out;
  out.k = k;
  std::array<std::int64_t, 8> pts{};
  for (std::size_t e = 0; e < s.size(); ++e) {
    const std::int64_t* t = s.tuple(e);
    for (int j = 0; j < k; ++j)
      pts[static_cast<std::size_t>(j)] = t[inv[static_cast<std::size_t>(j)]];
    out.push(pts.data(), s.values[e]);
  }
  return MultiplierK::from_support(k, m.group(), std::move(out));
}

MultiplierK transform_dilate(const MultiplierK& m, const Rat& lambda) {
  const GroupSpec& g = m.group();
  const int k = m.k();

  if (g.kind() == GroupKind::real_grid) {
    if (g.time_axis())
      throw std::invalid_argument("dilation with a time axis is not supported");
    if (lambda <= 0) throw std::invalid_argument("dilation factor must be positive");
    GroupSpec g2 = GroupSpec::real_grid(g.points_per_axis(), g.spacing() * lambda,
                                        g.dim());
    if (m.factored()) {
      return MultiplierK::from_factors(g2, m.factors());
    }
    const Support& s = m.support();
    Support out = s;
    return MultiplierK::from_support(k, g2, std::move(out));
  }

  if (denominator(lambda) != 1)
    throw std::invalid_argument("cycle dilation needs an integer factor");
  std::int64_t lam = static_cast<std::int64_t>(numerator(lambda));
  std::int64_t mm = g.points_per_axis();
  lam = ((lam % mm) + mm) % mm;
  if (std::gcd(lam, mm) != 1)
    throw std::invalid_argument("dilation factor not coprime to M");

  auto scale_point = [&](std::int64_t idx, std::int64_t factor) {
    std::array<std::int32_t, GroupSpec::kMaxAxes> c{};
    g.decode(idx, c);
    for (int a = 0; a < g.dim(); ++a)
      c[static_cast<std::size_t>(a)] =
          static_cast<std::int32_t>((c[static_cast<std::size_t>(a)] * factor) % mm);
    return g.encode(c);
  };

  if (m.factored()) {
    std::int64_t inv = mod_inverse(lam, mm);
    auto factors = m.factors();
    for (auto& f : factors) {
      std::vector<cplx> out(f.size());
      for (std::int64_t i = 0; i < g.total_points(); ++i)
        out[static_cast<std::size_t>(i)] =
            f[static_cast<std::size_t>(scale_point(i, inv))];
      f = std::move(out);
    }
    return MultiplierK::from_factors(g, std::move(factors));
  }

  const Support& s = m.support();
  Support out;
  out.k = k;
  std::array<std::int64_t, 8> pts{};
  for (std::size_t e = 0; e < s.size(); ++e) {
    const std::int64_t* t = s.tuple(e);
    for (int j = 0; j < k; ++j)
      pts[static_cast<std::size_t>(j)] = scale_point(t[j], lam);
    out.push(pts.data(), s.values[e]);
  }
  return MultiplierK::from_support(k, g, std::move(out));
}

MultiplierK transform_conjugate_reflect(const MultiplierK& m, const std::vector<int>& J) {
  if (!m.factored())
    throw std::invalid_argument("conjugate_reflect needs a factored multiplier");
  const GroupSpec& g = m.group();
  auto factors = m.factors();
  for (int j : J) {
    if (j < 0 || j >= m.k()) throw std::invalid_argument("index out of range");
    auto& f = factors[static_cast<std::size_t>(j)];
    std::vector<cplx> out(f.size());
    for (std::int64_t i = 0; i < g.total_points(); ++i) {
      auto n = g.neg(i);
      out[static_cast<std::size_t>(i)] =
          n ? std::conj(f[static_cast<std::size_t>(*n)]) : cplx{};
    }
    f = std::move(out);
  }
  return MultiplierK::from_factors(g, std::move(factors));
}

MultiplierK tensor_product(const MultiplierK& m1, const MultiplierK& m2) {
  if (m1.k() != m2.k()) throw std::invalid_argument("tensor arity mismatch");
  const GroupSpec& g1 = m1.group();
  const GroupSpec& g2 = m2.group();
  // A trivial group collapses to a constant factor.
  auto trivial_value = [](const MultiplierK& m) {
    std::array<std::int64_t, 8> z{};
    return m.eval(z.data());
  };
  if (g2.total_points() == 1) {
    cplx v = trivial_value(m2);
    if (m1.factored()) {
      auto factors = m1.factors();
      for (auto& x : factors[0]) x *= v;
      return MultiplierK::from_factors(g1, std::move(factors));
    }
    Support s = m1.support();
    for (auto& val : s.values) val *= v;
    return MultiplierK::from_support(m1.k(), g1, std::move(s));
  }
  if (g1.total_points() == 1) return tensor_product(m2, m1);
  if (g1.kind() != g2.kind() || g1.points_per_axis() != g2.points_per_axis() ||
      g1.spacing() != g2.spacing() || g1.time_axis() || g2.time_axis())
    throw std::invalid_argument("tensor product needs composable groups");
  int dim = g1.dim() + g2.dim();
  GroupKind kind = g1.kind();
  if (kind == GroupKind::cycle && dim > 1) kind = GroupKind::torus_grid;
  GroupSpec g(kind, dim, g1.points_per_axis(), g1.spacing());

  const std::int64_t t2 = g2.total_points();
  if (m1.factored() && m2.factored()) {
    std::vector<std::vector<cplx>> factors(static_cast<std::size_t>(m1.k()));
    for (int j = 0; j < m1.k(); ++j) {
      auto& f = factors[static_cast<std::size_t>(j)];
      f.resize(static_cast<std::size_t>(g.total_points()));
      for (std::int64_t i = 0; i < g.total_points(); ++i)
        f[static_cast<std::size_t>(i)] =
            m1.factors()[static_cast<std::size_t>(j)][static_cast<std::size_t>(i / t2)] *
            m2.factors()[static_cast<std::size_t>(j)][static_cast<std::size_t>(i % t2)];
    }
    return MultiplierK::from_factors(std::move(g), std::move(factors));
  }

  const int k = m1.k();
  auto lhs = std::make_shared<MultiplierK>(m1);
  auto rhs = std::make_shared<MultiplierK>(m2);
  return MultiplierK::from_rule(
      k, g,
      [lhs, rhs, t2, k](const std::int64_t* pts) {
        std::array<std::int64_t, 8> a{}, b{};
        for (int j = 0; j < k; ++j) {
          a[static_cast<std::size_t>(j)] = pts[j] / t2;
          b[static_cast<std::size_t>(j)] = pts[j] % t2;
        }
        return lhs->eval(a.data()) * rhs->eval(b.data());
      },
      m1.full_space() && m2.full_space(), m1.real_valued() && m2.real_valued());
}

MultiplierK tt_star(const MultiplierK& m) {
  if (!m.real_valued())
    throw std::invalid_argument("tt_star is stated for real-valued multipliers");
  if (!m.full_space())
    throw std::invalid_argument("tt_star needs a full-space multiplier");
  const int k = m.k();
  auto base = std::make_shared<MultiplierK>(m);
  const GroupSpec g = m.group();
  return MultiplierK::from_rule(
      2 * k, g,
      [base, k, g](const std::int64_t* pts) -> cplx {
        std::array<std::int64_t, 8> a{}, b{};
        for (int j = 0; j < k; ++j) a[static_cast<std::size_t>(j)] = pts[j];
        for (int j = 0; j < k; ++j) {
          auto n = g.neg(pts[k + j]);
          if (!n) return {};
          b[static_cast<std::size_t>(j)] = *n;
        }
        return base->eval(a.data()) * std::conj(base->eval(b.data()));
      },
      false, true);
}

double schur_sum_bound(const std::vector<SchurPart>& parts, int j1, int j2, int a1,
                       int a2) {
  if (parts.empty()) return 0.0;
  if (j1 == j2) throw std::invalid_argument("schur indices must be distinct");
  const GroupSpec& g = parts.front().m.group();
  const std::int64_t total = g.total_points();

  for (int side = 0; side < 2; ++side) {
    int j = side == 0 ? j1 : j2;
    int declared = side == 0 ? a1 : a2;
    std::vector<int> count(static_cast<std::size_t>(total), 0);
    for (const auto& part : parts) {
      const auto& supp = side == 0 ? part.supp1 : part.supp2;
      std::vector<char> in(static_cast<std::size_t>(total), 0);
      for (auto p : supp) in[static_cast<std::size_t>(p)] = 1;
      // Actual support must be inside the declared one.
      const Support& s = part.m.support();
      for (std::size_t e = 0; e < s.size(); ++e)
        if (!in[static_cast<std::size_t>(s.tuple(e)[j - 1])])
          throw std::invalid_argument("declared support does not cover the multiplier");
      for (auto p : supp) ++count[static_cast<std::size_t>(p)];
    }
    int worst = 0;
    for (auto c : count) worst = std::max(worst, c);
    if (worst > declared)
      throw std::invalid_argument("overlap declaration violated");
  }

  double best = 0.0;
  for (const auto& part : parts) best = std::max(best, cs_upper_best(part.m));
  return std::sqrt(static_cast<double>(a1) * static_cast<double>(a2)) * best;
}

MultiplierK schur_sum(const std::vector<SchurPart>& parts) {
  if (parts.empty()) throw std::invalid_argument("empty part list");
  const int k = parts.front().m.k();
  const GroupSpec g = parts.front().m.group();
  Support out;
  out.k = k;
  for (const auto& part : parts) {
    const Support& s = part.m.support();
    for (std::size_t e = 0; e < s.size(); ++e) out.push(s.tuple(e), s.values[e]);
  }
  return MultiplierK::from_support(k, g, std::move(out));
}

}  // namespace xsb
