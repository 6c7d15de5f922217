#include "doctest.h"

#include <cmath>

#include "xsb/rng.hpp"
#include "xsb/transform.hpp"

using namespace xsb;

namespace {

MultiplierK random_dense3(const GroupSpec& g, std::uint64_t seed) {
  std::vector<cplx> table(static_cast<std::size_t>(g.total_points() * g.total_points()));
  CounterRng rng{seed, 1};
  for (std::size_t i = 0; i < table.size(); ++i)
    table[i] = rng.gaussian(static_cast<std::uint64_t>(i));
  return MultiplierK::dense3(g, std::move(table));
}

std::vector<cplx> random_values(std::int64_t n, std::uint64_t seed) {
  std::vector<cplx> v(static_cast<std::size_t>(n));
  CounterRng rng{seed, 4};
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.gaussian(static_cast<std::uint64_t>(i));
  return v;
}

}  // namespace

TEST_CASE("translate: round trip is bitwise on cycle groups") {
  GroupSpec c = GroupSpec::cycle(5);
  auto m = random_dense3(c, 3);
  std::vector<std::int64_t> xi0 = {1, 2, 2};  // 1+2+2 = 5 = 0 mod 5
  auto t = transform_translate(m, xi0);
  std::vector<std::int64_t> minus = {4, 3, 3};
  auto back = transform_translate(t, minus);
  const Support& s0 = m.support();
  const Support& s1 = back.support();
  REQUIRE(s0.size() == s1.size());
  // Compare as maps keyed by tuple.
  auto key = [&](const Support& s, std::size_t e) {
    const std::int64_t* t2 = s.tuple(e);
    return t2[0] * 25 + t2[1] * 5 + t2[2];
  };
  std::map<std::int64_t, cplx> m0, m1;
  for (std::size_t e = 0; e < s0.size(); ++e) m0[key(s0, e)] = s0.values[e];
  for (std::size_t e = 0; e < s1.size(); ++e) m1[key(s1, e)] = s1.values[e];
  CHECK(m0 == m1);

  std::vector<std::int64_t> off = {1, 1, 1};  // 3 != 0 mod 5
  CHECK_THROWS_AS((void)transform_translate(m, off), std::invalid_argument);

  // cs_upper and k2 exactly invariant under translation.
  for (int j = 1; j <= 3; ++j) CHECK(cs_upper(t, j) == cs_upper(m, j));
}

TEST_CASE("translation invariance of alt_max from translated seeds is bitwise") {
  GroupSpec c = GroupSpec::cycle(5);
  auto m = random_dense3(c, 9);
  std::vector<std::int64_t> xi0 = {1, 3, 1};
  auto mt = transform_translate(m, xi0);

  AltMaxConfig cfg;
  cfg.restarts = 1;
  cfg.iterations = 25;
  cfg.tolerance = 1e-12;
  cfg.seed = 6;

  // Seed witness for m, and the same witness translated for m(.+xi0):
  // f'_j(x) = f_j(x + xi0_j).
  std::vector<GridFunction> seed;
  for (int j = 0; j < 3; ++j) {
    GridFunction f(c);
    f.values = random_values(5, 40 + static_cast<std::uint64_t>(j));
    seed.push_back(f);
  }
  std::vector<GridFunction> seed_t;
  for (int j = 0; j < 3; ++j) {
    GridFunction f(c);
    for (std::int64_t x = 0; x < 5; ++x) {
      auto src = c.add(x, xi0[static_cast<std::size_t>(j)]);
      f.values[static_cast<std::size_t>(x)] = seed[static_cast<std::size_t>(j)]
                                                  .values[static_cast<std::size_t>(*src)];
    }
    seed_t.push_back(f);
  }
  auto a = alt_max(m, cfg, {seed});
  auto b = alt_max(mt, cfg, {seed_t});
  CHECK(a.lower == b.lower);
}

TEST_CASE("permutation moves sections exactly") {
  GroupSpec c = GroupSpec::cycle(6);
  auto m = random_dense3(c, 12);
  std::vector<int> sigma = {2, 0, 1};
  auto ms = transform_permute(m, sigma);
  // cs_upper(m o sigma, sigma(j)) == cs_upper(m, j); sigma is 0-based here.
  for (int j = 0; j < 3; ++j)
    CHECK(cs_upper(ms, sigma[static_cast<std::size_t>(j)] + 1) == cs_upper(m, j + 1));
}

TEST_CASE("cycle dilation is an exact relabeling") {
  GroupSpec c = GroupSpec::cycle(8);
  auto m = random_dense3(c, 15);
  auto d = transform_dilate(m, Rat(3));  // 3 coprime to 8
  for (int j = 1; j <= 3; ++j) CHECK(cs_upper(d, j) == doctest::Approx(cs_upper(m, j)).epsilon(1e-15));
  CHECK_THROWS_AS((void)transform_dilate(m, Rat(2)), std::invalid_argument);
}

TEST_CASE("real-grid dilation scales cs_upper by det^(1/2) exactly") {
  GroupSpec r = GroupSpec::real_grid(8, Rat(1, 4));
  std::vector<std::vector<cplx>> factors(3, std::vector<cplx>(8, 1.0));
  factors[0] = random_values(8, 61);
  auto m = MultiplierK::from_factors(r, factors);
  auto d = transform_dilate(m, Rat(2));
  CHECK(d.group().spacing() == Rat(1, 2));
  for (int j = 1; j <= 3; ++j) {
    SectionSq a = cs_upper_sq(m, j), b = cs_upper_sq(d, j);
    // Identical section sums, exactly doubled rational weight: the cs_upper
    // ratio is exactly 2^(1/2) = |det|^(k/2-1).
    CHECK(b.max_section == a.max_section);
    CHECK(b.weight == 2 * a.weight);
  }
}

TEST_CASE("tensor product: cs_upper multiplicative, alt_max supermultiplicative") {
  GroupSpec c = GroupSpec::cycle(4);
  auto m1 = MultiplierK::from_factors(
      c, {random_values(4, 71), random_values(4, 72), std::vector<cplx>(4, 1.0)});
  auto m2 = MultiplierK::from_factors(
      c, {random_values(4, 73), std::vector<cplx>(4, 1.0), random_values(4, 74)});
  auto t = tensor_product(m1, m2);
  CHECK(t.group().dim() == 2);
  for (int j = 1; j <= 3; ++j)
    CHECK(cs_upper(t, j) == doctest::Approx(cs_upper(m1, j) * cs_upper(m2, j)).epsilon(1e-12));

  AltMaxConfig cfg;
  cfg.restarts = 4;
  cfg.iterations = 60;
  cfg.tolerance = 1e-9;
  cfg.seed = 2;
  auto e1 = alt_max(m1, cfg);
  auto e2 = alt_max(m2, cfg);
  auto et = alt_max(t, cfg);
  // Tensored witnesses give at least the product.
  CHECK(et.lower >= e1.lower * e2.lower * (1 - 1e-6));

  auto trivial = MultiplierK::constant(3, GroupSpec::cycle(1), 1.0);
  auto same = tensor_product(m1, trivial);
  for (int j = 1; j <= 3; ++j)
    CHECK(cs_upper(same, j) == doctest::Approx(cs_upper(m1, j)).epsilon(1e-12));
}

TEST_CASE("tt_star consistency for one-variable multipliers") {
  GroupSpec c = GroupSpec::cycle(3);
  // m(x) real; as a [2;Z] multiplier its norm is max|m|; tt_star gives a
  // [2;Z] multiplier with norm max|m|^2 = (the [1+1;Z] norm squared).
  std::vector<cplx> vals = {0.5, -2.0, 1.0};
  auto m1 = MultiplierK::from_rule(
      1, c, [vals](const std::int64_t* pts) { return vals[static_cast<std::size_t>(pts[0])]; },
      true, true);
  auto tt = tt_star(m1);
  CHECK(tt.k() == 2);
  CHECK(k2_exact(tt) == doctest::Approx(4.0));  // (max |m|)^2

  auto complex_m = MultiplierK::from_rule(
      1, c, [](const std::int64_t*) { return cplx(0, 1); }, true, false);
  CHECK_THROWS_AS((void)tt_star(complex_m), std::invalid_argument);
}

TEST_CASE("from_factors rejects k=1") {
  GroupSpec c = GroupSpec::cycle(3);
  CHECK_THROWS_AS((void)MultiplierK::from_factors(c, {std::vector<cplx>(3, 1.0)}),
                  std::invalid_argument);
}

TEST_CASE("schur_sum_bound") {
  GroupSpec c = GroupSpec::cycle(8);
  auto indicator_part = [&](std::vector<int> a_set, std::vector<int> b_set) {
    std::vector<cplx> a(8, 0.0), b(8, 0.0), ones(8, 1.0);
    std::vector<std::int64_t> s1, s2;
    for (int i : a_set) {
      a[static_cast<std::size_t>(i)] = 1.0;
      s1.push_back(i);
    }
    for (int i : b_set) {
      b[static_cast<std::size_t>(i)] = 1.0;
      s2.push_back(i);
    }
    return SchurPart{MultiplierK::from_factors(c, {a, b, ones}), s1, s2};
  };

  SUBCASE("single part reduces to cs_upper") {
    std::vector<SchurPart> parts = {indicator_part({0, 1}, {2, 3})};
    double bound = schur_sum_bound(parts, 1, 2, 1, 1);
    CHECK(bound == doctest::Approx(cs_upper_best(parts[0].m)));
  }
  SUBCASE("disjoint parts: max of the two") {
    std::vector<SchurPart> parts = {indicator_part({0, 1}, {0, 1}),
                                    indicator_part({4, 5}, {4, 5})};
    double bound = schur_sum_bound(parts, 1, 2, 1, 1);
    double want = std::max(cs_upper_best(parts[0].m), cs_upper_best(parts[1].m));
    CHECK(bound == doctest::Approx(want));

    AltMaxConfig cfg;
    cfg.restarts = 4;
    cfg.iterations = 60;
    cfg.tolerance = 1e-9;
    cfg.seed = 13;
    auto sum = schur_sum(parts);
    CHECK(alt_max(sum, cfg).lower <= bound * (1 + 1e-6));
  }
  SUBCASE("violated overlap declaration") {
    std::vector<SchurPart> parts = {indicator_part({0, 1}, {0, 1}),
                                    indicator_part({1, 2}, {4, 5})};
    CHECK_THROWS_AS((void)schur_sum_bound(parts, 1, 2, 1, 1), std::invalid_argument);
  }
  SUBCASE("false support containment") {
    auto part = indicator_part({0, 1}, {2, 3});
    part.supp1 = {0};  // actual support includes 1
    CHECK_THROWS_AS((void)schur_sum_bound({part}, 1, 2, 1, 1), std::invalid_argument);
  }
}

TEST_CASE("conjugate_reflect") {
  GroupSpec c = GroupSpec::cycle(8);
  auto m = MultiplierK::from_factors(
      c, {random_values(8, 91), random_values(8, 92), std::vector<cplx>(8, 1.0)});

  SUBCASE("reflecting every factor reflects the sections exactly") {
    auto cr = transform_conjugate_reflect(m, {0, 1, 2});
    for (int j = 1; j <= 3; ++j)
      CHECK(cs_upper(cr, j) == doctest::Approx(cs_upper(m, j)).epsilon(1e-14));
  }
  SUBCASE("single-factor conjugation preserves the norm estimate") {
    auto cr = transform_conjugate_reflect(m, {0});
    AltMaxConfig cfg;
    cfg.restarts = 8;
    cfg.iterations = 100;
    cfg.tolerance = 1e-10;
    cfg.seed = 19;
    double a = alt_max(m, cfg).lower;
    double b = alt_max(cr, cfg).lower;
    CHECK(a == doctest::Approx(b).epsilon(0.02));
  }
  SUBCASE("needs a factored multiplier") {
    auto r = MultiplierK::from_rule(3, c, [](const std::int64_t*) { return cplx(1.0); });
    CHECK_THROWS_AS((void)transform_conjugate_reflect(r, {0}), std::invalid_argument);
  }
}
