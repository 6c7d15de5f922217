#include "doctest.h"

#include <cmath>

#include "xsb/gamma.hpp"
#include "xsb/io.hpp"
#include "xsb/rng.hpp"

using namespace xsb;

namespace {

// Independent direct-loop oracle for Gamma_3 integration: plain nested loops
// and naive accumulation, no shared code with the library path.
cplx direct_loop_gamma3(const MultiplierK& m, const std::vector<GridFunction>& fs) {
  const GroupSpec& g = m.group();
  cplx acc{};
  std::int64_t pts[3];
  for (std::int64_t i = 0; i < g.total_points(); ++i)
    for (std::int64_t j = 0; j < g.total_points(); ++j) {
      auto t = g.forced_third(i, j);
      if (!t) continue;
      pts[0] = i;
      pts[1] = j;
      pts[2] = *t;
      acc += m.eval(pts) * fs[0].values[static_cast<std::size_t>(i)] *
             fs[1].values[static_cast<std::size_t>(j)] *
             fs[2].values[static_cast<std::size_t>(*t)];
    }
  double w = g.point_measure_d();
  return acc * (w * w);
}

GridFunction random_function(const GroupSpec& g, std::uint64_t seed, std::uint64_t stream) {
  GridFunction f(g);
  CounterRng rng{seed, stream};
  for (std::int64_t i = 0; i < g.total_points(); ++i)
    f.values[static_cast<std::size_t>(i)] = rng.gaussian(static_cast<std::uint64_t>(i));
  return f;
}

MultiplierK random_rule3(const GroupSpec& g, std::uint64_t seed) {
  auto vals = std::make_shared<std::vector<cplx>>(
      static_cast<std::size_t>(g.total_points() * g.total_points()));
  CounterRng rng{seed, 777};
  for (std::size_t i = 0; i < vals->size(); ++i)
    (*vals)[i] = rng.gaussian(static_cast<std::uint64_t>(i));
  std::int64_t total = g.total_points();
  return MultiplierK::dense3(g, std::move(*vals));
}

}  // namespace

TEST_CASE("group arithmetic: cycle wraps, real grid truncates") {
  GroupSpec c = GroupSpec::cycle(3);
  CHECK(c.add(2, 2) == 1);
  CHECK(c.neg(1) == 2);
  CHECK(c.total_points() == 3);

  GroupSpec r = GroupSpec::real_grid(4, Rat(1, 4));
  // offsets -2,-1,0,1 at indices 0..3
  CHECK(r.add(0, 0) == std::nullopt);  // -2 + -2 leaves the box
  CHECK(r.add(3, 3) == std::nullopt);  // 1 + 1 = 2 is outside [-2, 2)
  CHECK(r.add(1, 3) == 2);             // -1 + 1 = 0
  CHECK(r.neg(0) == std::nullopt);     // -(-2) = 2 out of range
  CHECK(r.neg(1) == 3);
  // Forced coordinate checks only the final value, not intermediate sums.
  CHECK(r.forced_third(3, 3) == 0);  // -(1+1) = -2 is in the box
}

TEST_CASE("l2 norms of indicators and constants") {
  GroupSpec c = GroupSpec::cycle(3);
  auto ind = GridFunction::indicator(c, {0});
  CHECK(l2_norm(ind) == doctest::Approx(1.0).epsilon(1e-15));
  auto ones = GridFunction::constant(c, 1.0);
  CHECK(l2_norm(ones) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));

  GroupSpec r = GroupSpec::real_grid(4, Rat(1, 4));
  auto ones_r = GridFunction::constant(r, 1.0);
  CHECK(l2_norm(ones_r) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("gamma_integrate on cycle(3): point mass and constants") {
  GroupSpec c = GroupSpec::cycle(3);
  auto one = MultiplierK::constant(3, c, 1.0);
  std::vector<GridFunction> delta(3, GridFunction::indicator(c, {0}));
  CHECK(gamma_integrate(one, delta).real() == doctest::Approx(1.0));
  std::vector<GridFunction> ones(3, GridFunction::constant(c, 1.0));
  CHECK(gamma_integrate(one, ones).real() == doctest::Approx(9.0));
}

TEST_CASE("gamma_integrate matches the direct-loop oracle on random data") {
  GroupSpec c = GroupSpec::cycle(5);
  auto m = random_rule3(c, 11);
  std::vector<GridFunction> fs;
  for (int j = 0; j < 3; ++j) fs.push_back(random_function(c, 22, static_cast<std::uint64_t>(j)));
  cplx got = gamma_integrate(m, fs);
  cplx want = direct_loop_gamma3(m, fs);
  CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
}

TEST_CASE("measure symmetry and multilinearity") {
  GroupSpec c = GroupSpec::cycle(7);
  auto m = random_rule3(c, 5);
  std::vector<GridFunction> fs;
  for (int j = 0; j < 3; ++j) fs.push_back(random_function(c, 9, static_cast<std::uint64_t>(j)));

  // Permutation sigma = (1 2 0): m'(x) = m(x_s1, x_s2, x_s0) with matching
  // function reordering fs'[j] = fs[sigma^{-1}(j)].
  std::vector<int> sigma = {1, 2, 0};
  std::vector<int> sigma_inv(3);
  for (int j = 0; j < 3; ++j) sigma_inv[static_cast<std::size_t>(sigma[static_cast<std::size_t>(j)])] = j;
  auto msig = MultiplierK::from_rule(3, c, [m, sigma](const std::int64_t* pts) {
    std::int64_t q[3] = {pts[sigma[0]], pts[sigma[1]], pts[sigma[2]]};
    return m.eval(q);
  });
  std::vector<GridFunction> fsig;
  for (int j = 0; j < 3; ++j) fsig.push_back(fs[static_cast<std::size_t>(sigma_inv[static_cast<std::size_t>(j)])]);
  cplx a = gamma_integrate(m, fs);
  cplx b = gamma_integrate(msig, fsig);
  CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));

  // Linearity in f_1.
  auto g1 = random_function(c, 31, 0);
  auto fs2 = fs;
  fs2[0] = g1;
  auto fs3 = fs;
  for (std::int64_t i = 0; i < c.total_points(); ++i)
    fs3[0].values[static_cast<std::size_t>(i)] =
        2.0 * fs[0].values[static_cast<std::size_t>(i)] + g1.values[static_cast<std::size_t>(i)];
  cplx lhs = gamma_integrate(m, fs3);
  cplx rhs = 2.0 * gamma_integrate(m, fs) + gamma_integrate(m, fs2);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + 1));
}

TEST_CASE("fast path equals slow path") {
  SUBCASE("constant on cycle(3)") {
    GroupSpec c = GroupSpec::cycle(3);
    auto one = MultiplierK::constant(3, c, 1.0);
    std::vector<GridFunction> ones(3, GridFunction::constant(c, 1.0));
    CHECK(gamma_integrate_fast(one, ones).real() == doctest::Approx(9.0));
  }
  SUBCASE("random separable on cycle(64)") {
    GroupSpec c = GroupSpec::cycle(64);
    CounterRng rng{404, 0};
    std::vector<std::vector<cplx>> factors(3, std::vector<cplx>(64));
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 64; ++i)
        factors[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
            rng.gaussian(static_cast<std::uint64_t>(j * 64 + i));
    auto m = MultiplierK::from_factors(c, factors);
    std::vector<GridFunction> fs;
    for (int j = 0; j < 3; ++j) fs.push_back(random_function(c, 405, static_cast<std::uint64_t>(j)));
    cplx fast = gamma_integrate_fast(m, fs);
    cplx slow = gamma_integrate(m, fs);
    CHECK(std::abs(fast - slow) <= 1e-9 * std::abs(slow));
  }
  SUBCASE("zero function annihilates") {
    GroupSpec c = GroupSpec::cycle(8);
    auto one = MultiplierK::constant(3, c, 1.0);
    std::vector<GridFunction> fs = {GridFunction::constant(c, 1.0), GridFunction(c),
                                    GridFunction(c)};
    CHECK(std::abs(gamma_integrate_fast(one, fs)) == 0.0);
  }
  SUBCASE("separable on a truncated real grid") {
    GroupSpec r = GroupSpec::real_grid(8, Rat(1, 2));
    CounterRng rng{77, 3};
    std::vector<std::vector<cplx>> factors(3, std::vector<cplx>(8));
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 8; ++i)
        factors[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
            rng.gaussian(static_cast<std::uint64_t>(j * 8 + i));
    auto m = MultiplierK::from_factors(r, factors);
    std::vector<GridFunction> fs;
    for (int j = 0; j < 3; ++j) fs.push_back(random_function(r, 78, static_cast<std::uint64_t>(j)));
    cplx fast = gamma_integrate_fast(m, fs);
    cplx slow = gamma_integrate(m, fs);
    CHECK(std::abs(fast - slow) <= 1e-9 * std::abs(slow));
  }
}

TEST_CASE("serial and parallel gamma kernels agree bitwise") {
  GroupSpec c = GroupSpec::cycle(16);
  auto m = random_rule3(c, 8);
  std::vector<GridFunction> fs;
  for (int j = 0; j < 3; ++j) fs.push_back(random_function(c, 13, static_cast<std::uint64_t>(j)));
  cplx par = gamma_integrate(m, fs);
  cplx ser = gamma_integrate_serial(m, fs);
  CHECK(par.real() == ser.real());
  CHECK(par.imag() == ser.imag());
}

TEST_CASE("XSBK1 round trip") {
  GroupSpec r = GroupSpec::real_grid(8, Rat(1, 4), 1, TimeAxis{4, Rat(1, 2)});
  auto f = random_function(r, 55, 0);
  write_grid_function("/tmp/xsb_f.bin", f);
  auto back = read_grid_function("/tmp/xsb_f.bin");
  REQUIRE(back.group == r);
  for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(back.values[i] == f.values[i]);

  GroupSpec c = GroupSpec::cycle(6);
  auto m = random_rule3(c, 56);
  write_dense_multiplier("/tmp/xsb_m.bin", m);
  auto mb = read_dense_multiplier("/tmp/xsb_m.bin");
  std::vector<GridFunction> fs;
  for (int j = 0; j < 3; ++j) fs.push_back(random_function(c, 57, static_cast<std::uint64_t>(j)));
  cplx a = gamma_integrate(m, fs);
  cplx b = gamma_integrate(mb, fs);
  CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
}

TEST_CASE("group mismatch is rejected") {
  GroupSpec c3 = GroupSpec::cycle(3), c5 = GroupSpec::cycle(5);
  auto m = MultiplierK::constant(3, c3, 1.0);
  std::vector<GridFunction> fs(3, GridFunction::constant(c5, 1.0));
  CHECK_THROWS_AS((void)gamma_integrate(m, fs), std::invalid_argument);
  std::vector<GridFunction> two(2, GridFunction::constant(c3, 1.0));
  CHECK_THROWS_AS((void)gamma_integrate(m, two), std::invalid_argument);
}
