#include "doctest.h"

#include <cmath>

#include "xsb/norm.hpp"
#include "xsb/rng.hpp"

using namespace xsb;

namespace {

MultiplierK random_k2(const GroupSpec& g, std::uint64_t seed) {
  auto vals = std::make_shared<std::vector<cplx>>(static_cast<std::size_t>(g.total_points()));
  CounterRng rng{seed, 2};
  for (std::size_t i = 0; i < vals->size(); ++i)
    (*vals)[i] = rng.gaussian(static_cast<std::uint64_t>(i));
  return MultiplierK::from_rule(2, g, [vals](const std::int64_t* pts) {
    return (*vals)[static_cast<std::size_t>(pts[0])];
  });
}

std::vector<cplx> random_values(std::int64_t n, std::uint64_t seed, std::uint64_t stream) {
  std::vector<cplx> v(static_cast<std::size_t>(n));
  CounterRng rng{seed, stream};
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.gaussian(static_cast<std::uint64_t>(i));
  return v;
}

}  // namespace

TEST_CASE("rayleigh quotient basics") {
  GroupSpec c = GroupSpec::cycle(3);
  auto one = MultiplierK::constant(3, c, 1.0);
  std::vector<GridFunction> delta(3, GridFunction::indicator(c, {0}));
  CHECK(rayleigh(one, delta) == doctest::Approx(1.0));

  std::vector<GridFunction> ones(3, GridFunction::constant(c, 1.0));
  CHECK(rayleigh(one, ones) == doctest::Approx(std::sqrt(3.0)));

  // Scale invariance.
  std::vector<GridFunction> scaled = ones;
  for (auto& f : scaled)
    for (auto& v : f.values) v *= 3.5;
  CHECK(rayleigh(one, scaled) == doctest::Approx(rayleigh(one, ones)));

  std::vector<GridFunction> zero = ones;
  zero[1] = GridFunction(c);
  CHECK_THROWS_AS((void)rayleigh(one, zero), std::invalid_argument);
}

TEST_CASE("k2_exact equals the sup and alt_max attains it") {
  GroupSpec c = GroupSpec::cycle(16);
  auto con = MultiplierK::constant(2, c, cplx(0.0, -2.5));
  CHECK(k2_exact(con) == doctest::Approx(2.5));
  auto zero = MultiplierK::constant(2, c, 0.0);
  CHECK(k2_exact(zero) == 0.0);
  auto m3 = MultiplierK::constant(3, c, 1.0);
  CHECK_THROWS_AS((void)k2_exact(m3), std::invalid_argument);

  auto m = random_k2(c, 99);
  AltMaxConfig cfg;
  cfg.restarts = 4;
  cfg.iterations = 400;
  cfg.tolerance = 1e-12;
  cfg.seed = 1;
  auto est = alt_max(m, cfg);
  CHECK(est.lower == doctest::Approx(k2_exact(m)).epsilon(1e-6));
}

TEST_CASE("constant multiplier on cycle(3) has [3;Z] norm sqrt(3)") {
  GroupSpec c = GroupSpec::cycle(3);
  auto one = MultiplierK::constant(3, c, 1.0);

  // Character witness e^{2 pi i x/3}/sqrt(3) attains sqrt(3).
  GridFunction chi(c);
  for (int x = 0; x < 3; ++x)
    chi.values[static_cast<std::size_t>(x)] =
        std::polar(1.0, 2.0 * M_PI * x / 3.0) / std::sqrt(3.0);
  std::vector<GridFunction> witness(3, chi);
  CHECK(rayleigh(one, witness) == doctest::Approx(std::sqrt(3.0)));

  AltMaxConfig cfg;
  cfg.restarts = 6;
  cfg.iterations = 200;
  cfg.tolerance = 1e-10;
  cfg.seed = 7;
  auto est = alt_max(one, cfg, {witness});
  CHECK(est.lower == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
  // cs_upper certifies the same value from above.
  CHECK(cs_upper(one, 1) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("tensored box: one-variable multiplier norm is its L2 norm") {
  GroupSpec c = GroupSpec::cycle(8);
  auto vals = random_values(8, 31, 0);
  std::vector<std::vector<cplx>> factors = {
      vals, std::vector<cplx>(8, 1.0), std::vector<cplx>(8, 1.0)};
  auto m = MultiplierK::from_factors(c, factors);

  double l2 = 0.0;
  for (const auto& v : vals) l2 += std::norm(v);
  l2 = std::sqrt(l2);

  CHECK(cs_upper(m, 2) == doctest::Approx(l2).epsilon(1e-12));

  AltMaxConfig cfg;
  cfg.restarts = 8;
  cfg.iterations = 120;
  cfg.tolerance = 1e-10;
  cfg.seed = 3;
  auto est = alt_max(m, cfg);
  CHECK(est.lower >= 0.99 * l2);
  CHECK(est.lower <= l2 * (1 + 1e-9));
}

TEST_CASE("characteristic function estimate on cycle(8)") {
  GroupSpec c = GroupSpec::cycle(8);
  std::vector<cplx> a(8, 0.0), b(8, 0.0), ones(8, 1.0);
  a[0] = a[1] = 1.0;  // A = {0,1}
  b[0] = b[1] = 1.0;  // B = {0,1}
  auto m = MultiplierK::from_factors(c, {a, b, ones});
  // max_xi |A  intersect  (xi - B)| = 2, so the bound is sqrt(2).
  CHECK(cs_upper(m, 3) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("alt_max invariants: witness reproduces value, sandwich, zero flag") {
  GroupSpec c = GroupSpec::cycle(6);
  auto table = random_values(36, 17, 5);
  auto m = MultiplierK::dense3(c, table);
  AltMaxConfig cfg;
  cfg.restarts = 6;
  cfg.iterations = 80;
  cfg.tolerance = 1e-10;
  cfg.seed = 5;
  auto est = alt_max(m, cfg);
  REQUIRE(est.witness.has_value());
  double rq = rayleigh(m, *est.witness);
  CHECK(rq == doctest::Approx(est.lower).epsilon(1e-9));
  CHECK(est.lower <= cs_upper_best(m) * (1 + 1e-9));

  auto zero = MultiplierK::constant(3, c, 0.0);
  auto zest = alt_max(zero, cfg);
  CHECK(zest.lower == 0.0);
  CHECK(zest.zero_multiplier);
}

TEST_CASE("alt_max restart determinism: serial equals parallel") {
  GroupSpec c = GroupSpec::cycle(6);
  auto m = MultiplierK::dense3(c, random_values(36, 21, 0));
  AltMaxConfig cfg;
  cfg.restarts = 5;
  cfg.iterations = 40;
  cfg.tolerance = 1e-10;
  cfg.seed = 11;
  auto a = alt_max(m, cfg);
  bool saved = parallel_enabled();
  parallel_enabled() = false;
  auto b = alt_max(m, cfg);
  parallel_enabled() = saved;
  CHECK(a.lower == b.lower);
}
