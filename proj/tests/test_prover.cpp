#include "doctest.h"

#include "xsb/dyadic_oracle.hpp"
#include "xsb/prover.hpp"
#include "xsb/rng.hpp"

using namespace xsb;

namespace {

// Analytic convergence condition for the low-frequency Sobolev estimate:
// pairwise sums >= 0, total >= d/2, at least one strict.
bool sobolev_condition(int d, const Rat& s1, const Rat& s2, const Rat& s3) {
  Rat p12 = s1 + s2, p23 = s2 + s3, p31 = s3 + s1;
  Rat pmin = std::min({p12, p23, p31});
  Rat total = s1 + s2 + s3;
  Rat half_d = Rat(d) / 2;
  if (pmin < 0 || total < half_d) return false;
  return pmin > 0 || total > half_d;
}

}  // namespace

TEST_CASE("apply_averaging checks the hypothesis exactly") {
  EstimateSpec spec;
  spec.b = {Rat(3, 4), Rat(1, 10), Rat(0)};
  CHECK_NOTHROW((void)apply_averaging(spec, 1, 2));

  spec.b = {Rat(1, 2), Rat(0), Rat(0)};
  CHECK_THROWS_WITH_AS((void)apply_averaging(spec, 1, 2),
                       doctest::Contains("b_j > 1/2"), std::invalid_argument);

  spec.b = {Rat(10), Rat(-1), Rat(0)};
  CHECK_NOTHROW((void)apply_averaging(spec, 1, 2));

  spec.b = {Rat(3, 4), Rat(1, 2), Rat(0)};
  CHECK_THROWS_WITH_AS((void)apply_averaging(spec, 1, 2),
                       doctest::Contains("1/2 + b_partner"), std::invalid_argument);
}

TEST_CASE("untempered modulation sums diverge") {
  EstimateSpec spec;
  spec.family = Family::kdv_r;
  spec.b = {Rat(0), Rat(0), Rat(0)};
  auto report = prove(spec);
  CHECK(report.overall == VerdictKind::Diverges);
}

TEST_CASE("sobolev builtin matches the analytic condition") {
  SUBCASE("named examples") {
    auto no = prove_builtin("sobolev", {{"d", "1"}, {"s1", "0"}, {"s2", "0"}, {"s3", "1/2"}});
    CHECK(no.overall != VerdictKind::Converges);
    auto yes = prove_builtin(
        "sobolev", {{"d", "1"}, {"s1", "1/4"}, {"s2", "1/4"}, {"s3", "1/4"}});
    CHECK(yes.overall == VerdictKind::Converges);
  }
  SUBCASE("random rational triples, d in {1,2,3}") {
    CounterRng rng{515, 0};
    std::uint64_t ctr = 0;
    for (int d = 1; d <= 3; ++d) {
      for (int t = 0; t < 25; ++t) {
        auto draw = [&]() {
          long num = static_cast<long>(rng.below(ctr++, 17)) - 4;  // -1 .. 3 in quarters
          return Rat(num, 4);
        };
        Rat s1 = draw(), s2 = draw(), s3 = draw();
        auto rep = prove_builtin("sobolev", {{"d", std::to_string(d)},
                                             {"s1", rat_str(s1)},
                                             {"s2", rat_str(s2)},
                                             {"s3", rat_str(s3)}});
        bool want = sobolev_condition(d, s1, s2, s3);
        INFO("d=", d, " s=(", rat_str(s1), ",", rat_str(s2), ",", rat_str(s3),
             ") -> ", verdict_name(rep.overall));
        CHECK((rep.overall == VerdictKind::Converges) == want);
      }
    }
  }
  SUBCASE("convergent cases pass the partial-sum oracle") {
    auto rep = prove_builtin(
        "sobolev", {{"d", "1"}, {"s1", "1/2"}, {"s2", "1/2"}, {"s3", "1/2"}});
    REQUIRE(rep.overall == VerdictKind::Converges);
    int checked = 0;
    for (const auto& br : rep.branches)
      for (const auto& rc : br.cases) {
        if (rc.verdict.empty_region) continue;
        std::string why;
        bool ok = oracle_matches(rc.problem, rc.verdict.kind, &why);
        INFO(rc.problem.label, ": ", why);
        CHECK(ok);
        ++checked;
      }
    CHECK(checked > 0);
  }
}

TEST_CASE("kdv builtins") {
  SUBCASE("kpv2 converges") {
    auto rep = prove_builtin("kpv2", {{"eps", "1/100"}});
    CHECK(rep.overall == VerdictKind::Converges);
    CHECK(rep.any_case);
  }
  SUBCASE("kpv3 certificate chains through kpv2") {
    auto rep = prove_builtin("kpv3", {{"eps", "1/100"}});
    CHECK(rep.overall == VerdictKind::Converges);
    REQUIRE(!rep.certificate_chain.empty());
    CHECK(rep.certificate_chain[0].find("kpv2") != std::string::npos);
    bool mentions_tt = false;
    for (const auto& r : rep.reductions_applied)
      mentions_tt = mentions_tt || r.find("TT*") != std::string::npos;
    CHECK(mentions_tt);
  }
  SUBCASE("borg_l4 converges") {
    auto rep = prove_builtin("borg_l4");
    CHECK(rep.overall == VerdictKind::Converges);
  }
  SUBCASE("kpv_t certificate chains through borg_l4") {
    auto rep = prove_builtin("kpv_t");
    CHECK(rep.overall == VerdictKind::Converges);
    REQUIRE(!rep.certificate_chain.empty());
    CHECK(rep.certificate_chain[0].find("borg_l4") != std::string::npos);
  }
  SUBCASE("reports are deterministic") {
    auto a = prove_builtin("kpv2", {{"eps", "1/100"}});
    auto b = prove_builtin("kpv2", {{"eps", "1/100"}});
    CHECK(report_json(a) == report_json(b));
  }
}

TEST_CASE("wave and schrodinger builtins") {
  SUBCASE("qij at s = d/2 - 3/4 + 10 eps") {
    auto rep = prove_builtin("qij", {{"d", "3"}, {"eps", "1/50"}});
    CHECK(rep.overall == VerdictKind::Converges);
  }
  SUBCASE("new_schro thresholds") {
    auto good = prove_builtin("new_schro", {{"d", "3"}, {"s", "-1/5"}, {"eps", "1/100"}});
    CHECK(good.overall == VerdictKind::Converges);
    auto bad = prove_builtin("new_schro", {{"d", "3"}, {"s", "-3/10"}, {"eps", "1/100"}});
    CHECK(bad.overall != VerdictKind::Converges);
  }
  SUBCASE("wave endpoint: log divergence eliminated by schur refinement") {
    auto naive = prove_builtin("wave_endpoint", {{"d", "3"}});
    CHECK(naive.overall == VerdictKind::LogDivergent);
    auto refined = prove_builtin("wave_endpoint", {{"d", "3"}, {"refine", "1"}});
    CHECK(refined.overall == VerdictKind::Converges);
    REQUIRE(refined.certified_exponent.has_value());
    CHECK(*refined.certified_exponent == Rat(1));  // (3d-5)/4 at d = 3
  }
}

TEST_CASE("verdict monotonicity in the modulation exponents") {
  CounterRng rng{919, 0};
  std::uint64_t ctr = 0;
  for (int t = 0; t < 6; ++t) {
    EstimateSpec spec;
    spec.family = Family::kdv_r;
    for (int j = 0; j < 3; ++j)
      spec.b[static_cast<std::size_t>(j)] =
          Rat(static_cast<long>(rng.below(ctr++, 5)), 8);
    spec.weight = {{"N1", Rat(static_cast<long>(rng.below(ctr++, 3)) - 1, 4), true}};
    auto before = prove(spec);
    EstimateSpec stronger = spec;
    stronger.b[static_cast<std::size_t>(rng.below(ctr++, 3))] += Rat(1, 4);
    auto after = prove(stronger);
    INFO("trial ", t, ": ", verdict_name(before.overall), " -> ",
         verdict_name(after.overall));
    CHECK(verdict_rank(after.overall) <= verdict_rank(before.overall));
  }
}

TEST_CASE("spec files round trip through the prover") {
  std::string text =
      "family kdv-r\n"
      "dim 1\n"
      "weight N2 1/2 bracket\n"
      "weight N1 -1/4 bracket\n"
      "b 51/100 49/100 0\n";
  EstimateSpec spec = spec_from_text(text);
  CHECK(spec.family == Family::kdv_r);
  CHECK(spec.weight.size() == 2);
  CHECK(spec.b[0] == Rat(51, 100));
  auto rep = prove(spec);
  CHECK(rep.overall == VerdictKind::Converges);

  CHECK_THROWS_AS((void)spec_from_text("bogus 1\n"), std::invalid_argument);
}
