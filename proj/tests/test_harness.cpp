#include "doctest.h"

#include "xsb/harness.hpp"

using namespace xsb;

TEST_CASE("grid verification rows satisfy the ordering invariants") {
  GroupSpec grid = GroupSpec::real_grid(64, Rat(1, 4), 1, TimeAxis{64, Rat(1, 2)});
  std::vector<BlockParams> tuples = {
      BlockParams::from_values(1, 1, 0.25, 2, 1, 1, 0.5),
      BlockParams::from_values(1, 1, 0.5, 2, 1, 1, 1),
      BlockParams::from_values(1, 1, 1, 1, 1, 1, 16),  // vanishing tuple
  };
  AltMaxConfig cfg;
  cfg.restarts = 3;
  cfg.iterations = 40;
  cfg.tolerance = 1e-8;
  cfg.seed = 11;
  auto rows = run_grid_verification(Family::kdv_r, tuples, grid, cfg);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    if (r.skipped) continue;
    CHECK(r.extremizer_lower <= r.altmax_lower * (1 + 1e-9));
    CHECK(r.altmax_lower <= r.cs_upper * (1 + 1e-9));
  }
  CHECK(rows[2].formula_bound == 0.0);
  CHECK(rows[2].altmax_lower == 0.0);

  SUBCASE("repeat runs are bitwise identical") {
    auto again = run_grid_verification(Family::kdv_r, tuples, grid, cfg);
    CHECK(rows_json(again, Family::kdv_r, grid, cfg) ==
          rows_json(rows, Family::kdv_r, grid, cfg));
  }
  SUBCASE("csv has the fixed nine columns") {
    std::string csv = rows_csv(rows);
    auto header_end = csv.find('\n');
    std::string header = csv.substr(0, header_end);
    CHECK(std::count(header.begin(), header.end(), ',') == 8);
    std::string empty_csv = rows_csv({});
    CHECK(empty_csv == header + "\n");
  }
}

TEST_CASE("property suite passes and is deterministic") {
  auto a = run_property_suite(42, 24);
  for (const auto& c : a.checks) {
    INFO(c.name, " failures: ", c.failures.empty() ? "" : c.failures.front());
    CHECK(c.fail == 0);
  }
  CHECK(a.all_passed());
  auto b = run_property_suite(42, 24);
  CHECK(a.json() == b.json());
  CHECK_THROWS_AS((void)run_property_suite(1, 0), std::invalid_argument);
}
