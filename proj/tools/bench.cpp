// Benchmark comparing the OpenMP kernels against the serial reference path.
// Both paths produce bitwise-identical results; this target measures the
// speedup on representative workloads.

#include <chrono>
#include <cstdio>

#include "xsb/block_grid.hpp"
#include "xsb/harness.hpp"
#include "xsb/rng.hpp"

using namespace xsb;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

struct Workload {
  const char* name;
  std::function<void()> run;
  int reps;
};

}  // namespace

int main() {
  GroupSpec cyc = GroupSpec::cycle(48);
  std::vector<cplx> table(static_cast<std::size_t>(48 * 48));
  CounterRng rng{7, 0};
  for (std::size_t i = 0; i < table.size(); ++i)
    table[i] = rng.gaussian(static_cast<std::uint64_t>(i));
  MultiplierK dense = MultiplierK::dense3(cyc, table);
  std::vector<GridFunction> fs;
  for (int j = 0; j < 3; ++j) {
    GridFunction f(cyc);
    CounterRng fr{8, static_cast<std::uint64_t>(j)};
    for (std::int64_t i = 0; i < 48; ++i)
      f.values[static_cast<std::size_t>(i)] = fr.gaussian(static_cast<std::uint64_t>(i));
    fs.push_back(std::move(f));
  }

  GroupSpec kdv_grid = GroupSpec::real_grid(64, Rat(1, 4), 1, TimeAxis{64, Rat(1, 2)});
  BlockParams kdv_p = BlockParams::from_values(1, 1, 2, 1, 2, 8, 2);
  AltMaxConfig cfg;
  cfg.restarts = 6;
  cfg.iterations = 40;
  cfg.tolerance = 1e-9;
  cfg.seed = 3;

  std::vector<Workload> workloads = {
      {"gamma_integrate cycle(48)", [&] { (void)gamma_integrate(dense, fs); }, 5},
      {"block_multiplier kdv 64x64",
       [&] { (void)block_multiplier(kdv_p, Family::kdv_r, kdv_grid); }, 5},
      {"alt_max kdv block",
       [&] {
         auto m = block_multiplier(kdv_p, Family::kdv_r, kdv_grid);
         (void)alt_max(m, cfg);
       },
       2},
      {"property suite (trials=16)", [&] { (void)run_property_suite(1, 16); }, 1},
  };

  std::printf("%-32s %12s %12s %8s\n", "workload", "serial ms", "openmp ms", "speedup");
  for (auto& w : workloads) {
    parallel_enabled() = false;
    double serial = time_ms(w.run, w.reps);
    parallel_enabled() = true;
    double parallel = time_ms(w.run, w.reps);
    std::printf("%-32s %12.2f %12.2f %7.2fx\n", w.name, serial, parallel,
                serial / parallel);
  }
  std::printf("workers available: %d\n", worker_count());
  return 0;
}
