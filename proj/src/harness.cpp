#include "xsb/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace xsb {

std::vector<VerifyRow> run_grid_verification(Family f,
                                             const std::vector<BlockParams>& tuples,
                                             const GroupSpec& grid,
                                             const AltMaxConfig& cfg) {
  std::vector<VerifyRow> rows(tuples.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel_enabled() && tuples.size() > 1)
#endif
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    VerifyRow row;
    row.params = tuples[i];
    try {
      BlockBound bound = block_bound(f, tuples[i]);
      row.formula_bound = bound.value;
      row.case_label = bound.case_label;
      MultiplierK block = block_multiplier(tuples[i], f, grid);
      if (bound.vanishes || block.support().size() == 0) {
        row.cs_upper = block.support().size() ? cs_upper_best(block) : 0.0;
        row.altmax_lower = 0.0;
        row.extremizer_lower = 0.0;
        if (!bound.vanishes && block.support().size() == 0) {
          row.skipped = true;
          row.skip_reason = "empty support at this resolution";
        }
      } else {
        row.cs_upper = cs_upper_best(block);
        std::vector<std::vector<GridFunction>> seeds;
        try {
          auto fs = block_extremizer(tuples[i], f, bound.case_label, grid);
          bool nonzero = true;
          for (const auto& g : fs) nonzero = nonzero && !g.is_zero();
          if (nonzero) {
            row.extremizer_lower = rayleigh(block, fs);
            seeds.push_back(std::move(fs));
          }
        } catch (const std::exception&) {
          // No special construction for this case: fall back to the shell
          // indicators as the seeded candidate.
        }
        if (seeds.empty()) {
          std::vector<GridFunction> fs;
          for (int j = 0; j < 3; ++j)
            fs.push_back(GridFunction::indicator(grid, variable_shell(tuples[i], f, j, grid)));
          bool nonzero = true;
          for (const auto& g : fs) nonzero = nonzero && !g.is_zero();
          if (nonzero) {
            row.extremizer_lower = rayleigh(block, fs);
            seeds.push_back(std::move(fs));
          }
        }
        row.altmax_lower = alt_max(block, cfg, seeds).lower;
        if (row.formula_bound > 0) {
          row.ratio_upper = row.altmax_lower / row.formula_bound;
          row.ratio_lower = row.extremizer_lower / row.formula_bound;
        }
      }
    } catch (const std::exception& e) {
      row.skipped = true;
      row.skip_reason = e.what();
    }
    row.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    rows[i] = std::move(row);
  }
  return rows;
}

namespace {

std::string params_str(const BlockParams& p) {
  std::ostringstream os;
  os << "N=" << exp2i(p.n[0]) << "/" << exp2i(p.n[1]) << "/" << exp2i(p.n[2])
     << ";L=" << exp2i(p.l[0]) << "/" << exp2i(p.l[1]) << "/" << exp2i(p.l[2])
     << ";H=" << exp2i(p.h) << ";d=" << p.dim;
  return os.str();
}

}  // namespace

std::string rows_json(const std::vector<VerifyRow>& rows, Family f,
                      const GroupSpec& grid, const AltMaxConfig& cfg, double c_up,
                      double c_low, bool include_runtime) {
  std::ostringstream os;
  os << "{\"family\":\"" << family_name(f) << "\",\"grid\":\"" << grid.describe()
     << "\",\"seed\":" << cfg.seed << ",\"restarts\":" << cfg.restarts
     << ",\"iterations\":" << cfg.iterations << ",\"c_up\":" << c_up
     << ",\"c_low\":" << c_low << ",\"rows\":[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i) os << ",";
    os << "{\"params\":\"" << params_str(r.params) << "\",\"formula_bound\":"
       << r.formula_bound << ",\"cs_upper\":" << r.cs_upper
       << ",\"altmax_lower\":" << r.altmax_lower
       << ",\"extremizer_lower\":" << r.extremizer_lower
       << ",\"ratio_upper\":" << r.ratio_upper << ",\"ratio_lower\":" << r.ratio_lower
       << ",\"case_label\":\"" << r.case_label << "\"";
    if (include_runtime) os << ",\"runtime_ms\":" << r.runtime_ms;
    if (r.skipped) os << ",\"skipped\":\"" << r.skip_reason << "\"";
    os << "}";
  }
  os << "]}";
  return os.str();
}

std::string rows_csv(const std::vector<VerifyRow>& rows) {
  std::ostringstream os;
  os << "params,formula_bound,cs_upper,altmax_lower,extremizer_lower,ratio_upper,"
        "ratio_lower,case_label,runtime_ms\n";
  for (const auto& r : rows) {
    os << params_str(r.params) << "," << r.formula_bound << "," << r.cs_upper << ","
       << r.altmax_lower << "," << r.extremizer_lower << "," << r.ratio_upper << ","
       << r.ratio_lower << "," << r.case_label << "," << r.runtime_ms << "\n";
  }
  return os.str();
}

void emit_report(const std::string& content, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << content;
}

double fitted_slope(const std::vector<long>& exponents, const std::vector<double>& values) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (!(values[i] > 0)) continue;
    double x = static_cast<double>(exponents[i]);
    double y = std::log2(values[i]);
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string SuiteResult::json() const {
  std::ostringstream os;
  os << "{\"seed\":" << seed << ",\"trials\":" << trials << ",\"all_passed\":"
     << (all_passed() ? "true" : "false") << ",\"checks\":[";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (i) os << ",";
    os << "{\"name\":\"" << checks[i].name << "\",\"pass\":" << checks[i].pass
       << ",\"fail\":" << checks[i].fail << ",\"failures\":[";
    for (std::size_t j = 0; j < checks[i].failures.size(); ++j) {
      if (j) os << ",";
      os << "\"" << checks[i].failures[j] << "\"";
    }
    os << "]}";
  }
  os << "]}";
  return os.str();
}

}  // namespace xsb
