#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "xsb/harness.hpp"
#include "xsb/io.hpp"
#include "xsb/prover.hpp"
#include "xsb/rng.hpp"

using namespace xsb;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

GroupSpec make_group(const std::string& kind, int dim, int points,
                     const std::string& spacing) {
  if (kind == "cycle") return GroupSpec(GroupKind::cycle, dim, points, 1);
  if (kind == "torus") return GroupSpec(GroupKind::torus_grid, dim, points, 1);
  if (kind == "real")
    return GroupSpec(GroupKind::real_grid, dim, points, parse_rat(spacing));
  throw CLI::ValidationError("--group must be cycle, torus, or real");
}

MultiplierK builtin_multiplier(const std::string& name, const GroupSpec& g, int k,
                               std::uint64_t seed) {
  if (name == "one") return MultiplierK::constant(k, g, 1.0);
  if (name == "gauss") {
    if (k != 3) throw CLI::ValidationError("gauss builtin needs k = 3");
    std::vector<cplx> table(
        static_cast<std::size_t>(g.total_points() * g.total_points()));
    CounterRng rng{seed, 4242};
    for (std::size_t i = 0; i < table.size(); ++i)
      table[i] = rng.gaussian(static_cast<std::uint64_t>(i));
    return MultiplierK::dense3(g, std::move(table));
  }
  throw CLI::ValidationError("unknown builtin multiplier " + name);
}

int run_norm(const std::string& group, int dim, int points, const std::string& spacing,
             int k, const std::string& method, const std::string& input,
             const std::string& builtin, const AltMaxConfig& cfg, bool as_json) {
  GroupSpec g = make_group(group, dim, points, spacing);
  MultiplierK m = input.empty() ? builtin_multiplier(builtin, g, k, cfg.seed)
                                : read_dense_multiplier(input);
  NormEstimate est;
  if (method == "altmax") {
    est = estimate_norm(m, cfg);
  } else if (method == "cs") {
    est.upper = cs_upper_best(m);
    est.upper_method = "cs_upper";
  } else if (method == "exact-k2") {
    double v = k2_exact(m);
    est.lower = est.upper = v;
    est.lower_method = est.upper_method = "k2_exact";
  } else {
    throw CLI::ValidationError("--method must be altmax, cs, or exact-k2");
  }
  if (as_json) {
    json out = {{"group", m.group().describe()},
                {"k", m.k()},
                {"method", method},
                {"lower", est.lower},
                {"upper", est.upper},
                {"lower_method", est.lower_method},
                {"upper_method", est.upper_method},
                {"zero_multiplier", est.zero_multiplier}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "lower = " << est.lower << " (" << est.lower_method << ")\n"
              << "upper = " << est.upper << " (" << est.upper_method << ")\n";
  }
  return kExitOk;
}

BlockParams block_params_from(double n1, double n2, double n3, double l1, double l2,
                              double l3, double h, int dim, const std::string& signs,
                              const std::string& eps) {
  BlockParams p = BlockParams::from_values(n1, n2, n3, l1, l2, l3, h);
  p.dim = dim;
  p.eps = parse_rat(eps);
  if (!signs.empty()) {
    if (signs.size() != 3)
      throw CLI::ValidationError("--signs needs 3 characters, e.g. ++-");
    for (int j = 0; j < 3; ++j)
      p.signs[static_cast<std::size_t>(j)] =
          signs[static_cast<std::size_t>(j)] == '-' ? -1 : +1;
  }
  return p;
}

json symbolic_json(const BlockBound& b) {
  json pieces = json::array();
  for (const auto& piece : b.symbolic) {
    json guards = json::array();
    for (const auto& c : piece.guard.constraints) guards.push_back(c.str());
    pieces.push_back({{"monomial", piece.monomial.str()},
                      {"log2_const", rat_str(piece.log2_const)},
                      {"guards", guards}});
  }
  return pieces;
}

int run_block(Family fam, const BlockParams& p) {
  BlockBound b = block_bound(fam, p);
  json out = {{"family", family_name(fam)},
              {"params", p.describe()},
              {"case_label", b.case_label},
              {"value", b.value},
              {"symbolic", symbolic_json(b)}};
  if (!b.vanishes) out["log2_value"] = rat_str(b.log2_value);
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int run_prove(const std::string& builtin, const std::string& spec_file,
              const std::vector<std::string>& params, bool as_json) {
  std::map<std::string, std::string> pmap;
  for (const auto& kv : params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--param needs key=value, got " + kv);
    pmap[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  ProofReport report;
  if (!builtin.empty()) {
    report = prove_builtin(builtin, pmap);
  } else {
    std::ifstream is(spec_file);
    if (!is) throw std::runtime_error("cannot open " + spec_file);
    std::stringstream buf;
    buf << is.rdbuf();
    report = prove(spec_from_text(buf.str()));
  }
  if (as_json) {
    std::cout << report_json(report) << "\n";
  } else {
    std::cout << (report.builtin.empty() ? "spec" : report.builtin) << ": "
              << verdict_name(report.overall) << "\n";
    for (const auto& r : report.reductions_applied)
      std::cout << "  reduction: " << r << "\n";
    for (const auto& cstep : report.certificate_chain)
      std::cout << "  certificate: " << cstep << "\n";
  }
  return report.overall == VerdictKind::Converges ? kExitOk : kExitFailure;
}

int run_verify(const std::string& family, const std::string& grid_file,
               const std::string& resolution, const std::string& out_path,
               std::uint64_t seed) {
  std::ifstream is(grid_file);
  if (!is) throw std::runtime_error("cannot open " + grid_file);
  json gf = json::parse(is);

  Family fam = family_from_name(family);
  json g = gf.at("grid");
  int m = g.value("points", 64);
  std::string h = g.value("spacing", std::string("1/4"));
  int mt = g.value("time_points", 64);
  std::string ht = g.value("time_spacing", std::string("1/2"));
  int dim = g.value("dim", 1);
  if (!resolution.empty()) h = resolution;
  GroupSpec grid =
      GroupSpec::real_grid(m, parse_rat(h), dim, TimeAxis{mt, parse_rat(ht)});

  std::vector<BlockParams> tuples;
  for (const auto& t : gf.at("tuples")) {
    BlockParams p = BlockParams::from_values(t.at("N1"), t.at("N2"), t.at("N3"),
                                             t.at("L1"), t.at("L2"), t.at("L3"),
                                             t.at("H"));
    p.dim = dim;
    if (t.contains("signs")) {
      std::string s = t["signs"];
      for (int j = 0; j < 3; ++j)
        p.signs[static_cast<std::size_t>(j)] =
            s[static_cast<std::size_t>(j)] == '-' ? -1 : +1;
    }
    tuples.push_back(p);
  }

  AltMaxConfig cfg;
  cfg.seed = seed;
  cfg.restarts = 4;
  cfg.iterations = 60;
  cfg.tolerance = 1e-9;
  auto rows = run_grid_verification(fam, tuples, grid, cfg);
  std::string payload = rows_json(rows, fam, grid, cfg);
  if (out_path.empty())
    std::cout << payload << "\n";
  else
    emit_report(payload, out_path);

  for (const auto& r : rows)
    if (!r.skipped && r.formula_bound > 0 &&
        (r.ratio_lower < 1.0 / 16 || r.ratio_upper > 16.0))
      return kExitFailure;
  return kExitOk;
}

int run_suite(std::uint64_t seed, int trials, bool as_json) {
  SuiteResult res = run_property_suite(seed, trials);
  if (as_json) {
    std::cout << res.json() << "\n";
  } else {
    for (const auto& c : res.checks)
      std::cout << c.name << ": " << c.pass << " pass, " << c.fail << " fail\n";
  }
  return res.all_passed() ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted multilinear convolution estimates: norms, dyadic block "
               "bounds, and summation certificates"};
  app.require_subcommand(1);

  auto* norm = app.add_subcommand("norm", "Estimate a multiplier norm");
  std::string group = "cycle", spacing = "1", method = "altmax", input, builtin = "one";
  int dim = 1, points = 16, k = 3;
  AltMaxConfig cfg;
  bool as_json = false;
  norm->add_option("--group", group, "cycle | torus | real");
  norm->add_option("--dim", dim);
  norm->add_option("--points", points, "points per axis");
  norm->add_option("--spacing", spacing, "grid spacing p/q (real grids)");
  norm->add_option("--k", k, "multiplier arity");
  norm->add_option("--method", method, "altmax | cs | exact-k2");
  norm->add_option("--in", input, "XSBK1 container with a dense multiplier");
  norm->add_option("--builtin", builtin, "one | gauss");
  norm->add_option("--restarts", cfg.restarts);
  norm->add_option("--iters", cfg.iterations);
  norm->add_option("--tol", cfg.tolerance);
  norm->add_option("--seed", cfg.seed);
  norm->add_flag("--json", as_json);

  auto* block = app.add_subcommand("block", "Closed-form dyadic block bound");
  std::string family = "kdv-r", signs, eps = "1/20";
  double n1 = 1, n2 = 1, n3 = 1, l1 = 1, l2 = 1, l3 = 1, hh = 1;
  int bdim = 1;
  block->add_option("--family", family, "kdv-r | kdv-t | wave | schro-ppp | schro-ppm");
  block->add_option("--dim", bdim);
  block->add_option("--N1", n1)->required();
  block->add_option("--N2", n2)->required();
  block->add_option("--N3", n3)->required();
  block->add_option("--L1", l1)->required();
  block->add_option("--L2", l2)->required();
  block->add_option("--L3", l3)->required();
  block->add_option("--H", hh)->required();
  block->add_option("--signs", signs, "e.g. ++-");
  block->add_option("--eps", eps, "epsilon for (++-) Schrodinger, rational");

  auto* prove_cmd = app.add_subcommand("prove", "Certify an estimate reduction");
  std::string prove_builtin_name, spec_file;
  std::vector<std::string> prove_params;
  bool prove_json = false;
  prove_cmd->add_option("--builtin", prove_builtin_name, "built-in estimate name");
  prove_cmd->add_option("--spec", spec_file, "declarative spec file");
  prove_cmd->add_option("--param", prove_params, "key=rational");
  prove_cmd->add_flag("--json", prove_json);

  auto* verify = app.add_subcommand("verify", "Numeric grid verification");
  std::string vfamily = "kdv-r", grid_file, vres, vout;
  std::uint64_t vseed = 0;
  verify->add_option("--family", vfamily);
  verify->add_option("--grid-file", grid_file)->required();
  verify->add_option("--resolution", vres, "override spatial spacing p/q");
  verify->add_option("--out", vout);
  verify->add_option("--seed", vseed);

  auto* suite = app.add_subcommand("suite", "Randomized property suite");
  std::uint64_t sseed = 42;
  int strials = 200;
  bool sjson = false;
  suite->add_option("--seed", sseed);
  suite->add_option("--trials", strials);
  suite->add_flag("--json", sjson);

  try {
    app.parse(argc, argv);
    if (norm->parsed())
      return run_norm(group, dim, points, spacing, k, method, input, builtin, cfg,
                      as_json);
    if (block->parsed())
      return run_block(family_from_name(family),
                       block_params_from(n1, n2, n3, l1, l2, l3, hh, bdim, signs, eps));
    if (prove_cmd->parsed()) {
      if (prove_builtin_name.empty() == spec_file.empty())
        throw CLI::ValidationError("prove needs exactly one of --builtin / --spec");
      return run_prove(prove_builtin_name, spec_file, prove_params, prove_json);
    }
    if (verify->parsed()) return run_verify(vfamily, grid_file, vres, vout, vseed);
    if (suite->parsed()) return run_suite(sseed, strials, sjson);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
