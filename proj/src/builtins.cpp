#include "xsb/prover.hpp"

#include <sstream>
#include <stdexcept>

namespace xsb {

namespace {

Rat param_or(const std::map<std::string, std::string>& params, const std::string& key,
             const Rat& fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : parse_rat(it->second);
}

long iparam_or(const std::map<std::string, std::string>& params, const std::string& key,
               long fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  return static_cast<long>(numerator(parse_rat(it->second)));
}

void stamp(ProofReport& r, const std::string& name,
           const std::map<std::string, std::string>& params) {
  r.builtin = name;
  r.params = params;
}

EstimateSpec kpv2_spec(const Rat& eps) {
  EstimateSpec spec;
  spec.family = Family::kdv_r;
  spec.dim = 1;
  spec.weight = {{"N2", Rat(1, 2), true}, {"N1", Rat(-1, 4), true}};
  spec.b = {Rat(1, 2) + eps, Rat(1, 2) - eps, Rat(0)};
  spec.eps = eps;
  // The proof unifies the permuted coherent cases by replacing L1^(1/2+eps)
  // with L1^(1/2-eps); a pure weakening since L1 >= 1.
  spec.weird_b1_override = Rat(1, 2) - eps;
  return spec;
}

EstimateSpec borg_spec() {
  EstimateSpec spec;
  spec.family = Family::kdv_t;
  spec.dim = 1;
  spec.pin_all_n_equal = true;
  spec.b = {Rat(1, 3), Rat(1, 3), Rat(0)};
  return spec;
}

ProofReport prove_kpv2(const std::map<std::string, std::string>& params) {
  Rat eps = param_or(params, "eps", Rat(1, 100));
  if (!(eps > 0)) throw std::invalid_argument("kpv2 needs eps > 0");
  ProofReport r = prove(kpv2_spec(eps));
  r.reductions_applied.insert(r.reductions_applied.begin(),
                              "coherent cases: L1 exponent weakened to 1/2-eps");
  return r;
}

ProofReport prove_kpv3(const std::map<std::string, std::string>& params) {
  Rat eps = param_or(params, "eps", Rat(1, 100));
  ProofReport inner = prove_kpv2(params);
  ProofReport r;
  r.overall = inner.overall;
  r.any_case = inner.any_case;
  r.reductions_applied = {
      "estimate |xi1+xi2+xi3| by <xi4>",
      "fractional Leibniz: <xi4>^(5/4) <= <xi4>^(1/2) sum_j <xi_j>^(3/4)",
      "minorize <lambda2>^(1/2+eps) by <lambda2>^(1/2-eps)",
      "TT* identity: the [4;Z] form factors as the kpv2 [3;Z] form squared"};
  r.certificate_chain = {"kpv2(eps=" + rat_str(eps) + ") -> " +
                         verdict_name(inner.overall)};
  r.branches = inner.branches;
  return r;
}

ProofReport prove_borg(const std::map<std::string, std::string>&) {
  ProofReport r = prove(borg_spec());
  r.reductions_applied.insert(
      r.reductions_applied.begin(),
      "Littlewood-Paley + mean-zero reduction to a single dyadic frequency N");
  return r;
}

ProofReport prove_kpv_t(const std::map<std::string, std::string>& params) {
  ProofReport inner = prove_borg(params);
  ProofReport r;
  r.overall = inner.overall;
  r.any_case = inner.any_case;
  r.reductions_applied = {
      "resonance identity: 1 <~ sum_j |lambda_j|^(1/2) / |xi1 xi2 xi3|^(1/2)",
      "symmetry: reduce to the j = 1 term",
      "minorize <lambda>^(1/2) by <lambda>^(1/3)",
      "Holder with the periodic L4 Strichartz estimate twice"};
  r.certificate_chain = {"borg_l4 -> " + std::string(verdict_name(inner.overall))};
  r.branches = inner.branches;
  return r;
}

ProofReport prove_qij(const std::map<std::string, std::string>& params) {
  long d = iparam_or(params, "d", 3);
  Rat eps = param_or(params, "eps", Rat(1, 50));
  Rat s = param_or(params, "s", Rat(d, 2) - Rat(3, 4) + Rat(10) * eps);
  if (d < 3) throw std::invalid_argument("qij needs d >= 3");
  EstimateSpec spec;
  spec.family = Family::wave;
  spec.dim = static_cast<int>(d);
  spec.eps = eps;
  // Null-form majorant |xi1 ^ xi2| <~ Nmax Nmin^(1/2) min(H, Nmin)^(1/2),
  // divided by min(<xi_j>) <xi1>^s <xi2>^s <xi3>^(1-s).
  spec.weight = {{"NMAX", Rat(1), false},
                 {"NMIN", Rat(1, 2), false},
                 {"NMIN", Rat(-1), true},
                 {"N1", -s, true},
                 {"N2", -s, true},
                 {"N3", s - 1, true}};
  spec.weight_atoms.push_back(
      Atom{Atom::Kind::MIN, Rat(1, 2), {LinForm::var("H"), LinForm::var("NMIN")}});
  spec.b = {Rat(3, 4) + eps, Rat(3, 4) + eps, Rat(1, 4) - eps};
  spec = apply_averaging(std::move(spec), 1, 3);
  spec = apply_averaging(std::move(spec), 2, 3);
  return prove(spec);
}

ProofReport prove_new_schro(const std::map<std::string, std::string>& params) {
  long d = iparam_or(params, "d", 3);
  Rat eps = param_or(params, "eps", Rat(1, 100));
  Rat s = param_or(params, "s", Rat(-1, 5));
  if (s > 0) throw std::invalid_argument("new_schro is stated for s <= 0");
  EstimateSpec spec;
  spec.family = Family::schro_ppm;
  spec.dim = static_cast<int>(d);
  spec.eps = eps;
  spec.weight = {{"N1", -s, true}, {"N2", s, true}, {"N3", -s, true}};
  spec.b = {Rat(1, 2) - eps, Rat(1, 2) - eps, Rat(1, 2) - eps};
  return prove(spec);
}

ProofReport prove_sobolev(const std::map<std::string, std::string>& params) {
  long d = iparam_or(params, "d", 1);
  Rat s1 = param_or(params, "s1", Rat(0));
  Rat s2 = param_or(params, "s2", Rat(0));
  Rat s3 = param_or(params, "s3", Rat(0));
  EstimateSpec spec;
  spec.spatial_only = true;
  spec.dim = static_cast<int>(d);
  spec.weight = {{"N1", -s1, true}, {"N2", -s2, true}, {"N3", -s3, true}};
  spec.homogeneous = params.count("homogeneous") > 0;
  return prove(spec);
}

ProofReport prove_wave_endpoint(const std::map<std::string, std::string>& params) {
  long d = iparam_or(params, "d", 3);
  bool refine = iparam_or(params, "refine", 0) != 0;
  // Model endpoint sum: over 1 <= L3 <= N the product of L3^((d-3)/4) and
  // the high-low block bound at L = (1,1,L3), H = L3, all frequencies N,
  // normalized by the target N^((3d-5)/4).
  DyadicSumProblem p;
  p.region.declare("N", VarRole::SUP);
  p.region.declare("L3", VarRole::SUM);
  p.region.require_le(LinForm::lit(0), LinForm::var("N"));
  p.region.require_le(LinForm::lit(0), LinForm::var("L3"));
  p.region.require_le(LinForm::var("L3"), LinForm::var("N"));
  p.objective.exp["L3"] = Rat(d - 3) / 2;
  p.objective.exp["N"] = Rat(3 - d) / 2;
  p.label = refine ? "endpoint/schur-refined" : "endpoint/naive";
  if (refine) p = schur_refine(std::move(p), "L3");

  ProofReport r;
  Verdict v = sum_verdict(p);
  r.overall = v.kind;
  r.any_case = true;
  ProofBranch br{"low-modulation", {}};
  br.cases.push_back({std::move(p), std::move(v)});
  r.branches.push_back(std::move(br));
  if (refine)
    r.reductions_applied.push_back(
        "schur-to-sup: L3 (angular sector orthogonality at fixed modulation)");
  r.certified_exponent = Rat(3 * d - 5) / 4;
  return r;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"kpv2",      "kpv3",       "borg_l4", "kpv_t",
          "qij",       "new_schro",  "sobolev", "wave_endpoint"};
}

ProofReport prove_builtin(const std::string& name,
                          const std::map<std::string, std::string>& params) {
  ProofReport r;
  if (name == "kpv2")
    r = prove_kpv2(params);
  else if (name == "kpv3")
    r = prove_kpv3(params);
  else if (name == "borg_l4")
    r = prove_borg(params);
  else if (name == "kpv_t")
    r = prove_kpv_t(params);
  else if (name == "qij")
    r = prove_qij(params);
  else if (name == "new_schro")
    r = prove_new_schro(params);
  else if (name == "sobolev")
    r = prove_sobolev(params);
  else if (name == "wave_endpoint")
    r = prove_wave_endpoint(params);
  else
    throw std::invalid_argument("unknown builtin " + name);
  stamp(r, name, params);
  return r;
}

}  // namespace xsb
