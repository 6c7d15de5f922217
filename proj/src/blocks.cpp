#include "xsb/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace xsb {

const char* family_name(Family f) {
  switch (f) {
    case Family::kdv_r: return "kdv-r";
    case Family::kdv_t: return "kdv-t";
    case Family::wave: return "wave";
    case Family::schro_ppp: return "schro-ppp";
    case Family::schro_ppm: return "schro-ppm";
  }
  return "?";
}

Family family_from_name(const std::string& s) {
  if (s == "kdv-r") return Family::kdv_r;
  if (s == "kdv-t") return Family::kdv_t;
  if (s == "wave") return Family::wave;
  if (s == "schro-ppp") return Family::schro_ppp;
  if (s == "schro-ppm") return Family::schro_ppm;
  throw std::invalid_argument("unknown family " + s);
}

namespace {

long dyadic_exp(double v, const char* what) {
  auto e = dyadic_log2(v);
  if (!e) throw std::invalid_argument(std::string(what) + " must be a positive power of two");
  return *e;
}

}  // namespace

BlockParams BlockParams::from_values(double n1, double n2, double n3, double l1,
                                     double l2, double l3, double hh) {
  BlockParams p;
  p.n = {dyadic_exp(n1, "N1"), dyadic_exp(n2, "N2"), dyadic_exp(n3, "N3")};
  p.l = {dyadic_exp(l1, "L1"), dyadic_exp(l2, "L2"), dyadic_exp(l3, "L3")};
  p.h = dyadic_exp(hh, "H");
  for (long v : p.l)
    if (v < 0) throw std::invalid_argument("modulations must be >= 1");
  return p;
}

long BlockParams::nmax() const { return std::max({n[0], n[1], n[2]}); }
long BlockParams::nmin() const { return std::min({n[0], n[1], n[2]}); }
long BlockParams::nmed() const { return n[0] + n[1] + n[2] - nmax() - nmin(); }
long BlockParams::lmax() const { return std::max({l[0], l[1], l[2]}); }
long BlockParams::lmin() const { return std::min({l[0], l[1], l[2]}); }
long BlockParams::lmed() const { return l[0] + l[1] + l[2] - lmax() - lmin(); }

std::string BlockParams::describe() const {
  std::ostringstream os;
  os << "N=(2^" << n[0] << ",2^" << n[1] << ",2^" << n[2] << ") L=(2^" << l[0] << ",2^"
     << l[1] << ",2^" << l[2] << ") H=2^" << h << " d=" << dim;
  if (periodic) os << " periodic";
  os << " signs=(" << signs[0] << "," << signs[1] << "," << signs[2] << ")";
  return os.str();
}

namespace {

std::map<std::string, Rat> param_point(const BlockParams& p) {
  return {{"N1", Rat(p.n[0])}, {"N2", Rat(p.n[1])}, {"N3", Rat(p.n[2])},
          {"L1", Rat(p.l[0])}, {"L2", Rat(p.l[1])}, {"L3", Rat(p.l[2])},
          {"H", Rat(p.h)}};
}

}  // namespace

bool BlockBound::symbolic_consistent(const BlockParams& p) const {
  if (vanishes) return symbolic.empty();
  auto x = param_point(p);
  bool hit = false;
  for (const auto& piece : symbolic) {
    if (!piece.guard.contains(x)) continue;
    hit = true;
    if (piece.monomial.eval_log2(x) + piece.log2_const != log2_value) return false;
  }
  return hit;
}

namespace {

constexpr const char* kSym[7] = {"N1", "N2", "N3", "L1", "L2", "L3", "H"};

// Frequency-pattern comparisons: three dyadic [x,2x) shells with equal
// exponents cannot sum to zero, so coherent blocks look like (N,N,2N).
bool fsim(long a, long b) { return std::labs(a - b) <= 1; }
bool fgg(long a, long b) { return a - b >= 2; }
// Vanishing window for "H ~ target": shells start at the target value.
bool h_window(long h, long target, long width) { return h >= target && h <= target + width; }
// Resonance-modulation tie (Lmax ~ H and kin): the normalized resonance
// shell sits within a bounded constant of the physical lambda-sum scale, so
// the tie carries the same factor-4 slack as the vanishing checks.
bool tie(long a, long b) { return std::labs(a - b) <= 2; }

struct CaseBuilder {
  DyadicRegion guards;
  LinForm form;  // selected monomial, log2 scale
  const BlockParams& p;

  explicit CaseBuilder(const BlockParams& params) : p(params) {
    for (const char* s : kSym) guards.declare(s, VarRole::SUM);
  }

  static LinForm sym(int j, bool freq) { return LinForm::var(kSym[freq ? j : 3 + j]); }

  long val(const LinForm& f) const {
    return static_cast<long>(to_double(f.eval(param_point(p))));
  }

  // min over linear forms, selected at the parameter point; the guard
  // records the selection.
  LinForm select_min(const std::vector<LinForm>& args) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < args.size(); ++i)
      if (val(args[i]) < val(args[best])) best = i;
    for (std::size_t i = 0; i < args.size(); ++i)
      if (i != best) guards.require_le(args[best], args[i]);
    return args[best];
  }

  // <.>_Z bracket: identity on R, max(1,.) on Z (positive part in log2).
  LinForm bracket(const LinForm& content, bool periodic) {
    if (!periodic) return content;
    if (val(content) >= 0) {
      guards.require_le(LinForm::lit(0), content);
      return content;
    }
    guards.require_le(content, LinForm::lit(0));
    return LinForm{};
  }

  void add(const LinForm& f, Rat scale = 1) { form.add(f, scale); }
};

// Ascending index order [min, med, max] with stable tie-breaks.
std::array<int, 3> argsort3(const std::array<long, 3>& v) {
  std::array<int, 3> idx{0, 1, 2};
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
  return idx;
}

BlockBound vanish(const std::string& why) {
  BlockBound b;
  b.vanishes = true;
  b.value = 0.0;
  b.case_label = "vanishes[" + why + "]";
  return b;
}

BlockBound finish(CaseBuilder& cb, const std::string& label) {
  BlockBound out;
  out.case_label = label;
  SymbolicPiece piece;
  piece.guard = cb.guards;
  for (const auto& [v, c] : cb.form.coef) piece.monomial.exp[v] = c;
  piece.log2_const = cb.form.constant;
  out.log2_value = piece.monomial.eval_log2(param_point(cb.p)) + piece.log2_const;
  out.value = exp2r(out.log2_value);
  out.symbolic.push_back(std::move(piece));
  return out;
}

void validate_common(const BlockParams& p) {
  for (long v : p.l)
    if (v < 0) throw std::invalid_argument("modulations must be >= 1 (l >= 0)");
}

bool n_comp_ok(const BlockParams& p) { return p.nmax() - p.nmed() <= 1; }
bool t_comp_ok(const BlockParams& p) {
  long target = std::max(p.h, p.lmed());
  return std::labs(p.lmax() - target) <= 2;
}

}  // namespace

BlockBound kdv_block(const BlockParams& p) {
  validate_common(p);
  if (p.dim != 1) throw std::invalid_argument("KdV blocks are one-dimensional");
  if (!n_comp_ok(p)) return vanish("n-comp");
  if (!t_comp_ok(p)) return vanish("t-comp");
  long prod = p.n[0] + p.n[1] + p.n[2];
  if (!h_window(p.h, prod, 2)) return vanish("h-comp-kdv");

  auto li = argsort3(p.l);
  auto ni = argsort3(p.n);
  const bool per = p.periodic;

  CaseBuilder cb(p);
  LinForm nprod = LinForm::var("N1") + LinForm::var("N2") + LinForm::var("N3");
  cb.guards.require_le(nprod, LinForm::var("H"));
  cb.guards.require_le(LinForm::var("H"), nprod + LinForm::lit(2));
  cb.guards.require_le(CaseBuilder::sym(li[0], false), CaseBuilder::sym(li[1], false));
  cb.guards.require_le(CaseBuilder::sym(li[1], false), CaseBuilder::sym(li[2], false));
  LinForm lmin = CaseBuilder::sym(li[0], false);
  LinForm lmed = CaseBuilder::sym(li[1], false);
  LinForm nmax_f = CaseBuilder::sym(ni[2], true);

  // (++) coherence: all frequencies comparable, resonance carries the top
  // modulation.
  if (fsim(p.nmax(), p.nmin()) && tie(p.lmax(), p.h)) {
    cb.add(lmin, Rat(1, 2));
    cb.add(cb.bracket(Rat(-1, 4) * nmax_f + Rat(1, 4) * lmed, per), 1);
    return finish(cb, "kdv-excep");
  }

  // (+-) coherence: the low-frequency index carries the top modulation = H.
  int imin = ni[0];
  if (fsim(p.nmed(), p.nmax()) && fgg(p.nmed(), p.nmin()) &&
      p.l[static_cast<std::size_t>(imin)] == p.lmax() &&
      tie(p.l[static_cast<std::size_t>(imin)], p.h)) {
    LinForm ratio = nmax_f - CaseBuilder::sym(imin, true);  // Nmax/Nmin
    cb.add(lmin, Rat(1, 2));
    cb.add(cb.bracket(Rat(-1) * nmax_f +
                          Rat(1, 2) * cb.select_min({LinForm::var("H"), ratio + lmed}),
                      per),
           1);
    return finish(cb, "kdv-weird");
  }

  cb.add(lmin, Rat(1, 2));
  cb.add(cb.bracket(Rat(-1) * nmax_f +
                        Rat(1, 2) * cb.select_min({LinForm::var("H"), lmed}),
                    per),
         1);
  return finish(cb, "kdv-standard");
}

SignNormalization normalize_signs(const std::array<int, 3>& signs) {
  SignNormalization out;
  int plus = 0;
  for (int s : signs) plus += (s > 0);
  if (plus == 0 || plus == 3) {
    out.all_equal = true;
    return out;
  }
  int odd_sign = (plus == 2) ? -1 : +1;
  int odd = 0;
  for (int j = 0; j < 3; ++j)
    if (signs[static_cast<std::size_t>(j)] == odd_sign) odd = j;
  out.perm = {0, 1, 2};
  std::swap(out.perm[static_cast<std::size_t>(odd)], out.perm[2]);
  out.time_reversed = (odd_sign == +1);
  return out;
}

namespace {

BlockParams apply_norm(const BlockParams& p0, const SignNormalization& norm) {
  BlockParams p = p0;
  for (int j = 0; j < 3; ++j) {
    p.n[static_cast<std::size_t>(j)] =
        p0.n[static_cast<std::size_t>(norm.perm[static_cast<std::size_t>(j)])];
    p.l[static_cast<std::size_t>(j)] =
        p0.l[static_cast<std::size_t>(norm.perm[static_cast<std::size_t>(j)])];
  }
  p.signs = {+1, +1, -1};
  return p;
}

std::string norm_suffix(const SignNormalization& norm) {
  if (norm.perm == std::array<int, 3>{0, 1, 2} && !norm.time_reversed) return "";
  std::ostringstream os;
  os << "[perm=(" << norm.perm[0] + 1 << norm.perm[1] + 1 << norm.perm[2] + 1 << ")"
     << (norm.time_reversed ? ",T" : "") << "]";
  return os.str();
}

}  // namespace

BlockBound wave_block(const BlockParams& p0) {
  validate_common(p0);
  if (p0.dim < 2) throw std::invalid_argument("wave blocks need d >= 2");
  SignNormalization norm = normalize_signs(p0.signs);
  if (norm.all_equal) return vanish("signs-equal");
  BlockParams p = apply_norm(p0, norm);
  std::string suffix = norm_suffix(norm);

  if (!n_comp_ok(p)) return vanish("n-comp");
  if (!t_comp_ok(p)) return vanish("t-comp");
  if (p.h > std::min(p.n[0], p.n[1]) + 2) return vanish("h-w");

  const Rat d(p.dim);
  auto li = argsort3(p.l);
  // Bound symbols use the original index names.
  auto orig = [&](int j, bool freq) {
    return CaseBuilder::sym(norm.perm[static_cast<std::size_t>(j)], freq);
  };

  // (++) high-high: the minus index carries the small frequency.
  if (fsim(p.n[0], p.n[1]) && fgg(std::min(p.n[0], p.n[1]), p.n[2])) {
    long nbig = std::max(p.n[0], p.n[1]);
    if (!h_window(p.h, nbig, 2)) return vanish("wpp-h");
    if (p.l[2] <= nbig - 2 && !(fsim(p.l[0], nbig) && fsim(p.l[1], nbig)))
      return vanish("wpp-low-modulation");
    CaseBuilder cb(p0);
    cb.guards.require_le(orig(li[0], false), orig(li[1], false));
    cb.guards.require_le(orig(li[1], false), orig(li[2], false));
    cb.add(orig(li[0], false), Rat(1, 2));
    cb.add(cb.select_min({orig(li[1], false), orig(2, true)}), Rat(1, 2));
    cb.add(orig(2, true), (d - 1) / 2);
    return finish(cb, "wpp" + suffix);
  }

  // High-low interactions: the small frequency sits at a plus index.
  int low = (p.n[1] <= p.n[0]) ? 1 : 0;
  CaseBuilder cb(p0);
  cb.guards.require_le(orig(li[0], false), orig(li[1], false));
  cb.guards.require_le(orig(li[1], false), orig(li[2], false));
  LinForm lmin = orig(li[0], false);
  LinForm lmed = orig(li[1], false);
  LinForm nlow = orig(low, true);
  LinForm hf = LinForm::var("H");
  cb.add(hf - nlow, (d - 3) / 4);
  cb.add(lmin, Rat(1, 2));
  cb.add(nlow, (d - 1) / 2);
  if (p.l[static_cast<std::size_t>(low)] == p.lmax()) {
    // (+-) high-high: the low-frequency modulation is the largest.
    LinForm nhigh = orig(low == 0 ? 1 : 0, true);
    cb.add(cb.select_min({hf, nhigh - nlow + lmed}), Rat(1, 2));
    return finish(cb, "w-pm" + suffix);
  }
  cb.add(cb.select_min({hf, lmed}), Rat(1, 2));
  return finish(cb, "w-standard" + suffix);
}

BlockBound schro_ppp_block(const BlockParams& p) {
  validate_common(p);
  if (!n_comp_ok(p)) return vanish("n-comp");
  if (!t_comp_ok(p)) return vanish("t-comp");
  if (!h_window(p.h, 2 * p.nmax(), 3)) return vanish("h-comp-sppp");

  const Rat d(p.dim);
  auto li = argsort3(p.l);
  auto ni = argsort3(p.n);
  CaseBuilder cb(p);
  cb.guards.require_le(CaseBuilder::sym(li[0], false), CaseBuilder::sym(li[1], false));
  cb.guards.require_le(CaseBuilder::sym(li[1], false), CaseBuilder::sym(li[2], false));
  LinForm lmin = CaseBuilder::sym(li[0], false);
  LinForm lmed = CaseBuilder::sym(li[1], false);
  LinForm nmax_f = CaseBuilder::sym(ni[2], true);
  LinForm nmin_f = CaseBuilder::sym(ni[0], true);

  if (p.dim == 1 && fsim(p.nmax(), p.nmin()) && tie(p.lmax(), p.h)) {
    cb.add(lmin, Rat(1, 2));
    cb.add(lmed, Rat(1, 4));
    return finish(cb, "sppp-excep");
  }
  cb.add(lmin, Rat(1, 2));
  cb.add(nmax_f, Rat(-1, 2));
  cb.add(nmin_f, (d - 1) / 2);
  cb.add(cb.select_min({nmax_f + nmin_f, lmed}), Rat(1, 2));
  return finish(cb, "sppp-standard");
}

BlockBound schro_ppm_block(const BlockParams& p0) {
  validate_common(p0);
  SignNormalization norm = normalize_signs(p0.signs);
  if (norm.all_equal)
    throw std::invalid_argument("(++-) blocks need mixed signs; use schro-ppp");
  BlockParams p = apply_norm(p0, norm);
  std::string suffix = norm_suffix(norm);

  if (!n_comp_ok(p)) return vanish("n-comp");
  if (!t_comp_ok(p)) return vanish("t-comp");

  const Rat d(p.dim);
  auto li = argsort3(p.l);
  auto orig = [&](int j, bool freq) {
    return CaseBuilder::sym(norm.perm[static_cast<std::size_t>(j)], freq);
  };

  CaseBuilder cb(p0);
  cb.guards.require_le(orig(li[0], false), orig(li[1], false));
  cb.guards.require_le(orig(li[1], false), orig(li[2], false));
  LinForm lmin = orig(li[0], false);
  LinForm lmed = orig(li[1], false);
  LinForm hf = LinForm::var("H");
  auto nim = argsort3(p.n);
  LinForm nmax_f = orig(nim[2], true);
  LinForm nmin_f = orig(nim[0], true);

  if (p.dim == 1) {
    // One-dimensional (++-) rules: H ~ N1 N2, the two stated weakened cases,
    // otherwise the (+++) analogue.
    if (!h_window(p.h, p.n[0] + p.n[1], 2)) return vanish("h-comp-sppm-1d");
    for (int i = 0; i < 2; ++i) {
      if (fsim(p.n[static_cast<std::size_t>(i)], p.nmin()) &&
          p.l[static_cast<std::size_t>(i)] == p.lmax() &&
          tie(p.l[static_cast<std::size_t>(i)], p.h)) {
        cb.add(lmin, Rat(1, 2));
        cb.add(nmin_f, Rat(-1, 2));
        cb.add(lmed, Rat(1, 2));
        return finish(cb, "sppm-1d-weak" + suffix);
      }
    }
    if (fsim(p.nmax(), p.nmin()) && tie(p.lmax(), p.h)) {
      cb.add(lmin, Rat(1, 2));
      cb.add(lmed, Rat(1, 4));
      return finish(cb, "sppm-1d-excep" + suffix);
    }
    cb.add(lmin, Rat(1, 2));
    cb.add(nmax_f, Rat(-1, 2));
    cb.add(cb.select_min({nmax_f + nmin_f, lmed}), Rat(1, 2));
    return finish(cb, "sppm-1d-standard" + suffix);
  }

  if (p.h > p.n[0] + p.n[1] + 2) return vanish("sppm-h");

  // (++) case: both plus indices large.
  if (fsim(p.n[0], p.n[1]) && fgg(std::min(p.n[0], p.n[1]), p.n[2])) {
    if (!h_window(p.h, 2 * std::max(p.n[0], p.n[1]), 2)) return vanish("sppm-pp-h");
    cb.add(lmin, Rat(1, 2));
    cb.add(nmax_f, Rat(-1, 2));
    cb.add(nmin_f, (d - 1) / 2);
    cb.add(cb.select_min({nmax_f + nmin_f, lmed}), Rat(1, 2));
    return finish(cb, "sppm-pp" + suffix);
  }

  // Exceptional (+-) coherence at a plus index i: H = L_i = Lmax strictly
  // above the other modulations and above Nmin^2.
  for (int i = 0; i < 2; ++i) {
    long liv = p.l[static_cast<std::size_t>(i)];
    bool strict = true;
    for (int jj = 0; jj < 3; ++jj)
      if (jj != i && p.l[static_cast<std::size_t>(jj)] >= liv) strict = false;
    if (fsim(p.n[static_cast<std::size_t>(i)], p.nmin()) && tie(p.h, liv) &&
        liv == p.lmax() && strict && p.h > 2 * p.nmin()) {
      cb.add(lmin, Rat(1, 2));
      cb.add(nmax_f, Rat(-1, 2));
      cb.add(nmin_f, (d - 1) / 2);
      cb.add(cb.select_min({hf, hf - Rat(2) * nmin_f + lmed}), Rat(1, 2));
      return finish(cb, "sppm-excep" + suffix);
    }
  }

  cb.add(lmin, Rat(1, 2));
  cb.add(nmax_f, Rat(-1, 2));
  cb.add(nmin_f, (d - 1) / 2);
  cb.add(cb.select_min({hf, lmed}), Rat(1, 2));
  Rat edge = Rat(1, 2) - (p.dim == 2 ? Rat(0) : p.eps);
  cb.add(cb.select_min({LinForm::lit(0), hf - Rat(2) * nmin_f}), edge);
  return finish(cb, "sppm-est" + suffix);
}

BlockBound block_bound(Family f, const BlockParams& p) {
  BlockParams q = p;
  switch (f) {
    case Family::kdv_r:
      q.periodic = false;
      return kdv_block(q);
    case Family::kdv_t:
      q.periodic = true;
      return kdv_block(q);
    case Family::wave: return wave_block(q);
    case Family::schro_ppp: return schro_ppp_block(q);
    case Family::schro_ppm: return schro_ppm_block(q);
  }
  throw std::invalid_argument("unknown family");
}

double rotate_bound(double big_r, double small_r, double theta, int dim, const Rat& eps) {
  if (!(big_r >= small_r) || !(small_r > 0) || !(theta > 0) || theta > 2.0 || dim < 2)
    throw std::invalid_argument("rotate_bound domain violation");
  double e = (dim == 2) ? 0.0 : to_double(eps);
  double inner = std::min(1.0, big_r * theta / small_r);
  return std::pow(small_r, dim / 2.0) * std::sqrt(theta) * std::pow(inner, 0.5 - e);
}

double transversality_bound(double l1, double l2, double theta, double proj_measure,
                            double e1_measure, double e2_measure) {
  if (!(theta > 0)) throw std::invalid_argument("transversality needs theta > 0");
  double main = std::sqrt(l1 * l2 / theta * proj_measure);
  double crude = std::sqrt(std::min(l1, l2) * std::min(e1_measure, e2_measure));
  return std::min(main, crude);
}

}  // namespace xsb
