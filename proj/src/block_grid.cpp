#include "xsb/block_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace xsb {

double dispersion(Family f, const BlockParams& p, int j, const double* xi, int dim) {
  double s = 0;
  for (int a = 0; a < dim; ++a) s += xi[a] * xi[a];
  switch (f) {
    case Family::kdv_r:
    case Family::kdv_t: return xi[0] * xi[0] * xi[0];
    case Family::wave:
      return p.signs[static_cast<std::size_t>(j)] * std::sqrt(s);
    case Family::schro_ppp: return s;
    case Family::schro_ppm:
      return p.signs[static_cast<std::size_t>(j)] * s;
  }
  return 0;
}

double resonance_value(Family f, const BlockParams& p, const double* xi1,
                       const double* xi2, const double* xi3, int dim) {
  auto nrm2 = [&](const double* x) {
    double s = 0;
    for (int a = 0; a < dim; ++a) s += x[a] * x[a];
    return s;
  };
  switch (f) {
    case Family::kdv_r:
    case Family::kdv_t: return std::abs(xi1[0] * xi2[0] * xi3[0]);
    case Family::wave: {
      double h = p.signs[0] * std::sqrt(nrm2(xi1)) + p.signs[1] * std::sqrt(nrm2(xi2)) +
                 p.signs[2] * std::sqrt(nrm2(xi3));
      return std::abs(h);
    }
    case Family::schro_ppp: return nrm2(xi1) + nrm2(xi2) + nrm2(xi3);
    case Family::schro_ppm: {
      double h = p.signs[0] * nrm2(xi1) + p.signs[1] * nrm2(xi2) + p.signs[2] * nrm2(xi3);
      return std::abs(h) / 2.0;
    }
  }
  return 0;
}

namespace {

bool in_shell(double v, long e) { return v >= exp2i(e) && v < exp2i(e + 1); }

void require_time_axis(Family f, const GroupSpec& grid) {
  if (!grid.time_axis())
    throw std::invalid_argument(std::string(family_name(f)) + " blocks need a time axis");
}

void check_grid_coverage(const BlockParams& p, Family f, const GroupSpec& grid) {
  for (int j = 0; j < 3; ++j) {
    double nhi = exp2i(p.n[static_cast<std::size_t>(j)] + 1);
    if (nhi > grid.xi_extent() * (1 + 1e-12))
      throw std::runtime_error("grid too small: frequency shell " + std::to_string(j + 1));
    // Some part of the (frequency, modulation) shell must fit the time axis:
    // |h_j| at the shell bottom plus the modulation magnitude.
    double xbot[GroupSpec::kMaxAxes] = {exp2i(p.n[static_cast<std::size_t>(j)]), 0, 0, 0, 0};
    double hbot = std::abs(dispersion(f, p, j, xbot, 1 /* radial magnitude */));
    double need = hbot + exp2i(p.l[static_cast<std::size_t>(j)]);
    if (need > grid.tau_extent() * (1 + 1e-12))
      throw std::runtime_error("grid too small: modulation shell " + std::to_string(j + 1));
  }
}

}  // namespace

std::vector<std::int64_t> variable_shell(const BlockParams& p, Family f, int j,
                                         const GroupSpec& grid) {
  std::vector<std::int64_t> out;
  double xi[GroupSpec::kMaxAxes];
  for (std::int64_t i = 0; i < grid.total_points(); ++i) {
    grid.xi(i, xi);
    if (!in_shell(grid.xi_norm(i), p.n[static_cast<std::size_t>(j)])) continue;
    double lam = grid.tau(i) - dispersion(f, p, j, xi, grid.dim());
    if (!in_shell(std::abs(lam), p.l[static_cast<std::size_t>(j)])) continue;
    out.push_back(i);
  }
  return out;
}

MultiplierK block_multiplier(const BlockParams& p, Family f, const GroupSpec& grid) {
  require_time_axis(f, grid);
  check_grid_coverage(p, f, grid);

  std::array<std::vector<std::int64_t>, 3> shell;
  for (int j = 0; j < 3; ++j) shell[static_cast<std::size_t>(j)] = variable_shell(p, f, j, grid);
  std::vector<char> in3(static_cast<std::size_t>(grid.total_points()), 0);
  for (auto i : shell[2]) in3[static_cast<std::size_t>(i)] = 1;

  const std::int64_t n1 = static_cast<std::int64_t>(shell[0].size());
  struct Chunk {
    Support s;
    Chunk() { s.k = 3; }
    Chunk operator+(const Chunk& o) const {
      Chunk out;
      out.s = s;
      out.s.tuples.insert(out.s.tuples.end(), o.s.tuples.begin(), o.s.tuples.end());
      out.s.values.insert(out.s.values.end(), o.s.values.begin(), o.s.values.end());
      return out;
    }
  };
  Chunk total = chunked_reduce<Chunk>(n1, 16, [&](std::int64_t lo, std::int64_t hi) {
    Chunk c;
    double x1[GroupSpec::kMaxAxes], x2[GroupSpec::kMaxAxes], x3[GroupSpec::kMaxAxes];
    std::int64_t pts[3];
    for (std::int64_t a = lo; a < hi; ++a) {
      pts[0] = shell[0][static_cast<std::size_t>(a)];
      grid.xi(pts[0], x1);
      for (auto i2 : shell[1]) {
        pts[1] = i2;
        auto third = grid.forced_third(pts[0], i2);
        if (!third || !in3[static_cast<std::size_t>(*third)]) continue;
        pts[2] = *third;
        grid.xi(i2, x2);
        grid.xi(*third, x3);
        if (!in_shell(resonance_value(f, p, x1, x2, x3, grid.dim()), p.h)) continue;
        c.s.push(pts, 1.0);
      }
    }
    return c;
  });
  return MultiplierK::from_support(3, grid, std::move(total.s));
}

namespace {

using Pred = std::function<bool(const double*, double)>;

GridFunction indicator_fn(const GroupSpec& grid, const Pred& pred) {
  GridFunction f(grid);
  double xi[GroupSpec::kMaxAxes];
  for (std::int64_t i = 0; i < grid.total_points(); ++i) {
    grid.xi(i, xi);
    if (pred(xi, grid.tau(i))) f.values[static_cast<std::size_t>(i)] = 1.0;
  }
  return f;
}

double nrm(const double* x, int dim) {
  double s = 0;
  for (int a = 0; a < dim; ++a) s += x[a] * x[a];
  return std::sqrt(s);
}

double dist_to(const double* x, double cx, int dim) {
  double s = (x[0] - cx) * (x[0] - cx);
  for (int a = 1; a < dim; ++a) s += x[a] * x[a];
  return std::sqrt(s);
}

std::string strip_suffix(const std::string& label) {
  auto b = label.find('[');
  return b == std::string::npos ? label : label.substr(0, b);
}

}  // namespace

namespace {

// Drops the part of each test function that never couples through the
// block: points absent from the support's per-variable projection add
// denominator mass but no numerator, so removing them only improves the
// Rayleigh quotient.
std::vector<GridFunction> restrict_to_active(std::vector<GridFunction> fs,
                                             const BlockParams& p, Family f,
                                             const GroupSpec& grid) {
  MultiplierK block = block_multiplier(p, f, grid);
  const Support& sup = block.support();
  if (sup.size() == 0) return fs;
  for (int j = 0; j < 3; ++j) {
    std::vector<char> active(static_cast<std::size_t>(grid.total_points()), 0);
    for (std::size_t e = 0; e < sup.size(); ++e)
      active[static_cast<std::size_t>(sup.tuple(e)[j])] = 1;
    GridFunction cut = fs[static_cast<std::size_t>(j)];
    bool any = false;
    for (std::int64_t i = 0; i < grid.total_points(); ++i) {
      if (!active[static_cast<std::size_t>(i)]) cut.values[static_cast<std::size_t>(i)] = 0;
      any = any || cut.values[static_cast<std::size_t>(i)] != cplx{};
    }
    if (any) fs[static_cast<std::size_t>(j)] = std::move(cut);
  }
  return fs;
}

}  // namespace

std::vector<GridFunction> block_extremizer(const BlockParams& p, Family f,
                                           const std::string& case_label,
                                           const GroupSpec& grid) {
  require_time_axis(f, grid);
  BlockBound active = block_bound(f, p);
  if (strip_suffix(active.case_label) != strip_suffix(case_label))
    throw std::invalid_argument("parameters select case " + active.case_label +
                                ", not " + case_label);
  const std::string label = strip_suffix(case_label);
  const int dim = grid.dim();

  auto shell_indicators = [&]() {
    std::vector<GridFunction> fs;
    for (int j = 0; j < 3; ++j)
      fs.push_back(GridFunction::indicator(grid, variable_shell(p, f, j, grid)));
    return fs;
  };

  auto lam = [&](int j, const double* xi, double tau) {
    return tau - dispersion(f, p, j, xi, dim);
  };

  std::array<int, 3> li{0, 1, 2};
  std::stable_sort(li.begin(), li.end(), [&](int a, int b) {
    return p.l[static_cast<std::size_t>(a)] < p.l[static_cast<std::size_t>(b)];
  });
  std::array<int, 3> ni{0, 1, 2};
  std::stable_sort(ni.begin(), ni.end(), [&](int a, int b) {
    return p.n[static_cast<std::size_t>(a)] < p.n[static_cast<std::size_t>(b)];
  });

  if (label == "kdv-standard" || label == "sppp-standard" || label == "sppm-pp" ||
      label == "sppm-1d-standard" || label == "sppm-1d-weak")
    return restrict_to_active(shell_indicators(), p, f, grid);

  if (label == "kdv-excep" || label == "sppp-excep" || label == "sppm-1d-excep") {
    // Knapp slabs: two slabs at the lower shells, a tilted slab at the
    // doubled frequency.
    // Tilt goes on the doubled-frequency index (ties: the larger modulation).
    int t = ni[2];
    if (p.n[static_cast<std::size_t>(ni[1])] == p.n[static_cast<std::size_t>(ni[2])] &&
        p.l[static_cast<std::size_t>(ni[1])] > p.l[static_cast<std::size_t>(t)])
      t = ni[1];
    std::array<int, 2> uv{};
    int w = 0;
    for (int j = 0; j < 3; ++j)
      if (j != t) uv[static_cast<std::size_t>(w++)] = j;
    double lmed = exp2i(p.lmed());
    bool cubic = (f == Family::kdv_r || f == Family::kdv_t);
    double ctr[3];
    for (int j : uv) ctr[j] = 1.25 * exp2i(p.n[static_cast<std::size_t>(j)]);
    ctr[t] = -(ctr[uv[0]] + ctr[uv[1]]);
    // Slab width N^(-1/2) Lmed^(1/2) for the cubic, Lmed^(1/2) for the
    // parabola, clipped inside the shells.
    double halfw = cubic ? std::sqrt(lmed / exp2i(p.nmax())) : std::sqrt(lmed);
    halfw = std::min(halfw, 0.2 * exp2i(p.nmin()));

    std::vector<GridFunction> fs(3);
    for (int j : uv) {
      double window = exp2i(p.l[static_cast<std::size_t>(j)] + 1);
      fs[static_cast<std::size_t>(j)] = indicator_fn(grid, [=](const double* x, double tau) {
        if (std::abs(x[0] - ctr[j]) > halfw) return false;
        double l = tau - (cubic ? x[0] * x[0] * x[0] : x[0] * x[0]);
        return std::abs(l) <= window;
      });
    }
    double c0 = ctr[uv[0]];
    double window = 4.0 * lmed;
    fs[static_cast<std::size_t>(t)] = indicator_fn(grid, [=](const double* x, double tau) {
      if (std::abs(x[0] - ctr[t]) > 2 * halfw) return false;
      double g = cubic ? x[0] * x[0] * x[0] / 4.0 : 2.0 * c0 * x[0] + 2.0 * c0 * c0;
      return std::abs(tau - g) <= window;
    });
    return restrict_to_active(std::move(fs), p, f, grid);
  }

  if (label == "kdv-weird") {
    int i = ni[0];  // low frequency, carries Lmax = H
    std::array<int, 2> jk{};
    int w = 0;
    for (int j = 0; j < 3; ++j)
      if (j != i) jk[static_cast<std::size_t>(w++)] = j;
    double big = 1.5 * exp2i(p.n[static_cast<std::size_t>(jk[0])]);
    double small = 1.5 * exp2i(p.n[static_cast<std::size_t>(i)]);
    double rho = 0.4 * exp2i(p.n[static_cast<std::size_t>(i)]);
    std::vector<GridFunction> fs(3);
    for (int which = 0; which < 2; ++which) {
      int j = jk[static_cast<std::size_t>(which)];
      double c = which == 0 ? big : -(big + small);
      double window = exp2i(p.l[static_cast<std::size_t>(j)] + 1);
      fs[static_cast<std::size_t>(j)] = indicator_fn(grid, [=](const double* x, double tau) {
        if (std::abs(x[0] - c) > rho) return false;
        return std::abs(tau - x[0] * x[0] * x[0]) <= window;
      });
    }
    double slope = 3.0 * big * big;
    double window = 8.0 * exp2i(2 * p.n[static_cast<std::size_t>(i)] +
                                p.n[static_cast<std::size_t>(jk[0])]);
    long nshell = p.n[static_cast<std::size_t>(i)];
    fs[static_cast<std::size_t>(i)] = indicator_fn(grid, [=](const double* x, double tau) {
      if (!in_shell(std::abs(x[0]), nshell)) return false;
      return std::abs(tau - slope * x[0]) <= window;
    });
    return restrict_to_active(std::move(fs), p, f, grid);
  }

  if (label == "wpp") {
    SignNormalization norm = normalize_signs(p.signs);
    // Normalized layout: indices a, b are the high pair, index c the small
    // minus one.
    int a = norm.perm[0], b = norm.perm[1], c = norm.perm[2];
    double C = 1.5 * exp2i(p.n[static_cast<std::size_t>(a)]);
    double off = 1.5 * exp2i(p.n[static_cast<std::size_t>(c)]);
    double rho = 0.4 * exp2i(p.n[static_cast<std::size_t>(c)]);
    double sa = p.signs[static_cast<std::size_t>(a)];
    std::vector<GridFunction> fs(3);
    double wa = exp2i(p.l[static_cast<std::size_t>(a)] + 1);
    fs[static_cast<std::size_t>(a)] = indicator_fn(grid, [=](const double* x, double tau) {
      if (dist_to(x, C, dim) > rho) return false;
      return std::abs(tau - sa * nrm(x, dim)) <= wa;
    });
    double sb = p.signs[static_cast<std::size_t>(b)];
    double wb = exp2i(p.l[static_cast<std::size_t>(b)] + 1);
    fs[static_cast<std::size_t>(b)] = indicator_fn(grid, [=](const double* x, double tau) {
      if (dist_to(x, -(C + off), dim) > rho) return false;
      return std::abs(tau - sb * nrm(x, dim)) <= wb;
    });
    double sc = p.signs[static_cast<std::size_t>(c)];
    double wc = exp2i(p.l[static_cast<std::size_t>(c)] + 1);
    double tcenter = -sa * (2 * C + off);
    double twin = exp2i(p.l[static_cast<std::size_t>(a)] + 1) +
                  exp2i(p.l[static_cast<std::size_t>(b)] + 1) +
                  exp2i(p.n[static_cast<std::size_t>(c)] + 2);
    long ncshell = p.n[static_cast<std::size_t>(c)];
    fs[static_cast<std::size_t>(c)] = indicator_fn(grid, [=](const double* x, double tau) {
      if (!in_shell(nrm(x, dim), ncshell)) return false;
      if (std::abs(tau - sc * nrm(x, dim)) > wc) return false;
      return std::abs(tau - tcenter) <= twin;
    });
    return restrict_to_active(std::move(fs), p, f, grid);
  }

  if (label == "w-standard" || label == "w-pm") {
    SignNormalization norm = normalize_signs(p.signs);
    BlockParams q = p;  // normalized copy for the angle scale
    for (int j = 0; j < 3; ++j)
      q.n[static_cast<std::size_t>(j)] =
          p.n[static_cast<std::size_t>(norm.perm[static_cast<std::size_t>(j)])];
    long nlow = std::min(q.n[0], q.n[1]);
    double theta = std::sqrt(exp2i(p.h) / exp2i(nlow));
    theta = std::min(theta, M_PI / 2);
    std::vector<GridFunction> fs(3);
    for (int j = 0; j < 3; ++j) {
      double sj = p.signs[static_cast<std::size_t>(j)];
      long nshell = p.n[static_cast<std::size_t>(j)];
      double wj = exp2i(p.l[static_cast<std::size_t>(j)] + 1);
      fs[static_cast<std::size_t>(j)] = indicator_fn(grid, [=](const double* x, double tau) {
        double r = nrm(x, dim);
        if (!in_shell(r, nshell)) return false;
        // angle(xi, sign_j * e1) <= theta
        double cosang = sj * x[0] / r;
        if (std::acos(std::clamp(cosang, -1.0, 1.0)) > theta) return false;
        return std::abs(tau - sj * r) <= wj;
      });
    }
    return restrict_to_active(std::move(fs), p, f, grid);
  }

  if (label == "sppm-est" || label == "sppm-excep") {
    SignNormalization norm = normalize_signs(p.signs);
    // Plus indices: norm.perm[0], norm.perm[1]; minus: norm.perm[2].
    int plus_small = norm.perm[0], plus_big = norm.perm[1], minus = norm.perm[2];
    if (p.n[static_cast<std::size_t>(plus_small)] > p.n[static_cast<std::size_t>(plus_big)])
      std::swap(plus_small, plus_big);
    double C = 1.5 * exp2i(p.n[static_cast<std::size_t>(plus_big)]);
    double rho = 0.45 * exp2i(p.n[static_cast<std::size_t>(plus_small)]);
    double e1win = (exp2i(p.h + 1) + exp2i(2 * p.nmin() + 1)) / C;
    std::vector<GridFunction> fs(3);
    double wb = exp2i(p.l[static_cast<std::size_t>(plus_big)] + 1);
    fs[static_cast<std::size_t>(plus_big)] = indicator_fn(grid, [=](const double* x, double tau) {
      if (dist_to(x, C, dim) > rho) return false;
      return std::abs(tau - nrm(x, dim) * nrm(x, dim)) <= wb;
    });
    double wm = exp2i(p.l[static_cast<std::size_t>(minus)] + 1);
    fs[static_cast<std::size_t>(minus)] = indicator_fn(grid, [=](const double* x, double tau) {
      if (dist_to(x, -C, dim) > rho) return false;
      return std::abs(tau + nrm(x, dim) * nrm(x, dim)) <= wm;
    });
    long nshell = p.n[static_cast<std::size_t>(plus_small)];
    if (label == "sppm-est") {
      double ws = exp2i(p.l[static_cast<std::size_t>(plus_small)] + 1);
      fs[static_cast<std::size_t>(plus_small)] =
          indicator_fn(grid, [=](const double* x, double tau) {
            double r = nrm(x, dim);
            if (!in_shell(r, nshell)) return false;
            if (std::abs(x[0]) > e1win) return false;
            return std::abs(tau - r * r) <= ws;
          });
    } else {
      double tilt_win = exp2i(2 * p.nmin() + 1) + exp2i(p.lmed() + 1);
      fs[static_cast<std::size_t>(plus_small)] =
          indicator_fn(grid, [=](const double* x, double tau) {
            double r = nrm(x, dim);
            if (!in_shell(r, nshell)) return false;
            if (std::abs(x[0]) > e1win) return false;
            double lamv = tau - r * r;
            return std::abs(lamv + 2.0 * C * x[0]) <= tilt_win;
          });
    }
    return restrict_to_active(std::move(fs), p, f, grid);
  }

  throw std::invalid_argument("no extremizer construction for case " + case_label);
}

MultiplierK rotate_multiplier(double big_r, double small_r, double theta,
                              const GroupSpec& grid) {
  if (grid.dim() < 2 || grid.time_axis())
    throw std::invalid_argument("rotate multiplier is spatial, d >= 2");
  if (2 * big_r > grid.xi_extent() * (1 + 1e-12))
    throw std::runtime_error("grid too small: rotate shell");
  const int dim = grid.dim();
  std::vector<std::int64_t> s1, s2;
  for (std::int64_t i = 0; i < grid.total_points(); ++i) {
    double r = grid.xi_norm(i);
    if (r >= big_r && r < 2 * big_r) s1.push_back(i);
    if (r >= small_r && r < 2 * small_r) s2.push_back(i);
  }
  Support sup;
  sup.k = 3;
  double x1[GroupSpec::kMaxAxes], x2[GroupSpec::kMaxAxes];
  std::int64_t pts[3];
  for (auto i1 : s1) {
    grid.xi(i1, x1);
    double r1 = nrm(x1, dim);
    for (auto i2 : s2) {
      auto third = grid.forced_third(i1, i2);
      if (!third) continue;
      grid.xi(i2, x2);
      double r2 = nrm(x2, dim);
      double dot = 0;
      for (int a = 0; a < dim; ++a) dot += x1[a] * x2[a];
      double ang = std::acos(std::clamp(dot / (r1 * r2), -1.0, 1.0));
      if (std::abs(ang - M_PI / 2) > theta) continue;
      pts[0] = i1;
      pts[1] = i2;
      pts[2] = *third;
      sup.push(pts, 1.0);
    }
  }
  return MultiplierK::from_support(3, grid, std::move(sup));
}

std::vector<GridFunction> rotate_extremizer(double big_r, double small_r, double theta,
                                            const GroupSpec& grid) {
  const int dim = grid.dim();
  double C = 1.5 * big_r;
  double rho = 0.45 * small_r;
  std::vector<GridFunction> fs(3);
  fs[0] = indicator_fn(grid, [=](const double* x, double) {
    return dist_to(x, C, dim) <= rho;
  });
  double e1win = small_r * (theta / 2 + small_r / big_r / 4);
  fs[1] = indicator_fn(grid, [=](const double* x, double) {
    double r = nrm(x, dim);
    if (r < small_r || r >= 2 * small_r) return false;
    return std::abs(x[0]) <= e1win;
  });
  // The third ball absorbs the wander of the forced coordinate: radius
  // rho + 2r covers -xi1 - xi2 for xi2 anywhere in its shell.
  double rho3 = rho + 2 * small_r;
  fs[2] = indicator_fn(grid, [=](const double* x, double) {
    return dist_to(x, -C, dim) <= rho3;
  });
  return fs;
}

}  // namespace xsb
