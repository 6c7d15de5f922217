#include "xsb/simplex.hpp"

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace xsb {

namespace {

struct Overflow {};

// Small exact fraction over int64 with overflow detection; the LP driver
// falls back to arbitrary precision when a pivot overflows.
struct F64 {
  std::int64_t n = 0;
  std::int64_t d = 1;

  static F64 make(__int128 num, __int128 den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 an = num < 0 ? -num : num;
    __int128 g = gcd128(an, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num > INT64_MAX / 2 || num < INT64_MIN / 2 || den > INT64_MAX / 2) throw Overflow{};
    F64 f;
    f.n = static_cast<std::int64_t>(num);
    f.d = static_cast<std::int64_t>(den);
    return f;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a < 0 ? -a : a;
  }

  F64 operator+(const F64& o) const {
    return make(static_cast<__int128>(n) * o.d + static_cast<__int128>(o.n) * d,
                static_cast<__int128>(d) * o.d);
  }
  F64 operator-(const F64& o) const {
    return make(static_cast<__int128>(n) * o.d - static_cast<__int128>(o.n) * d,
                static_cast<__int128>(d) * o.d);
  }
  F64 operator*(const F64& o) const {
    return make(static_cast<__int128>(n) * o.n, static_cast<__int128>(d) * o.d);
  }
  F64 operator/(const F64& o) const {
    if (o.n == 0) throw std::invalid_argument("division by zero");
    return make(static_cast<__int128>(n) * o.d, static_cast<__int128>(d) * o.n);
  }
  F64& operator+=(const F64& o) { return *this = *this + o; }
  F64& operator-=(const F64& o) { return *this = *this - o; }
  F64& operator/=(const F64& o) { return *this = *this / o; }

  int cmp0() const { return n > 0 ? 1 : (n < 0 ? -1 : 0); }
  bool operator==(const F64& o) const { return n == o.n && d == o.d; }
  bool operator<(const F64& o) const {
    return static_cast<__int128>(n) * o.d < static_cast<__int128>(o.n) * d;
  }
  bool operator>(const F64& o) const { return o < *this; }
  bool operator<=(const F64& o) const { return !(o < *this); }
  bool is_zero() const { return n == 0; }
};

template <class Q>
struct Num;

template <>
struct Num<F64> {
  static F64 from_rat(const Rat& r) {
    BigInt num = numerator(r), den = denominator(r);
    if (num > INT64_MAX / 4 || num < INT64_MIN / 4 || den > INT64_MAX / 4) throw Overflow{};
    return F64::make(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
  }
  static Rat to_rat(const F64& f) { return Rat(f.n, f.d); }
  static F64 zero() { return F64{}; }
  static F64 one() { return F64{1, 1}; }
  static bool pos(const F64& f) { return f.n > 0; }
  static bool neg(const F64& f) { return f.n < 0; }
  static bool zero_p(const F64& f) { return f.n == 0; }
};

template <>
struct Num<Rat> {
  static Rat from_rat(const Rat& r) { return r; }
  static Rat to_rat(const Rat& r) { return r; }
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static bool pos(const Rat& r) { return r > 0; }
  static bool neg(const Rat& r) { return r < 0; }
  static bool zero_p(const Rat& r) { return r == 0; }
};

// Dense tableau; rows are equalities over structural + slack + artificial
// columns, rhs >= 0 maintained throughout.
template <class Q>
struct Tableau {
  std::vector<std::vector<Q>> t;  // m rows x (ncols + 1), last col = rhs
  std::vector<int> basis;
  int ncols = 0;

  Q& at(std::size_t r, int c) { return t[r][static_cast<std::size_t>(c)]; }
  Q& rhs(std::size_t r) { return t[r][static_cast<std::size_t>(ncols)]; }

  void pivot(std::size_t prow, int pcol) {
    Q pv = at(prow, pcol);
    for (auto& v : t[prow]) v /= pv;
    for (std::size_t r = 0; r < t.size(); ++r) {
      if (r == prow) continue;
      Q f = at(r, pcol);
      if (Num<Q>::zero_p(f)) continue;
      for (int c = 0; c <= ncols; ++c) {
        Q delta = f * t[prow][static_cast<std::size_t>(c)];
        t[r][static_cast<std::size_t>(c)] -= delta;
      }
    }
    basis[prow] = pcol;
  }

  std::vector<Q> reduced_costs(const std::vector<Q>& obj) const {
    std::vector<Q> red(obj.begin(), obj.begin() + ncols);
    for (std::size_t r = 0; r < t.size(); ++r) {
      const Q& ob = obj[static_cast<std::size_t>(basis[r])];
      if (Num<Q>::zero_p(ob)) continue;
      for (int c = 0; c < ncols; ++c) {
        Q delta = ob * t[r][static_cast<std::size_t>(c)];
        red[static_cast<std::size_t>(c)] -= delta;
      }
    }
    return red;
  }

  // Dantzig entering rule, switching to Bland's once cycling is plausible.
  bool step(const std::vector<Q>& reduced, bool bland) {
    int enter = -1;
    for (int c = 0; c < ncols; ++c) {
      const Q& rc = reduced[static_cast<std::size_t>(c)];
      if (!Num<Q>::pos(rc)) continue;
      if (bland) {
        enter = c;
        break;
      }
      if (enter < 0 || reduced[static_cast<std::size_t>(enter)] < rc) enter = c;
    }
    if (enter < 0) return false;
    std::size_t leave = t.size();
    Q best = Num<Q>::zero();
    for (std::size_t r = 0; r < t.size(); ++r) {
      if (!Num<Q>::pos(at(r, enter))) continue;
      Q ratio = rhs(r) / at(r, enter);
      if (leave == t.size() || ratio < best ||
          (ratio == best && basis[r] < basis[leave]))
        best = ratio, leave = r;
    }
    if (leave == t.size()) throw LpStatus::unbounded;
    pivot(leave, enter);
    return true;
  }

  void optimize(const std::vector<Q>& obj) {
    long iters = 0;
    const long bland_after = 64 + 8 * static_cast<long>(t.size());
    while (step(reduced_costs(obj), iters++ > bland_after)) {
    }
  }

  Q objective_value(const std::vector<Q>& obj) const {
    Q v = Num<Q>::zero();
    for (std::size_t r = 0; r < t.size(); ++r) {
      Q delta = obj[static_cast<std::size_t>(basis[r])] *
                t[r][static_cast<std::size_t>(ncols)];
      v += delta;
    }
    return v;
  }
};

template <class Q>
LpResult solve_impl(const std::vector<std::vector<Rat>>& a, const std::vector<int>& rel,
                    const std::vector<Rat>& b, const std::vector<Rat>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();

  int nslack = 0, nart = 0;
  for (std::size_t r = 0; r < m; ++r) {
    bool flip = b[r] < 0;
    int eff = flip ? -rel[r] : rel[r];
    if (eff != 0) ++nslack;
    if (eff >= 0) ++nart;
  }

  Tableau<Q> tab;
  tab.ncols = static_cast<int>(n) + nslack + nart;
  tab.t.assign(m, std::vector<Q>(static_cast<std::size_t>(tab.ncols) + 1, Num<Q>::zero()));
  tab.basis.assign(m, -1);

  int scol = static_cast<int>(n);
  int acol = static_cast<int>(n) + nslack;
  std::vector<int> art_cols;
  for (std::size_t r = 0; r < m; ++r) {
    bool flip = b[r] < 0;
    int eff = flip ? -rel[r] : rel[r];
    for (std::size_t j = 0; j < n; ++j) {
      Q v = Num<Q>::from_rat(a[r][j]);
      if (flip) v = Num<Q>::zero() - v;
      tab.t[r][j] = v;
    }
    Q rv = Num<Q>::from_rat(b[r]);
    if (flip) rv = Num<Q>::zero() - rv;
    tab.rhs(r) = rv;
    if (eff < 0) {
      tab.at(r, scol) = Num<Q>::one();
      tab.basis[r] = scol++;
    } else if (eff > 0) {
      tab.at(r, scol) = Num<Q>::zero() - Num<Q>::one();
      ++scol;
      tab.at(r, acol) = Num<Q>::one();
      tab.basis[r] = acol;
      art_cols.push_back(acol++);
    } else {
      tab.at(r, acol) = Num<Q>::one();
      tab.basis[r] = acol;
      art_cols.push_back(acol++);
    }
  }

  LpResult out;
  try {
    if (!art_cols.empty()) {
      std::vector<Q> p1(static_cast<std::size_t>(tab.ncols), Num<Q>::zero());
      for (int ac : art_cols) p1[static_cast<std::size_t>(ac)] = Num<Q>::zero() - Num<Q>::one();
      tab.optimize(p1);
      if (!Num<Q>::zero_p(tab.objective_value(p1))) {
        out.status = LpStatus::infeasible;
        return out;
      }
      std::vector<char> is_art(static_cast<std::size_t>(tab.ncols), 0);
      for (int ac : art_cols) is_art[static_cast<std::size_t>(ac)] = 1;
      for (std::size_t r = 0; r < tab.t.size();) {
        if (!is_art[static_cast<std::size_t>(tab.basis[r])]) {
          ++r;
          continue;
        }
        int pivot_col = -1;
        for (int cc = 0; cc < static_cast<int>(n) + nslack; ++cc)
          if (!Num<Q>::zero_p(tab.at(r, cc))) {
            pivot_col = cc;
            break;
          }
        if (pivot_col >= 0) {
          tab.pivot(r, pivot_col);
          ++r;
        } else {
          tab.t.erase(tab.t.begin() + static_cast<std::ptrdiff_t>(r));
          tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(r));
        }
      }
      for (auto& row : tab.t)
        for (int ac : art_cols) row[static_cast<std::size_t>(ac)] = Num<Q>::zero();
    }

    std::vector<Q> obj(static_cast<std::size_t>(tab.ncols), Num<Q>::zero());
    for (std::size_t j = 0; j < n; ++j) obj[j] = Num<Q>::from_rat(c[j]);
    tab.optimize(obj);
    out.status = LpStatus::optimal;
    out.value = Num<Q>::to_rat(tab.objective_value(obj));
    out.x.assign(n, Rat(0));
    for (std::size_t r = 0; r < tab.t.size(); ++r)
      if (tab.basis[r] >= 0 && tab.basis[r] < static_cast<int>(n))
        out.x[static_cast<std::size_t>(tab.basis[r])] = Num<Q>::to_rat(tab.rhs(r));
    return out;
  } catch (LpStatus s) {
    out.status = s;
    return out;
  }
}

}  // namespace

LpResult solve_lp(const std::vector<std::vector<Rat>>& a, const std::vector<int>& rel,
                  const std::vector<Rat>& b, const std::vector<Rat>& c) {
  if (rel.size() != a.size() || b.size() != a.size())
    throw std::invalid_argument("lp shape mismatch");
  try {
    return solve_impl<F64>(a, rel, b, c);
  } catch (const Overflow&) {
    return solve_impl<Rat>(a, rel, b, c);
  }
}

}  // namespace xsb
