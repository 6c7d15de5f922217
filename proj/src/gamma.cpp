#include "xsb/gamma.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace xsb {

void check_same_group(const MultiplierK& m, const std::vector<GridFunction>& fs) {
  if (static_cast<int>(fs.size()) != m.k())
    throw std::invalid_argument("expected k grid functions");
  for (const auto& f : fs)
    if (!(f.group == m.group()))
      throw std::invalid_argument("grid function group mismatch");
}

namespace {

double gamma_weight(const GroupSpec& g, int k) {
  return std::pow(g.point_measure_d(), k - 1);
}

// Sum over the free (k-1)-tuple values in [lo, hi) of the mixed-radix
// enumeration; sequential within a chunk.
cplx chunk_sum(const MultiplierK& m, const std::vector<GridFunction>& fs,
               std::int64_t lo, std::int64_t hi) {
  const int k = m.k();
  const GroupSpec& g = m.group();
  const std::int64_t total = g.total_points();
  std::array<std::int64_t, 8> pts{};
  cplx acc{};
  for (std::int64_t flat = lo; flat < hi; ++flat) {
    std::int64_t rest = flat;
    for (int j = k - 2; j >= 0; --j) {
      pts[static_cast<std::size_t>(j)] = rest % total;
      rest /= total;
    }
    auto last = g.forced_last(pts.data(), k - 1);
    if (!last) continue;
    pts[static_cast<std::size_t>(k - 1)] = *last;
    cplx v = m.eval(pts.data());
    if (v == cplx{}) continue;
    for (int j = 0; j < k; ++j) v *= fs[static_cast<std::size_t>(j)]
                                        .values[static_cast<std::size_t>(pts[static_cast<std::size_t>(j)])];
    acc += v;
  }
  return acc;
}

}  // namespace

cplx gamma_integrate(const MultiplierK& m, const std::vector<GridFunction>& fs) {
  check_same_group(m, fs);
  if (m.has_precomputed_support()) return gamma_integrate_support(m, fs);
  const int k = m.k();
  std::int64_t n = 1;
  for (int j = 0; j + 1 < k; ++j) n *= m.group().total_points();
  cplx s = chunked_reduce<cplx>(n, 4096, [&](std::int64_t lo, std::int64_t hi) {
    return chunk_sum(m, fs, lo, hi);
  });
  return s * gamma_weight(m.group(), k);
}

cplx gamma_integrate_serial(const MultiplierK& m, const std::vector<GridFunction>& fs) {
  bool saved = parallel_enabled();
  parallel_enabled() = false;
  cplx v = gamma_integrate(m, fs);
  parallel_enabled() = saved;
  return v;
}

cplx gamma_integrate_support(const MultiplierK& m, const std::vector<GridFunction>& fs) {
  check_same_group(m, fs);
  const Support& s = m.support();
  const int k = m.k();
  std::int64_t n = static_cast<std::int64_t>(s.size());
  cplx acc = chunked_reduce<cplx>(n, 4096, [&](std::int64_t lo, std::int64_t hi) {
    cplx a{};
    for (std::int64_t e = lo; e < hi; ++e) {
      const std::int64_t* t = s.tuple(static_cast<std::size_t>(e));
      cplx v = s.values[static_cast<std::size_t>(e)];
      for (int j = 0; j < k; ++j)
        v *= fs[static_cast<std::size_t>(j)].values[static_cast<std::size_t>(t[j])];
      a += v;
    }
    return a;
  });
  return acc * gamma_weight(m.group(), k);
}

namespace {

// Cyclic DFT along one axis; radix-2 when the length is a power of two,
// direct evaluation otherwise (small lengths only in practice).
void dft_1d(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 1) return;
  if ((n & (n - 1)) == 0) {
    for (std::size_t i = 1, j = 0; i < n; ++i) {
      std::size_t bit = n >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
      double ang = 2 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1 : -1);
      cplx wl(std::cos(ang), std::sin(ang));
      for (std::size_t i = 0; i < n; i += len) {
        cplx w(1.0);
        for (std::size_t j = 0; j < len / 2; ++j) {
          cplx u = a[i + j], v = a[i + j + len / 2] * w;
          a[i + j] = u + v;
          a[i + j + len / 2] = u - v;
          w *= wl;
        }
      }
    }
  } else {
    std::vector<cplx> out(n);
    for (std::size_t f = 0; f < n; ++f) {
      cplx acc{};
      for (std::size_t x = 0; x < n; ++x) {
        double ang = 2 * std::numbers::pi * static_cast<double>(f * x % n) /
                     static_cast<double>(n) * (inverse ? 1 : -1);
        acc += a[x] * cplx(std::cos(ang), std::sin(ang));
      }
      out[f] = acc;
    }
    a = std::move(out);
  }
  if (inverse)
    for (auto& v : a) v /= static_cast<double>(n);
}

// In-place DFT of a multi-axis array along axis `ax`.
void dft_axis(std::vector<cplx>& data, const std::vector<std::size_t>& dims,
              std::size_t ax, bool inverse) {
  std::size_t n = dims[ax];
  std::size_t stride = 1;
  for (std::size_t a = ax + 1; a < dims.size(); ++a) stride *= dims[a];
  std::size_t outer = data.size() / (n * stride);
  std::vector<cplx> line(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < stride; ++s) {
      std::size_t base = o * n * stride + s;
      for (std::size_t i = 0; i < n; ++i) line[i] = data[base + i * stride];
      dft_1d(line, inverse);
      for (std::size_t i = 0; i < n; ++i) data[base + i * stride] = line[i];
    }
  }
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

cplx gamma_integrate_fast(const MultiplierK& m, const std::vector<GridFunction>& fs) {
  check_same_group(m, fs);
  if (m.k() != 3) throw std::invalid_argument("fast path requires k = 3");
  if (!m.factored())
    throw std::invalid_argument("fast path requires a separable multiplier");
  const GroupSpec& g = m.group();
  const int axes = g.axes();

  // Padded axis lengths: exact cyclic size for modular axes, >= 3M for
  // truncated ones so that a zero residue forces a zero integer sum.
  std::vector<std::size_t> dims(static_cast<std::size_t>(axes));
  bool pow2_ok = true;
  for (int a = 0; a < axes; ++a) {
    std::size_t n = static_cast<std::size_t>(g.axis_points(a));
    bool trunc = !g.modular() || a >= g.dim();
    dims[static_cast<std::size_t>(a)] = trunc ? next_pow2(3 * n) : n;
    if (trunc) continue;
    if ((n & (n - 1)) != 0 && n > 64) pow2_ok = false;
  }
  if (!pow2_ok)
    throw std::invalid_argument("group does not support fast cyclic convolution");

  std::size_t padded = 1;
  for (auto d : dims) padded *= d;

  // g_j = factor_j * f_j embedded into the padded array; truncated axes place
  // offset o at slot o mod P.
  std::array<std::vector<cplx>, 3> emb;
  for (int j = 0; j < 3; ++j) {
    emb[static_cast<std::size_t>(j)].assign(padded, cplx{});
    const auto& fac = m.factors()[static_cast<std::size_t>(j)];
    for (std::int64_t i = 0; i < g.total_points(); ++i) {
      cplx v = fac[static_cast<std::size_t>(i)] *
               fs[static_cast<std::size_t>(j)].values[static_cast<std::size_t>(i)];
      if (v == cplx{}) continue;
      std::array<std::int32_t, GroupSpec::kMaxAxes> c{};
      g.decode(i, c);
      std::size_t flat = 0;
      for (int a = 0; a < axes; ++a) {
        bool trunc = !g.modular() || a >= g.dim();
        std::size_t n = dims[static_cast<std::size_t>(a)];
        std::size_t slot;
        if (trunc) {
          std::int64_t o = g.offset(a, c[static_cast<std::size_t>(a)]);
          slot = static_cast<std::size_t>((o % static_cast<std::int64_t>(n) +
                                           static_cast<std::int64_t>(n)) %
                                          static_cast<std::int64_t>(n));
        } else {
          slot = static_cast<std::size_t>(c[static_cast<std::size_t>(a)]);
        }
        flat = flat * n + slot;
      }
      emb[static_cast<std::size_t>(j)][flat] += v;
    }
  }

  for (int j = 0; j < 3; ++j)
    for (std::size_t a = 0; a < dims.size(); ++a)
      dft_axis(emb[static_cast<std::size_t>(j)], dims, a, false);

  // (g1 * g2 * g3)(0) = (1/P) sum_f G1 G2 G3.
  std::vector<cplx> prod(padded);
  for (std::size_t i = 0; i < padded; ++i) prod[i] = emb[0][i] * emb[1][i] * emb[2][i];
  cplx total = pairwise_sum(prod);
  total /= static_cast<double>(padded);
  return total * std::pow(g.point_measure_d(), 2);
}

}  // namespace xsb
