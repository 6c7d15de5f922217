#pragma once

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace xsb {

using cplx = std::complex<double>;

// Global switch between the OpenMP kernels and the serial reference path.
// Kernels are written so that both paths produce bitwise-identical results:
// work is split into fixed-size chunks independent of the thread count and
// partials are combined in a fixed order.
inline bool& parallel_enabled() {
  static bool enabled = [] {
    const char* env = std::getenv("XSB_SERIAL");
    return !(env && env[0] == '1');
  }();
  return enabled;
}

inline int worker_count() {
#ifdef _OPENMP
  return parallel_enabled() ? omp_get_max_threads() : 1;
#else
  return 1;
#endif
}

// Tree (pairwise) reduction. Summation order depends only on the element
// order, so results are reproducible.
template <typename T>
T pairwise_sum(std::span<const T> v) {
  if (v.empty()) return T{};
  std::vector<T> buf(v.begin(), v.end());
  std::size_t n = buf.size();
  while (n > 1) {
    std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) buf[i] = buf[2 * i] + buf[2 * i + 1];
    if (n % 2) {
      buf[half] = buf[n - 1];
      ++half;
    }
    n = half;
  }
  return buf[0];
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(std::span<const T>(v));
}

// Sorts complex terms by bit pattern before the pairwise reduction.  The
// result then depends only on the multiset of terms, not on their order of
// production; translated/permuted reruns of the same computation reproduce
// sums bitwise.
inline cplx sorted_pairwise_sum(std::vector<cplx>& terms) {
  auto key = [](const cplx& z) {
    auto bits = [](double d) {
      std::uint64_t u = std::bit_cast<std::uint64_t>(d);
      return u;
    };
    return std::pair<std::uint64_t, std::uint64_t>(bits(z.real()), bits(z.imag()));
  };
  std::sort(terms.begin(), terms.end(),
            [&](const cplx& a, const cplx& b) { return key(a) < key(b); });
  return pairwise_sum(std::span<const cplx>(terms));
}

// Deterministic parallel map-reduce over [0, n): fixed chunking, chunk
// partials combined pairwise in index order regardless of thread count.
template <typename Partial, typename ChunkFn>
Partial chunked_reduce(std::int64_t n, std::int64_t chunk, ChunkFn&& fn) {
  if (n <= 0) return Partial{};
  std::int64_t nchunks = (n + chunk - 1) / chunk;
  std::vector<Partial> partials(static_cast<std::size_t>(nchunks));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel_enabled() && nchunks > 1)
#endif
  for (std::int64_t c = 0; c < nchunks; ++c) {
    std::int64_t lo = c * chunk;
    std::int64_t hi = std::min(n, lo + chunk);
    partials[static_cast<std::size_t>(c)] = fn(lo, hi);
  }
  return pairwise_sum(std::span<const Partial>(partials));
}

}  // namespace xsb
