#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace xsb {

// Counter-based generator: every drawn value is a pure function of
// (seed, stream, counter), so parallel restarts are reproducible no matter
// how they are scheduled.
struct CounterRng {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(mix(seed ^ mix(stream)) + counter);
  }

  // Uniform in [0,1).
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // Standard complex gaussian via Box-Muller.
  std::complex<double> gaussian(std::uint64_t counter) const {
    double u1 = uniform(2 * counter);
    double u2 = uniform(2 * counter + 1);
    if (u1 < 1e-300) u1 = 1e-300;
    double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
  }

  // Integer in [0, n).
  std::uint64_t below(std::uint64_t counter, std::uint64_t n) const {
    return bits(counter) % n;
  }
};

}  // namespace xsb
