#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>

#include "relaymix/errors.hpp"

namespace relaymix {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stateless mix of two words; used to derive nested substream seeds.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a ^ (b * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  splitmix64(x);
  return splitmix64(x);
}

// xoshiro256++ seeded through splitmix64. Every Monte Carlo realization gets
// its own substream keyed by (seed, index), so results do not depend on how
// realizations are partitioned across workers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
  }

  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix64(seed, index));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1); safe as a log or inverse-CDF argument.
  double u01_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // Box-Muller pair of independent standard normals.
  std::pair<double, double> normal_pair() {
    const double r = std::sqrt(-2.0 * std::log(u01_open()));
    const double t = 6.283185307179586476925286766559 * u01();
    return {r * std::cos(t), r * std::sin(t)};
  }

  // Circularly symmetric complex coefficient with E|h|^2 = 1.
  std::complex<double> unit_fading() {
    auto [a, b] = normal_pair();
    return {a * 0x1.6a09e667f3bcdp-1, b * 0x1.6a09e667f3bcdp-1};  // 1/sqrt(2)
  }

  double exponential() { return -std::log(u01_open()); }

  double rayleigh(double sigma) {
    return sigma * std::sqrt(-2.0 * std::log(u01_open()));
  }

  // Exact Poisson sampling (Knuth product method, chunked so the loop count
  // stays bounded). Means beyond 2e5 are refused rather than silently slow.
  std::uint64_t poisson(double mean) {
    if (!(mean >= 0.0)) throw Error("poisson mean must be non-negative");
    if (mean > 2e5)
      throw Error("poisson mean " + std::to_string(mean) +
                  " too large for exact sampling; shrink the window");
    std::uint64_t total = 0;
    while (mean > 500.0) {
      total += poisson_knuth(500.0);
      mean -= 500.0;
    }
    return total + poisson_knuth(mean);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t poisson_knuth(double mean) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= u01_open();
    } while (p > limit);
    return k - 1;
  }

  std::uint64_t s_[4];
};

}  // namespace relaymix
