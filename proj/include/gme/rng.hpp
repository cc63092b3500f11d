#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "gme/linalg.hpp"

namespace gme {

/// splitmix64 stream. Bit-reproducible across platforms, unlike the std
/// distributions, which is what seeded runs here require.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  /// Stream keyed by (seed, stream index): restarts and samples get
  /// independent deterministic streams regardless of evaluation order.
  static SplitMix64 keyed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 mixer(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    return SplitMix64(mixer.next());
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; u1 shifted away from zero.
  double gaussian() {
    const double u1 = (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

/// Uniform point on the unit sphere.
inline Vec3 sample_unit_vector(SplitMix64& rng) {
  Vec3 v;
  do {
    v = Vec3{rng.gaussian(), rng.gaussian(), rng.gaussian()};
  } while (v.norm() < 1e-12);
  return v.normalized();
}

/// Uniform point on the nonnegative orthant of S^3, as (a,b,c,d) coefficients.
inline std::array<double, 4> sample_positive_unit4(SplitMix64& rng) {
  std::array<double, 4> v{};
  double n = 0.0;
  do {
    n = 0.0;
    for (double& c : v) {
      c = std::abs(rng.gaussian());
      n += c * c;
    }
  } while (n < 1e-12);
  n = std::sqrt(n);
  for (double& c : v) c /= n;
  return v;
}

}  // namespace gme
