#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "gme/rng.hpp"
#include "gme/states.hpp"

namespace gme {

struct SurfaceSamples {
  std::vector<WStateParams> points;
  int skipped = 0;  // rays the root finder gave up on
};

/// Points on the separating surface r = r1 r2 r3 = 0: pin one factor to zero
/// (cycling through r1, r2, r3) and sample the two remaining circles. For
/// r1 = 0 the construction is b^2+c^2 = a^2+d^2 = 1/2 and so on.
inline SurfaceSamples sample_r0_surface(int count, std::uint64_t seed) {
  SurfaceSamples out;
  out.points.reserve(count);
  const double h = std::sqrt(0.5);
  for (int i = 0; i < count; ++i) {
    SplitMix64 rng = SplitMix64::keyed(seed, static_cast<std::uint64_t>(i));
    const double t1 = rng.uniform() * (std::numbers::pi / 2.0);
    const double t2 = rng.uniform() * (std::numbers::pi / 2.0);
    const double p1 = h * std::cos(t1), q1 = h * std::sin(t1);
    const double p2 = h * std::cos(t2), q2 = h * std::sin(t2);
    switch (i % 3) {
      case 0:  // r1 = 0: (a,d) and (b,c) each on a radius-sqrt(1/2) arc
        out.points.push_back(WStateParams(p2, p1, q1, q2));
        break;
      case 1:  // r2 = 0: a^2+c^2 = b^2+d^2 = 1/2
        out.points.push_back(WStateParams(p1, p2, q1, q2));
        break;
      default:  // r3 = 0: a^2+b^2 = c^2+d^2 = 1/2
        out.points.push_back(WStateParams(p1, q1, p2, q2));
        break;
    }
  }
  return out;
}

namespace detail {

inline double shared_surface_gap(const std::array<double, 4>& v) {
  const double l = std::max({v[0], v[1], v[2], v[3]});
  const double l2 = l * l;
  return l2 - 0.5 - (v[0] * v[1] * v[2] * v[3]) / l2;
}

inline std::array<double, 4> normalized4(std::array<double, 4> v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
  for (double& x : v) x /= n;
  return v;
}

inline std::array<double, 4> mix4(const std::array<double, 4>& x, const std::array<double, 4>& y) {
  return normalized4({x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]});
}

}  // namespace detail

/// Points on the separating surface l^2 = 1/2 + abcd/l^2, found by bisecting
/// the gap function along great-circle paths between a random direction and
/// an endpoint of known opposite sign (the symmetric state on the negative
/// side, the dominant basis direction on the positive side).
inline SurfaceSamples sample_shared_surface(int count, std::uint64_t seed) {
  SurfaceSamples out;
  out.points.reserve(count);
  const std::array<double, 4> symmetric{0.5, 0.5, 0.5, 0.5};  // gap = -1/2
  for (int i = 0; i < count; ++i) {
    SplitMix64 rng = SplitMix64::keyed(seed, static_cast<std::uint64_t>(i));
    const std::array<double, 4> w = sample_positive_unit4(rng);
    std::array<double, 4> lo, hi;  // gap(lo) < 0 <= gap(hi)
    if (detail::shared_surface_gap(w) > 0.0) {
      lo = symmetric;
      hi = w;
    } else {
      lo = w;
      hi = {0.0, 0.0, 0.0, 0.0};
      int arg = 0;
      for (int k = 1; k < 4; ++k)
        if (w[k] > w[arg]) arg = k;
      hi[arg] = 1.0;  // gap = +1/2
    }
    std::array<double, 4> mid{};
    bool found = false;
    for (int it = 0; it < 200; ++it) {
      mid = detail::mix4(lo, hi);
      const double gap = detail::shared_surface_gap(mid);
      if (std::abs(gap) <= 1e-12) {
        found = true;
        break;
      }
      (gap > 0.0 ? hi : lo) = mid;
    }
    if (!found) {
      ++out.skipped;
      continue;
    }
    out.points.push_back(WStateParams(mid[0], mid[1], mid[2], mid[3]));
  }
  return out;
}

}  // namespace gme
