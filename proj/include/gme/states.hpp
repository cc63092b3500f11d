#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace gme {

namespace detail {

inline void require_normalized(double norm_sq, const char* what) {
  if (std::abs(norm_sq - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(what) +
                                ": squared norm deviates from 1 by more than 1e-9; "
                                "renormalize to proceed");
}

}  // namespace detail

/// Coefficients (a,b,c,d) of the four-term state
/// a|100> + b|010> + c|001> + d|111>, nonnegative and normalized.
///
/// The constructor rejects inputs with |a^2+b^2+c^2+d^2 - 1| > 1e-9 and then
/// divides by the norm, so stored coefficients satisfy the normalization to
/// machine precision. Use renormalized() when the input is only a direction.
struct WStateParams {
  double a, b, c, d;

  WStateParams(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    if (a < 0 || b < 0 || c < 0 || d < 0)
      throw std::invalid_argument("WStateParams: coefficients must be nonnegative");
    const double n2 = a * a + b * b + c * c + d * d;
    detail::require_normalized(n2, "WStateParams");
    // store machine-normalized inputs verbatim; dividing would cost a ulp and
    // break bitwise permutation invariance of l and s
    if (std::abs(n2 - 1.0) > 1e-13) {
      const double n = std::sqrt(n2);
      a /= n; b /= n; c /= n; d /= n;
    }
  }

  static WStateParams renormalized(double a, double b, double c, double d) {
    if (a < 0 || b < 0 || c < 0 || d < 0)
      throw std::invalid_argument("WStateParams: coefficients must be nonnegative");
    const double n = std::sqrt(a * a + b * b + c * c + d * d);
    if (n < 1e-150) throw std::invalid_argument("WStateParams: zero vector");
    return WStateParams(a / n, b / n, c / n, d / n);
  }

  std::array<double, 4> coeffs() const { return {a, b, c, d}; }
};

/// Arbitrary pure state of three qubits. Amplitude array is indexed by
/// qA*4 + qB*2 + qC with q in {0,1}; this storage order is fixed here and
/// assumed everywhere else.
struct ThreeQubitPureState {
  std::array<std::complex<double>, 8> amp{};

  explicit ThreeQubitPureState(const std::array<std::complex<double>, 8>& amplitudes)
      : amp(amplitudes) {
    double n2 = 0.0;
    for (const auto& z : amp) n2 += std::norm(z);
    detail::require_normalized(n2, "ThreeQubitPureState");
    if (std::abs(n2 - 1.0) > 1e-13) {
      const double n = std::sqrt(n2);
      for (auto& z : amp) z /= n;
    }
  }

  static ThreeQubitPureState renormalized(std::array<std::complex<double>, 8> amplitudes) {
    double n2 = 0.0;
    for (const auto& z : amplitudes) n2 += std::norm(z);
    if (n2 < 1e-300) throw std::invalid_argument("ThreeQubitPureState: zero vector");
    const double n = std::sqrt(n2);
    for (auto& z : amplitudes) z /= n;
    return ThreeQubitPureState(amplitudes);
  }

  static constexpr int index(int q_a, int q_b, int q_c) { return q_a * 4 + q_b * 2 + q_c; }
};

inline ThreeQubitPureState embed_w_state(const WStateParams& p) {
  std::array<std::complex<double>, 8> amp{};
  amp[ThreeQubitPureState::index(1, 0, 0)] = p.a;
  amp[ThreeQubitPureState::index(0, 1, 0)] = p.b;
  amp[ThreeQubitPureState::index(0, 0, 1)] = p.c;
  amp[ThreeQubitPureState::index(1, 1, 1)] = p.d;
  return ThreeQubitPureState(amp);
}

/// Scalars every closed-form expression is written in.
///   r1 = b^2+c^2-a^2-d^2   (and cyclic variants for r2, r3)
///   omega = ab+dc, mu = ab-dc
///   p = (a+b+c+d)/2, l = max coefficient, s = min coefficient, r = r1*r2*r3
struct ReducedInvariants {
  double r1, r2, r3;
  double omega, mu;
  double p;
  double l, s;
  double r;
};

inline ReducedInvariants reduced_invariants(const WStateParams& w) {
  const double a = w.a, b = w.b, c = w.c, d = w.d;
  ReducedInvariants inv{};
  inv.r1 = b * b + c * c - a * a - d * d;
  inv.r2 = a * a + c * c - b * b - d * d;
  inv.r3 = a * a + b * b - c * c - d * d;
  inv.omega = a * b + d * c;
  inv.mu = a * b - d * c;
  inv.p = (a + b + c + d) / 2.0;
  inv.l = std::max({a, b, c, d});
  inv.s = std::min({a, b, c, d});
  inv.r = inv.r1 * inv.r2 * inv.r3;
  return inv;
}

}  // namespace gme
