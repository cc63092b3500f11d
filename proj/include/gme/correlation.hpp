#pragma once

#include <array>
#include <complex>

#include "gme/linalg.hpp"
#include "gme/states.hpp"

namespace gme {

/// Bloch vectors of the A and B single-qubit reductions plus the two-point
/// correlation matrix g_ij = tr(rho^AB sigma_i (x) sigma_j).
struct CorrelationData {
  Vec3 r_a;
  Vec3 r_b;
  Mat3 g;
};

namespace detail {

using Amps = std::array<std::complex<double>, 8>;

/// Apply sigma_axis (0=x,1=y,2=z) to the qubit addressed by `bit`
/// (bit 2 = qubit A, bit 1 = B, bit 0 = C). Convention: sigma_z|0> = +|0>.
inline Amps apply_pauli(const Amps& in, int bit, int axis) {
  Amps out{};
  const int mask = 1 << bit;
  for (int s = 0; s < 8; ++s) {
    const bool one = (s & mask) != 0;
    switch (axis) {
      case 0:  // sigma_x: flip
        out[s ^ mask] += in[s];
        break;
      case 1:  // sigma_y: |0> -> i|1>, |1> -> -i|0>
        out[s ^ mask] += std::complex<double>(0.0, one ? -1.0 : 1.0) * in[s];
        break;
      default:  // sigma_z
        out[s] += (one ? -1.0 : 1.0) * in[s];
        break;
    }
  }
  return out;
}

inline double expectation(const Amps& psi, const Amps& op_psi) {
  std::complex<double> e = 0.0;
  for (int s = 0; s < 8; ++s) e += std::conj(psi[s]) * op_psi[s];
  return e.real();
}

}  // namespace detail

/// Computed by applying Pauli operators directly to the 8-amplitude vector;
/// the tests cross-check against an explicit density-matrix partial trace.
inline CorrelationData correlation_data(const ThreeQubitPureState& state) {
  const auto& psi = state.amp;
  CorrelationData out{};
  std::array<detail::Amps, 3> sig_a, sig_b;
  for (int i = 0; i < 3; ++i) {
    sig_a[i] = detail::apply_pauli(psi, 2, i);
    sig_b[i] = detail::apply_pauli(psi, 1, i);
  }
  out.r_a = {detail::expectation(psi, sig_a[0]), detail::expectation(psi, sig_a[1]),
             detail::expectation(psi, sig_a[2])};
  out.r_b = {detail::expectation(psi, sig_b[0]), detail::expectation(psi, sig_b[1]),
             detail::expectation(psi, sig_b[2])};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out.g(i, j) = detail::expectation(sig_a[i], sig_b[j]);
    }
  }
  return out;
}

}  // namespace gme
