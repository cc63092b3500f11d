#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "gme/correlation.hpp"
#include "gme/errors.hpp"
#include "gme/family.hpp"
#include "gme/linalg.hpp"
#include "gme/quadrilateral.hpp"
#include "gme/states.hpp"

namespace gme {

/// Which closed-form expression applies.
enum class Regime {
  ConvexQuadrangle,     // lambda^2 = 4 R_q^2
  LargestCoefficient,   // lambda^2 = l^2
  SharedConvexLargest,  // on l^2 = 1/2 + abcd/l^2, both branches agree
  SharedDiagonal,       // on r = 0, lambda^2 = 1/2 exactly
  CrossedQuadrangle,    // research path for signed coefficients only
};

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::ConvexQuadrangle: return "ConvexQuadrangle";
    case Regime::LargestCoefficient: return "LargestCoefficient";
    case Regime::SharedConvexLargest: return "SharedConvexLargest";
    case Regime::SharedDiagonal: return "SharedDiagonal";
    case Regime::CrossedQuadrangle: return "CrossedQuadrangle";
  }
  return "?";
}

/// Classifier boundary tolerance. Absolute: all classifier inputs are
/// order-1 for normalized coefficients.
inline constexpr double regime_epsilon = 1e-10;

/// Complete product state: Bloch vectors for qubits A and B plus the
/// reconstructed qubit-C spinor.
struct ProductState {
  Vec3 u;
  Vec3 v;
  std::array<std::complex<double>, 2> qubit_c;

  ThreeQubitPureState to_state() const;
};

struct MeasureResult {
  double lambda_max_sq;
  double geometric_measure;  // 1 - lambda_max_sq
  Regime regime;
  ProductState closest_product;
  std::optional<std::pair<double, double>> lagrange;  // (lambda1, lambda2), convex branch
  double overlap_residual;  // | |<product|psi>|^2 - lambda_max_sq |
};

namespace detail {

/// Spinor of the qubit pointing along unit Bloch vector u.
inline std::array<std::complex<double>, 2> bloch_spinor(const Vec3& u) {
  const double uz = std::clamp(u.z, -1.0, 1.0);
  const double a0 = std::sqrt((1.0 + uz) / 2.0);
  const double a1 = std::sqrt((1.0 - uz) / 2.0);
  const double phi = (std::abs(u.x) + std::abs(u.y) > 0.0) ? std::atan2(u.y, u.x) : 0.0;
  return {std::complex<double>(a0, 0.0), std::polar(a1, phi)};
}

/// Unnormalized qubit-C state obtained by projecting psi onto the (alpha,
/// beta) product of qubits A and B. Its squared norm is the maximal overlap
/// of psi with alpha (x) beta (x) anything.
inline std::array<std::complex<double>, 2> conditional_qubit_c(
    const std::array<std::complex<double>, 8>& psi,
    const std::array<std::complex<double>, 2>& alpha,
    const std::array<std::complex<double>, 2>& beta) {
  std::array<std::complex<double>, 2> gamma{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        gamma[k] += std::conj(alpha[i]) * std::conj(beta[j]) * psi[i * 4 + j * 2 + k];
  return gamma;
}

inline double sign_or_positive(double x) { return x < 0.0 ? -1.0 : 1.0; }

struct ProductBuild {
  ProductState product;
  double overlap;  // |<product|psi>|^2
  std::optional<std::pair<double, double>> lagrange;
};

/// Largest-coefficient branch: u = Sign(r1) k, v = Sign(r2) k, qubit C by
/// conditional projection.
inline ProductBuild build_aligned_product(const WStateParams& w, const ReducedInvariants& inv) {
  ProductBuild out{};
  out.product.u = {0.0, 0.0, sign_or_positive(inv.r1)};
  out.product.v = {0.0, 0.0, sign_or_positive(inv.r2)};
  const auto psi = embed_w_state(w).amp;
  const auto alpha = bloch_spinor(out.product.u);
  const auto beta = bloch_spinor(out.product.v);
  auto gamma = conditional_qubit_c(psi, alpha, beta);
  out.overlap = std::norm(gamma[0]) + std::norm(gamma[1]);
  const double n = std::sqrt(out.overlap);
  if (n > 1e-150) {
    gamma[0] /= n;
    gamma[1] /= n;
  } else {
    gamma = {1.0, 0.0};
  }
  out.product.qubit_c = gamma;
  return out;
}

/// Convex branch: multipliers from the quadratic factorization, z-components
/// of u and v from the stationarity system, x-components fixed by unit norm
/// with both signs taken nonnegative (the global product phase is
/// unphysical; only the product of signs is constrained).
inline ProductBuild build_convex_product(const WStateParams& w, const ReducedInvariants& inv,
                                         bool strict_convex) {
  const double a = w.a, b = w.b, c = w.c, d = w.d;
  const double den = 4.0 * inv.omega * inv.omega - inv.r3 * inv.r3;
  const double lambda1 = 2.0 * inv.omega * (b * c + a * d) / (a * c + b * d);
  const double lambda2 = 2.0 * inv.omega * (a * c + b * d) / (b * c + a * d);
  const double uk = (lambda2 * inv.r1 - inv.r2 * inv.r3) / den;
  const double vk = (lambda1 * inv.r2 - inv.r1 * inv.r3) / den;
  const double ux = std::sqrt(std::max(0.0, 1.0 - uk * uk));
  const double vx = std::sqrt(std::max(0.0, 1.0 - vk * vk));
  if (strict_convex && (ux < 1e-10 || vx < 1e-10))
    throw DegenerateDirection(
        "closest_product_state: x component vanished in the convex regime "
        "(largest-coefficient boundary)");

  ProductBuild out{};
  out.product.u = {ux, 0.0, uk};
  out.product.v = {vx, 0.0, vk};
  out.lagrange = std::make_pair(lambda1, lambda2);
  const auto psi = embed_w_state(w).amp;
  const auto alpha = bloch_spinor(out.product.u);
  const auto beta = bloch_spinor(out.product.v);
  auto gamma = conditional_qubit_c(psi, alpha, beta);
  out.overlap = std::norm(gamma[0]) + std::norm(gamma[1]);
  const double n = std::sqrt(out.overlap);
  gamma[0] /= n;
  gamma[1] /= n;
  out.product.qubit_c = gamma;
  return out;
}

}  // namespace detail

inline ThreeQubitPureState ProductState::to_state() const {
  const auto alpha = detail::bloch_spinor(u);
  const auto beta = detail::bloch_spinor(v);
  std::array<std::complex<double>, 8> amp{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) amp[i * 4 + j * 2 + k] = alpha[i] * beta[j] * qubit_c[k];
  return ThreeQubitPureState(amp);
}

/// Validity-domain classifier. SharedDiagonal (r = 0) takes precedence: the
/// entanglement eigenvalue is the constant 1/2 there, the stronger statement.
inline Regime classify(const WStateParams& w) {
  const ReducedInvariants inv = reduced_invariants(w);
  const double l2 = inv.l * inv.l;
  const double boundary = 0.5 + (w.a * w.b * w.c * w.d) / l2;
  if (std::abs(inv.r) <= regime_epsilon) return Regime::SharedDiagonal;
  if (std::abs(l2 - boundary) <= regime_epsilon) return Regime::SharedConvexLargest;
  return l2 < boundary ? Regime::ConvexQuadrangle : Regime::LargestCoefficient;
}

/// Entanglement eigenvalue with regime, closest product state, multipliers
/// where defined, and the overlap self-check residual. The geometric measure
/// is 1 - lambda_max_sq.
inline MeasureResult lambda_max_sq(const WStateParams& w) {
  const ReducedInvariants inv = reduced_invariants(w);
  const Regime regime = classify(w);
  const double l2 = inv.l * inv.l;
  const double den = 4.0 * inv.omega * inv.omega - inv.r3 * inv.r3;

  double value = 0.0;
  detail::ProductBuild build{};
  switch (regime) {
    case Regime::SharedDiagonal:
      value = 0.5;
      // interior of the convex domain unless the quadrilateral degenerates
      build = (den > detail::tol_deg(inv.p, 4))
                  ? detail::build_convex_product(w, inv, /*strict_convex=*/false)
                  : detail::build_aligned_product(w, inv);
      break;
    case Regime::SharedConvexLargest:
      value = l2;
      build = detail::build_aligned_product(w, inv);
      break;
    case Regime::LargestCoefficient:
      value = l2;
      build = detail::build_aligned_product(w, inv);
      break;
    case Regime::ConvexQuadrangle:
    default:
      if (den > detail::tol_deg(inv.p, 4)) {
        value = 4.0 * detail::convex_radius_numerator(w.a, w.b, w.c, w.d) / den;
        build = detail::build_convex_product(w, inv, /*strict_convex=*/true);
      } else {
        // S_q^2 -> 0 sits outside the convex validity domain
        value = l2;
        build = detail::build_aligned_product(w, inv);
      }
      break;
  }

  MeasureResult out{};
  out.lambda_max_sq = value;
  out.geometric_measure = 1.0 - value;
  out.regime = regime;
  out.closest_product = build.product;
  out.lagrange = build.lagrange;
  out.overlap_residual = std::abs(build.overlap - value);
  return out;
}

/// Closest complete product state alone.
inline ProductState closest_product_state(const WStateParams& w) {
  return lambda_max_sq(w).closest_product;
}

/// Research path: the crossed-quadrangle branch evaluated on a signed
/// coefficient tuple (normalized). Valid under l^2 <= 1/2 - abcd/l^2 with
/// r <= 0; on r = 0 it returns the constant 1/2, the common limit of both
/// circumradius branches. Upper sign of the multiplier pair; the lower sign
/// reproduces the zero eigenvalue of the reduced state and is not computed.
inline double crossed_branch_lambda(const std::array<double, 4>& coeffs) {
  const double a = coeffs[0], b = coeffs[1], c = coeffs[2], d = coeffs[3];
  const double n2 = a * a + b * b + c * c + d * d;
  if (std::abs(n2 - 1.0) > 1e-9)
    throw std::invalid_argument("crossed_branch_lambda: coefficients must be normalized");

  const double r1 = b * b + c * c - a * a - d * d;
  const double r2 = a * a + c * c - b * b - d * d;
  const double r3 = a * a + b * b - c * c - d * d;
  if (std::abs(r1 * r2 * r3) <= regime_epsilon) return 0.5;

  const double num = detail::crossed_radius_numerator(a, b, c, d);
  if (num < 0.0)
    throw NoCircumcircle(NoCircumcircle::Reason::NegativeNumerator,
                         "crossed branch: (ac-bd)(bc-ad)(ab-cd) < 0");
  const double area_sq = detail::crossed_area_sq_raw(a, b, c, d);
  const double scale = detail::scale_of(a, b, c, d);
  if (area_sq <= detail::tol_deg(scale, 4))
    throw NoCircumcircle(NoCircumcircle::Reason::NonpositiveCrossedArea,
                         "crossed branch: S_x^2 <= 0");
  return num / (4.0 * area_sq);  // 4 R_x^2
}

struct SweepEntry {
  double t;
  WStateParams params;
  MeasureResult result;
  bool regime_change;  // differs from the previous grid point
};

/// Evaluate the family on an inclusive uniform grid of `steps` points.
inline std::vector<SweepEntry> sweep(const FamilySpec& family, double lo, double hi, int steps) {
  if (steps < 1) throw std::invalid_argument("sweep: steps must be >= 1");
  std::vector<SweepEntry> out;
  out.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double t = (steps == 1) ? lo : lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
    WStateParams params = family.at(t);
    MeasureResult res = lambda_max_sq(params);
    const bool change = !out.empty() && out.back().result.regime != res.regime;
    out.push_back(SweepEntry{t, params, res, change});
  }
  return out;
}

}  // namespace gme
