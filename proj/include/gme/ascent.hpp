#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gme/correlation.hpp"
#include "gme/errors.hpp"
#include "gme/linalg.hpp"
#include "gme/measure.hpp"
#include "gme/rng.hpp"
#include "gme/states.hpp"

namespace gme {

struct OracleConfig {
  int restarts = 32;
  int max_iterations = 10000;
  double convergence_threshold = 1e-13;  // on successive objective change
  std::uint64_t rng_seed = 0;
};

struct RestartStatus {
  int iterations = 0;
  bool converged = false;
  double value = 0.0;
};

struct AscentResult {
  double lambda_sq = 0.0;       // best converged objective value
  double direct_overlap = 0.0;  // |<alpha beta gamma|psi>|^2 from the tensor route
  ProductState product;
  int best_restart = -1;
  std::vector<RestartStatus> restarts;
};

namespace detail {

inline double ascent_objective(const CorrelationData& cd, const Vec3& u, const Vec3& v) {
  return 0.25 * (1.0 + u.dot(cd.r_a) + v.dot(cd.r_b) + u.dot(cd.g * v));
}

/// Three-way alternating updates on the full amplitude tensor: each factor is
/// replaced by the normalized contraction of the state with the other two.
/// Returns |<alpha beta gamma|psi>|^2 at the last gamma update.
inline double tensor_alternating(const std::array<std::complex<double>, 8>& psi,
                                 std::array<std::complex<double>, 2>& alpha,
                                 std::array<std::complex<double>, 2>& beta,
                                 std::array<std::complex<double>, 2>& gamma,
                                 int max_iterations, double threshold) {
  auto contract = [&psi](const std::array<std::complex<double>, 2>& f1,
                         const std::array<std::complex<double>, 2>& f2, int leg) {
    std::array<std::complex<double>, 2> w{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          const std::complex<double> amp = psi[i * 4 + j * 2 + k];
          if (leg == 0) w[i] += std::conj(f1[j]) * std::conj(f2[k]) * amp;
          if (leg == 1) w[j] += std::conj(f1[i]) * std::conj(f2[k]) * amp;
          if (leg == 2) w[k] += std::conj(f1[i]) * std::conj(f2[j]) * amp;
        }
    return w;
  };
  auto renorm = [](std::array<std::complex<double>, 2>& f) {
    const double n = std::sqrt(std::norm(f[0]) + std::norm(f[1]));
    if (n > 1e-150) {
      f[0] /= n;
      f[1] /= n;
    }
    return n;
  };
  double prev = 0.0, value = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    alpha = contract(beta, gamma, 0);
    renorm(alpha);
    beta = contract(alpha, gamma, 1);
    renorm(beta);
    gamma = contract(alpha, beta, 2);
    const double n = renorm(gamma);
    value = n * n;
    if (std::abs(value - prev) <= threshold) break;
    prev = value;
  }
  return value;
}

}  // namespace detail

/// Multi-start alternating ascent of the product-state overlap.
///
/// Each restart alternates the closed-form coordinate maximizers
/// v <- (r_B + g^T u)/|..|, u <- (r_A + g v)/|..| of the Bloch objective
/// (1 + u.r_A + v.r_B + u^T g v)/4, which never decreases it. The winner is
/// then cross-evaluated on the raw amplitudes by three-way alternating
/// updates; both routes must agree to 1e-10 or the run is rejected.
///
/// Restart initializations come from a counter-based RNG keyed by
/// (seed, restart index): results are reproducible regardless of evaluation
/// order. Ties pick the lowest restart index.
///
/// Throws NonConvergence when no restart meets the threshold within
/// max_iterations; per-restart status is part of the result otherwise.
inline AscentResult alternating_ascent(const ThreeQubitPureState& state,
                                       const OracleConfig& config = {},
                                       std::vector<std::vector<double>>* value_traces = nullptr) {
  if (config.restarts < 1) throw std::invalid_argument("alternating_ascent: restarts >= 1");
  if (config.convergence_threshold <= 0.0)
    throw std::invalid_argument("alternating_ascent: threshold must be positive");

  const CorrelationData cd = correlation_data(state);
  const Mat3 gt = cd.g.transposed();

  AscentResult result;
  result.restarts.resize(config.restarts);
  Vec3 best_u, best_v;
  double best_value = -1.0;
  int converged_count = 0;

  for (int rs = 0; rs < config.restarts; ++rs) {
    SplitMix64 rng = SplitMix64::keyed(config.rng_seed, static_cast<std::uint64_t>(rs));
    Vec3 u = sample_unit_vector(rng);
    Vec3 v = sample_unit_vector(rng);
    double value = detail::ascent_objective(cd, u, v);
    if (value_traces) value_traces->emplace_back();

    RestartStatus& status = result.restarts[rs];
    for (status.iterations = 0; status.iterations < config.max_iterations; ++status.iterations) {
      const Vec3 v_dir = cd.r_b + gt * u;
      if (v_dir.norm() > 1e-150) v = v_dir.normalized();
      const Vec3 u_dir = cd.r_a + cd.g * v;
      if (u_dir.norm() > 1e-150) u = u_dir.normalized();
      const double next = detail::ascent_objective(cd, u, v);
      if (value_traces) value_traces->back().push_back(next);
      const bool done = std::abs(next - value) <= config.convergence_threshold;
      value = next;
      if (done) {
        status.converged = true;
        ++status.iterations;
        break;
      }
    }
    status.value = value;
    if (status.converged) ++converged_count;
    if (status.converged && value > best_value) {
      best_value = value;
      best_u = u;
      best_v = v;
      result.best_restart = rs;
    }
  }

  if (converged_count == 0)
    throw NonConvergence("alternating_ascent: no restart converged within " +
                         std::to_string(config.max_iterations) + " iterations");

  result.lambda_sq = best_value;

  // Cross-evaluation on the amplitudes, seeded from the winner's basin.
  auto gamma = detail::conditional_qubit_c(state.amp, detail::bloch_spinor(best_u),
                                           detail::bloch_spinor(best_v));
  const double gn = std::sqrt(std::norm(gamma[0]) + std::norm(gamma[1]));
  if (gn > 1e-150) {
    gamma[0] /= gn;
    gamma[1] /= gn;
  } else {
    gamma = {1.0, 0.0};
  }
  result.product.u = best_u;
  result.product.v = best_v;
  result.product.qubit_c = gamma;

  auto alpha_t = detail::bloch_spinor(best_u);
  auto beta_t = detail::bloch_spinor(best_v);
  auto gamma_t = gamma;
  result.direct_overlap = detail::tensor_alternating(state.amp, alpha_t, beta_t, gamma_t,
                                                     config.max_iterations,
                                                     config.convergence_threshold);
  if (std::abs(result.direct_overlap - result.lambda_sq) > 1e-10)
    throw NonConvergence("alternating_ascent: Bloch and tensor routes disagree beyond 1e-10");
  return result;
}

/// max(|r_A + g v - lambda1 u|, |r_B + g^T u - lambda2 v|) for unit u, v.
inline double stationarity_residual(const ThreeQubitPureState& state, const Vec3& u, const Vec3& v,
                                    double lambda1, double lambda2) {
  if (std::abs(u.norm() - 1.0) > 1e-6 || std::abs(v.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("stationarity_residual: u and v must be unit vectors");
  const CorrelationData cd = correlation_data(state);
  const Vec3 res1 = cd.r_a + cd.g * v - u * lambda1;
  const Vec3 res2 = cd.r_b + cd.g.transposed() * u - v * lambda2;
  return std::max(res1.norm(), res2.norm());
}

}  // namespace gme
