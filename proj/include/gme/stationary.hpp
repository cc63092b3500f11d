#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gme/ascent.hpp"
#include "gme/correlation.hpp"
#include "gme/linalg.hpp"
#include "gme/states.hpp"

namespace gme {

/// A solution of the stationarity system r_A + g v = lambda1 u,
/// r_B + g^T u = lambda2 v with unit u, v.
struct StationaryPoint {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Vec3 u;
  Vec3 v;
  double value = 0.0;     // (1 + u.r_A + v.r_B + u^T g v)/4
  double residual = 0.0;  // stationarity equation residual
};

/// Candidate discarded because the resolvent lambda1 lambda2 I - g g^T was
/// ill-conditioned there (symmetric states make the closed-branch solutions
/// live exactly on det = 0).
struct SingularCandidate {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double condition = 0.0;
};

struct StationaryScan {
  std::vector<StationaryPoint> points;              // sorted by value, descending
  std::vector<SingularCandidate> singular_candidates;
};

namespace detail {

struct ResolventEval {
  bool usable = false;
  double f1 = 0.0;  // u^2 - 1
  double f2 = 0.0;  // v^2 - 1
  Vec3 u, v;
  double condition = 0.0;
};

inline ResolventEval eval_resolvent(const CorrelationData& cd, const Mat3& ggt, const Mat3& gtg,
                                    double l1, double l2) {
  ResolventEval out;
  const Mat3 m1 = Mat3::identity() * (l1 * l2) - ggt;
  const Mat3 m2 = Mat3::identity() * (l1 * l2) - gtg;
  out.condition = std::max(frobenius_condition(m1), frobenius_condition(m2));
  if (!(out.condition < 1e12)) return out;
  out.u = m1.inverse() * (cd.r_a * l2 + cd.g * cd.r_b);
  out.v = m2.inverse() * (cd.r_b * l1 + cd.g.transposed() * cd.r_a);
  out.f1 = out.u.dot(out.u) - 1.0;
  out.f2 = out.v.dot(out.v) - 1.0;
  out.usable = true;
  return out;
}

}  // namespace detail

/// Enumerate stationarity solutions through the resolvent form of the
/// stationarity system: scan a (grid_resolution+1)^2 grid of multiplier
/// pairs, bracket simultaneous sign changes of (u^2-1, v^2-1) per cell, then
/// polish with damped Newton on a finite-difference Jacobian.
///
/// All stationary multipliers satisfy |lambda| <= |r_A| + ||g|| <= 2, so the
/// scan box is [-2.2, 2.2]^2 (small margin so roots sitting exactly on the
/// bound, e.g. product basis states at (2,2), bracket cleanly).
///
/// Cells where the resolvent condition number exceeds 1e12 are reported as
/// singular candidates instead of roots; the closed-form branches of
/// symmetric states live exactly on that singular set.
inline StationaryScan lagrange_stationary_points(const ThreeQubitPureState& state,
                                                 int grid_resolution = 200) {
  if (grid_resolution < 8)
    throw std::invalid_argument("lagrange_stationary_points: grid too coarse");
  const CorrelationData cd = correlation_data(state);
  const Mat3 ggt = cd.g * cd.g.transposed();
  const Mat3 gtg = cd.g.transposed() * cd.g;

  constexpr double box = 2.2;
  const int n = grid_resolution;
  const double cell = 2.0 * box / n;

  std::vector<detail::ResolventEval> grid((n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      grid[i * (n + 1) + j] =
          detail::eval_resolvent(cd, ggt, gtg, -box + cell * i, -box + cell * j);

  StationaryScan scan;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const detail::ResolventEval* corners[4] = {
          &grid[i * (n + 1) + j], &grid[(i + 1) * (n + 1) + j],
          &grid[i * (n + 1) + j + 1], &grid[(i + 1) * (n + 1) + j + 1]};
      if (!std::all_of(std::begin(corners), std::end(corners),
                       [](const detail::ResolventEval* e) { return e->usable; }))
        continue;
      auto sign_change = [&corners](double detail::ResolventEval::*f) {
        double lo = corners[0]->*f, hi = corners[0]->*f;
        for (const auto* e : corners) {
          lo = std::min(lo, e->*f);
          hi = std::max(hi, e->*f);
        }
        return lo < 0.0 && hi > 0.0;
      };
      if (!sign_change(&detail::ResolventEval::f1) || !sign_change(&detail::ResolventEval::f2))
        continue;

      // damped Newton from the cell center
      double l1 = -box + cell * (i + 0.5);
      double l2 = -box + cell * (j + 0.5);
      bool singular = false;
      detail::ResolventEval at{};
      bool converged = false;
      for (int it = 0; it < 80; ++it) {
        at = detail::eval_resolvent(cd, ggt, gtg, l1, l2);
        if (!at.usable) {
          singular = true;
          break;
        }
        if (std::max(std::abs(at.f1), std::abs(at.f2)) < 1e-12) {
          converged = true;
          break;
        }
        const double h = 1e-7;
        const auto d1 = detail::eval_resolvent(cd, ggt, gtg, l1 + h, l2);
        const auto d2 = detail::eval_resolvent(cd, ggt, gtg, l1, l2 + h);
        if (!d1.usable || !d2.usable) {
          singular = true;
          break;
        }
        const double j11 = (d1.f1 - at.f1) / h, j12 = (d2.f1 - at.f1) / h;
        const double j21 = (d1.f2 - at.f2) / h, j22 = (d2.f2 - at.f2) / h;
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-300) break;
        double s1 = (-at.f1 * j22 + at.f2 * j12) / det;
        double s2 = (-j11 * at.f2 + j21 * at.f1) / det;
        s1 = std::clamp(s1, -0.2, 0.2);
        s2 = std::clamp(s2, -0.2, 0.2);
        l1 += s1;
        l2 += s2;
        if (std::abs(l1) > box + 0.8 || std::abs(l2) > box + 0.8) break;
      }

      if (singular) {
        const bool dup = std::any_of(
            scan.singular_candidates.begin(), scan.singular_candidates.end(),
            [&](const SingularCandidate& s) {
              return std::abs(s.lambda1 - l1) < 1e-3 && std::abs(s.lambda2 - l2) < 1e-3;
            });
        if (!dup)
          scan.singular_candidates.push_back(
              SingularCandidate{l1, l2, detail::eval_resolvent(cd, ggt, gtg, l1, l2).condition});
        continue;
      }
      if (!converged) continue;
      const bool dup =
          std::any_of(scan.points.begin(), scan.points.end(), [&](const StationaryPoint& p) {
            return std::abs(p.lambda1 - l1) < 1e-6 && std::abs(p.lambda2 - l2) < 1e-6;
          });
      if (dup) continue;

      StationaryPoint pt;
      pt.lambda1 = l1;
      pt.lambda2 = l2;
      pt.u = at.u;
      pt.v = at.v;
      pt.value = detail::ascent_objective(cd, at.u, at.v);
      const Vec3 res1 = cd.r_a + cd.g * at.v - at.u * l1;
      const Vec3 res2 = cd.r_b + cd.g.transposed() * at.u - at.v * l2;
      pt.residual = std::max(res1.norm(), res2.norm());
      scan.points.push_back(pt);
    }
  }

  std::sort(scan.points.begin(), scan.points.end(),
            [](const StationaryPoint& a, const StationaryPoint& b) { return a.value > b.value; });
  return scan;
}

}  // namespace gme
