#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gme/errors.hpp"

namespace gme {

/// Side lengths of a (possibly crossed) cyclic quadrilateral. No
/// normalization constraint: normalization only rescales the figure.
struct QuadSides {
  double a, b, c, d;

  QuadSides(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    if (a < 0 || b < 0 || c < 0 || d < 0)
      throw std::invalid_argument("QuadSides: side lengths must be nonnegative");
  }
};

struct CircumradiusResult {
  enum class Kind { Convex, Crossed };
  double radius_sq;  // R^2
  double area_sq;    // S_q^2 or S_x^2
  Kind kind;
};

namespace detail {

// Raw formula kernels, sign-sensitive on purpose: the crossed branch of the
// measure evaluates them on signed coefficient tuples.
inline double semiperimeter(double a, double b, double c, double d) {
  return (a + b + c + d) / 2.0;
}

inline double convex_area_sq_raw(double a, double b, double c, double d) {
  const double p = semiperimeter(a, b, c, d);
  return (p - a) * (p - b) * (p - c) * (p - d);
}

inline double crossed_area_sq_raw(double a, double b, double c, double d) {
  const double p = semiperimeter(a, b, c, d);
  return p * (p - c - d) * (p - b - d) * (p - a - d);
}

inline double convex_radius_numerator(double a, double b, double c, double d) {
  return (a * b + c * d) * (a * c + b * d) * (a * d + b * c);
}

inline double crossed_radius_numerator(double a, double b, double c, double d) {
  return (a * c - b * d) * (b * c - a * d) * (a * b - c * d);
}

// Homogeneous degeneracy tolerance: 1e-14 * scale^deg, scale = semiperimeter
// of |sides|.
inline double scale_of(double a, double b, double c, double d) {
  return (std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d)) / 2.0;
}

inline double tol_deg(double scale, int degree) {
  double t = 1e-14;
  for (int i = 0; i < degree; ++i) t *= scale;
  return t;
}

}  // namespace detail

/// S_q^2 = (p-a)(p-b)(p-c)(p-d). Negative value means no cyclic convex
/// quadrilateral with these sides exists; the sign is reported verbatim.
inline double convex_area_sq(const QuadSides& s) {
  return detail::convex_area_sq_raw(s.a, s.b, s.c, s.d);
}

/// R_q^2 = (ab+cd)(ac+bd)(ad+bc) / (16 S_q^2).
inline CircumradiusResult convex_circumradius_sq(const QuadSides& s) {
  const double area_sq = convex_area_sq(s);
  const double scale = detail::scale_of(s.a, s.b, s.c, s.d);
  if (area_sq <= detail::tol_deg(scale, 4))
    throw NoCircumcircle(NoCircumcircle::Reason::NonpositiveConvexArea,
                         "convex quadrilateral has no circumcircle: S_q^2 <= 0");
  const double num = detail::convex_radius_numerator(s.a, s.b, s.c, s.d);
  return {num / (16.0 * area_sq), area_sq, CircumradiusResult::Kind::Convex};
}

/// S_x^2 = p(p-c-d)(p-b-d)(p-a-d): the (signed) difference of the two
/// triangle areas of the crossed figure, not an area itself.
inline double crossed_area_sq(const QuadSides& s) {
  return detail::crossed_area_sq_raw(s.a, s.b, s.c, s.d);
}

/// R_x^2 = (ac-bd)(bc-ad)(ab-cd) / (16 S_x^2). Requires S_x^2 > 0 and a
/// nonnegative numerator; the raised error distinguishes which failed.
inline CircumradiusResult crossed_circumradius_sq(const QuadSides& s) {
  // Numerator first: a negative numerator (l^2 s^2 > abcd) always comes with
  // a nonpositive S_x^2, and it is the more specific diagnosis.
  const double num = detail::crossed_radius_numerator(s.a, s.b, s.c, s.d);
  if (num < 0.0)
    throw NoCircumcircle(NoCircumcircle::Reason::NegativeNumerator,
                         "crossed quadrilateral has no circumcircle: "
                         "(ac-bd)(bc-ad)(ab-cd) < 0, i.e. l^2 s^2 > abcd");
  const double area_sq = crossed_area_sq(s);
  const double scale = detail::scale_of(s.a, s.b, s.c, s.d);
  if (area_sq <= detail::tol_deg(scale, 4))
    throw NoCircumcircle(NoCircumcircle::Reason::NonpositiveCrossedArea,
                         "crossed quadrilateral has no circumcircle: S_x^2 <= 0");
  return {num / (16.0 * area_sq), area_sq, CircumradiusResult::Kind::Crossed};
}

/// Squared length of the diagonal AC of the crossed quadrilateral:
/// AC^2 = (ac-bd)(bc-ad)/(ab-cd). A negative return signals that no real
/// crossed configuration exists.
inline double crossed_diagonal_sq(const QuadSides& s) {
  const double den = s.a * s.b - s.c * s.d;
  const double scale = detail::scale_of(s.a, s.b, s.c, s.d);
  if (std::abs(den) <= detail::tol_deg(scale, 2))
    throw DegenerateDiagonal("crossed diagonal undefined: ab = cd");
  return (s.a * s.c - s.b * s.d) * (s.b * s.c - s.a * s.d) / den;
}

/// 4R_q^2 - 4R_x^2. Internally re-derives the same value through
/// (r/32) * abcd / (S_q^2 S_x^2) with r = r1 r2 r3 of the sides read as state
/// coefficients, and refuses to return silently inconsistent results.
inline double circumradius_difference(const QuadSides& s) {
  const CircumradiusResult q = convex_circumradius_sq(s);
  const CircumradiusResult x = crossed_circumradius_sq(s);
  const double diff = 4.0 * q.radius_sq - 4.0 * x.radius_sq;

  const double a = s.a, b = s.b, c = s.c, d = s.d;
  const double r1 = b * b + c * c - a * a - d * d;
  const double r2 = a * a + c * c - b * b - d * d;
  const double r3 = a * a + b * b - c * c - d * d;
  const double identity = (r1 * r2 * r3 / 32.0) * (a * b * c * d) / (q.area_sq * x.area_sq);
  const double scale = detail::scale_of(a, b, c, d);
  const double tol = 1e-12 * std::max({1.0, scale * scale, std::abs(diff)});
  if (std::abs(diff - identity) > tol)
    throw std::logic_error("circumradius_difference: identity residual out of tolerance");
  return diff;
}

}  // namespace gme
