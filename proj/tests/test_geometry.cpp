#include <algorithm>
#include <array>
#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "gme/quadrilateral.hpp"
#include "gme/rng.hpp"

using namespace gme;
using Catch::Approx;

TEST_CASE("convex_area_sq") {
  CHECK(convex_area_sq(QuadSides(1, 1, 1, 1)) == Approx(1.0));
  CHECK(convex_area_sq(QuadSides(3, 0, 0, 1)) == Approx(-4.0));  // no quadrilateral
  const double v = convex_area_sq(QuadSides(0.5, 0.5, 0.5, 0.5));
  CHECK(v == Approx(1.0 / 16.0).epsilon(1e-14));
  CHECK(16.0 * v == Approx(1.0));  // 4w^2 - r3^2 for these sides
  CHECK_THROWS_AS(QuadSides(1, -1, 1, 1), std::invalid_argument);
}

TEST_CASE("convex_circumradius_sq") {
  SECTION("unit square") {
    const auto r = convex_circumradius_sq(QuadSides(1, 1, 1, 1));
    CHECK(r.radius_sq == Approx(0.5));
    CHECK(r.area_sq == Approx(1.0));
    CHECK(r.kind == CircumradiusResult::Kind::Convex);
  }
  SECTION("triangle reduction (one side zero)") {
    const double s = 1.0 / std::sqrt(3.0);
    const auto r = convex_circumradius_sq(QuadSides(s, s, s, 0.0));
    CHECK(4.0 * r.radius_sq == Approx(4.0 / 9.0).epsilon(1e-14));
  }
  SECTION("frozen value") {
    const auto r = convex_circumradius_sq(QuadSides(0.55076, 0.55076, 0.55076, 0.3));
    CHECK(r.radius_sq == Approx(0.12354368435455373).epsilon(1e-13));
    CHECK(r.area_sq == Approx(0.05204365988648659).epsilon(1e-13));
  }
  SECTION("no circumcircle when S_q^2 <= 0") {
    CHECK_THROWS_AS(convex_circumradius_sq(QuadSides(3, 0, 0, 1)), NoCircumcircle);
    try {
      convex_circumradius_sq(QuadSides(3, 0, 0, 1));
    } catch (const NoCircumcircle& e) {
      CHECK(e.reason() == NoCircumcircle::Reason::NonpositiveConvexArea);
    }
  }
}

TEST_CASE("crossed_area_sq") {
  CHECK(crossed_area_sq(QuadSides(1, 1, 1, 1)) == Approx(0.0).margin(1e-15));
  CHECK(crossed_area_sq(QuadSides(2, 2, 1, 1)) == Approx(0.0).margin(1e-15));
  // negative values come back verbatim, never clamped
  CHECK(crossed_area_sq(QuadSides(1, 1, 1, 2)) == Approx(-0.3125));
}

TEST_CASE("crossed_circumradius_sq preconditions") {
  SECTION("negative numerator reported as such (l^2 s^2 > abcd)") {
    const QuadSides s(0.8, 0.5, 0.2646, 0.2);
    const double l2s2 = 0.64 * 0.04;
    CHECK(l2s2 > 0.8 * 0.5 * 0.2646 * 0.2);
    try {
      crossed_circumradius_sq(s);
      FAIL("expected NoCircumcircle");
    } catch (const NoCircumcircle& e) {
      CHECK(e.reason() == NoCircumcircle::Reason::NegativeNumerator);
    }
  }
  SECTION("vanishing S_x^2 at the symmetric point") {
    try {
      crossed_circumradius_sq(QuadSides(0.5, 0.5, 0.5, 0.5));
      FAIL("expected NoCircumcircle");
    } catch (const NoCircumcircle& e) {
      CHECK(e.reason() == NoCircumcircle::Reason::NonpositiveCrossedArea);
    }
  }
  SECTION("on r=0 away from the symmetric point both radii exist and agree") {
    const double a = 0.6, d = std::sqrt(0.5 - 0.36), b = 0.5, c = 0.5;
    const auto q = convex_circumradius_sq(QuadSides(a, b, c, d));
    const auto x = crossed_circumradius_sq(QuadSides(a, b, c, d));
    CHECK(4.0 * q.radius_sq == Approx(0.5).margin(1e-9));
    CHECK(4.0 * x.radius_sq == Approx(0.5).margin(1e-9));
  }
}

TEST_CASE("crossed quantities are the convex ones with the sign of d flipped") {
  // polynomial identities: N_x(a,b,c,d) = N_q(a,b,c,-d), S_x^2(a,b,c,d) = S_q^2(a,b,c,-d)
  SplitMix64 rng(201);
  for (int n = 0; n < 2000; ++n) {
    const double a = rng.uniform() * 2.0, b = rng.uniform() * 2.0;
    const double c = rng.uniform() * 2.0, d = rng.uniform() * 2.0;
    const double scale = a + b + c + d;
    CHECK(detail::crossed_radius_numerator(a, b, c, d) ==
          Approx(detail::convex_radius_numerator(a, b, c, -d)).margin(1e-13 * scale * scale));
    CHECK(detail::crossed_area_sq_raw(a, b, c, d) ==
          Approx(detail::convex_area_sq_raw(a, b, c, -d)).margin(1e-13 * scale * scale));
  }
}

TEST_CASE("crossed_diagonal_sq") {
  CHECK(crossed_diagonal_sq(QuadSides(2, 1, 1, 1)) == Approx(-1.0));
  CHECK_THROWS_AS(crossed_diagonal_sq(QuadSides(1, 1, 1, 1)), DegenerateDiagonal);  // ab = cd
  SECTION("AC^2 (ab-cd) = (ac-bd)(bc-ad) identity") {
    SplitMix64 rng(202);
    int tested = 0;
    while (tested < 2000) {
      const double a = rng.uniform() + 0.05, b = rng.uniform() + 0.05;
      const double c = rng.uniform() + 0.05, d = rng.uniform() + 0.05;
      if (std::abs(a * b - c * d) < 1e-3) continue;
      ++tested;
      const double ac2 = crossed_diagonal_sq(QuadSides(a, b, c, d));
      CHECK(ac2 * (a * b - c * d) ==
            Approx((a * c - b * d) * (b * c - a * d)).margin(1e-13));
    }
  }
}

TEST_CASE("circumradius_difference sign follows r and the identity holds") {
  SECTION("r > 0 gives R_q > R_x") {
    const QuadSides s(0.55, 0.55, 0.55, 0.3);
    CHECK(circumradius_difference(s) > 0.0);
  }
  SECTION("r = 0 gives equal radii") {
    const double a = 0.6, d = std::sqrt(0.5 - 0.36);
    CHECK(circumradius_difference(QuadSides(a, 0.5, 0.5, d)) == Approx(0.0).margin(1e-12));
  }
  SECTION("identity residual over random sides where both radii exist") {
    SplitMix64 rng(203);
    int tested = 0;
    while (tested < 10000) {
      const double a = rng.uniform() + 0.05, b = rng.uniform() + 0.05;
      const double c = rng.uniform() + 0.05, d = rng.uniform() + 0.05;
      const QuadSides s(a, b, c, d);
      if (convex_area_sq(s) <= 1e-5 || crossed_area_sq(s) <= 1e-5) continue;
      if (detail::crossed_radius_numerator(a, b, c, d) < 0.0) continue;
      ++tested;
      const double diff = circumradius_difference(s);  // throws on identity violation
      const double r1 = b * b + c * c - a * a - d * d;
      const double r2 = a * a + c * c - b * b - d * d;
      const double r3 = a * a + b * b - c * c - d * d;
      const double expect =
          (r1 * r2 * r3 / 32.0) * (a * b * c * d) / (convex_area_sq(s) * crossed_area_sq(s));
      CHECK(diff == Approx(expect).margin(1e-12 * std::max(1.0, std::abs(diff))));
      if (r1 * r2 * r3 > 1e-6) CHECK(diff > 0.0);
      if (r1 * r2 * r3 < -1e-6) CHECK(diff < 0.0);
    }
  }
}

TEST_CASE("quadrilateral existence: p - l > 0 implies S_q^2 > 0") {
  SplitMix64 rng(204);
  for (int n = 0; n < 10000; ++n) {
    const double a = rng.uniform(), b = rng.uniform();
    const double c = rng.uniform(), d = rng.uniform();
    const double p = (a + b + c + d) / 2.0;
    const double l = std::max({a, b, c, d});
    if (p - l > 1e-12) CHECK(convex_area_sq(QuadSides(a, b, c, d)) > 0.0);
  }
}

TEST_CASE("convex circumradius dominates half the longest side") {
  SplitMix64 rng(205);
  int tested = 0;
  while (tested < 5000) {
    const double a = rng.uniform(), b = rng.uniform();
    const double c = rng.uniform(), d = rng.uniform();
    const QuadSides s(a, b, c, d);
    if (convex_area_sq(s) <= 1e-9) continue;
    ++tested;
    const double l = std::max({a, b, c, d});
    CHECK(convex_circumradius_sq(s).radius_sq >= l * l / 4.0 - 1e-12);
  }
}

TEST_CASE("convex quantities are symmetric in the sides") {
  SplitMix64 rng(207);
  for (int n = 0; n < 500; ++n) {
    std::array<double, 4> v{rng.uniform() + 0.1, rng.uniform() + 0.1, rng.uniform() + 0.1,
                            rng.uniform() + 0.1};
    const QuadSides base(v[0], v[1], v[2], v[3]);
    if (convex_area_sq(base) <= 1e-6) continue;
    const double area = convex_area_sq(base);
    const double radius = convex_circumradius_sq(base).radius_sq;
    std::sort(v.begin(), v.end());
    do {
      const QuadSides perm(v[0], v[1], v[2], v[3]);
      CHECK(convex_area_sq(perm) == Approx(area).epsilon(1e-13));
      CHECK(convex_circumradius_sq(perm).radius_sq == Approx(radius).epsilon(1e-13));
    } while (std::next_permutation(v.begin(), v.end()));
  }
}

TEST_CASE("S_q^2 - S_x^2 = abcd for free parameters") {
  SplitMix64 rng(206);
  for (int n = 0; n < 5000; ++n) {
    const double a = rng.gaussian(), b = rng.gaussian();
    const double c = rng.gaussian(), d = rng.gaussian();
    const double lhs = detail::convex_area_sq_raw(a, b, c, d) -
                       detail::crossed_area_sq_raw(a, b, c, d);
    CHECK(lhs == Approx(a * b * c * d)
                     .margin(1e-13 * std::max(1.0, std::abs(detail::convex_area_sq_raw(a, b, c, d)))));
  }
}
