#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tubenav/errors.hpp"
#include "tubenav/scalar_fields.hpp"

using namespace tubenav;

namespace {

// Reference smoothstep: 1 - 3u^2 + 2u^3 on the normalised coordinate.
double smoothstep_down(double x, double d1, double d2) {
  if (x < d1) return 1.0;
  if (x >= d2) return 0.0;
  const double u = (x - d1) / (d2 - d1);
  return 1.0 - u * u * (3.0 - 2.0 * u);
}

}  // namespace

TEST_CASE("bump matches a normalised smoothstep") {
  for (auto [d1, d2] : {std::pair{0.8, 1.2}, std::pair{0.2, 0.8}, std::pair{-1.0, 3.0}}) {
    const Bump bump(d1, d2);
    for (int k = -10; k <= 110; ++k) {
      const double x = d1 + (d2 - d1) * k / 100.0;
      CHECK(bump(x) == doctest::Approx(smoothstep_down(x, d1, d2)).epsilon(1e-12));
    }
    CHECK(bump(d1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bump(d2) == 0.0);
    CHECK(bump(0.5 * (d1 + d2)) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("bump coefficients for the default avoidance band") {
  const Bump bump(0.8, 1.2);
  CHECK(bump.a() == doctest::Approx(31.25));
  CHECK(bump.b() == doctest::Approx(-93.75));
  CHECK(bump.c() == doctest::Approx(90.0));
  CHECK(bump.d() == doctest::Approx(-27.0));
}

TEST_CASE("bump derivative vanishes at both ends and matches central differences") {
  const Bump bump(0.3, 1.7);
  CHECK(bump.derivative(0.3) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(bump.derivative(1.7 - 1e-12)) < 1e-9);
  for (double x = 0.35; x < 1.65; x += 0.05) {
    const double h = 1e-6;
    const double fd = (bump(x + h) - bump(x - h)) / (2.0 * h);
    CHECK(bump.derivative(x) == doctest::Approx(fd).epsilon(1e-7));
  }
  CHECK_THROWS_AS(Bump(1.0, 1.0), Error);
}

TEST_CASE("smooth saturation range limit is 2 + sqrt 2") {
  CHECK(SmoothSaturation::max_epsilon() == doctest::Approx(2.0 + std::numbers::sqrt2).epsilon(1e-14));
  CHECK_THROWS_AS(SmoothSaturation(-1e-3), Error);
  try {
    SmoothSaturation bad(4.0);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.fault() == Fault::EpsilonOutOfRange);
  }
}

TEST_CASE("smooth saturation joins the line and the plateau with matching slopes") {
  for (double eps : {1e-6, 0.05, 0.3, 1.0}) {
    const SmoothSaturation sat(eps);
    // Arc tangent to y = x and y = 1: centre at (x2, 1 - eps).
    CHECK(sat.x2() == doctest::Approx(1.0 + eps * (std::numbers::sqrt2 - 1.0)).epsilon(1e-14));
    CHECK(sat.x1() == doctest::Approx(sat.x2() - eps / std::numbers::sqrt2).epsilon(1e-14));
    CHECK(sat(sat.x1()) == doctest::Approx(sat.x1()).epsilon(1e-12));
    CHECK(sat(sat.x2()) == 1.0);
    CHECK(sat.derivative(sat.x1()) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sat.derivative(sat.x2()) == 0.0);
    for (double x = -1.0; x < 3.0; x += 0.01) {
      CHECK(sat(x) <= std::min(x, 1.0) + 1e-15);
      CHECK(sat(x) >= std::min(x, 1.0) - eps);
    }
  }
}

TEST_CASE("smooth saturation with eps zero is the hard minimum") {
  const SmoothSaturation sat(0.0);
  for (double x : {-2.0, 0.0, 0.5, 0.999, 1.0, 1.5}) CHECK(sat(x) == std::min(x, 1.0));
}

TEST_CASE("vector saturation caps the norm and keeps direction") {
  const Vec2 v(3.0, 4.0);
  CHECK(saturation_gain(v, 10.0) == 1.0);
  CHECK(saturation_gain(v, 2.5) == doctest::Approx(0.5));
  const Vec2 s = saturate(v, 2.5);
  CHECK(s.norm() == doctest::Approx(2.5));
  CHECK(cross(s, v) == doctest::Approx(0.0));
  CHECK(saturate(Vec2::Zero(), 1.0).norm() == 0.0);
  CHECK(saturation_gain(Vec2::Zero(), 1.0) == 1.0);
}

TEST_CASE("planar helpers") {
  CHECK(rotate_left(Vec2(1.0, 0.0)).isApprox(Vec2(0.0, 1.0)));
  CHECK(cross(Vec2(1.0, 0.0), Vec2(0.0, 1.0)) == 1.0);
  CHECK(cross(Vec2(2.0, 1.0), Vec2(4.0, 2.0)) == 0.0);
}
