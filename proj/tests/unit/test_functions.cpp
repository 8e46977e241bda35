#include <cmath>
#include <numbers>

#include "convexreg/error.hpp"
#include "convexreg/functions.hpp"
#include "doctest.h"

using namespace convexreg;

TEST_SUITE("functions") {
  TEST_CASE("named truths evaluate their closed forms") {
    CHECK(TruthFunction::named("x2")(0.3) == doctest::Approx(0.09));
    CHECK(TruthFunction::named("x4")(0.5) == doctest::Approx(0.0625));
    CHECK(TruthFunction::named("exp")(1.0) == doctest::Approx(std::numbers::e));
    CHECK(TruthFunction::named("hinge")(0.25) == 0.0);
    CHECK(TruthFunction::named("hinge")(0.75) == doctest::Approx(0.5));
    CHECK(TruthFunction::named("affine")(0.4) == doctest::Approx(0.4));
    CHECK(TruthFunction::named("concave_parabola")(0.0) == doctest::Approx(-0.25));
    CHECK(TruthFunction::named("sin3pi")(1.0 / 6.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(TruthFunction::named("cubic"), InvalidArgument);
    for (const auto& id : TruthFunction::known_ids()) CHECK_NOTHROW(TruthFunction::named(id));
  }

  TEST_CASE("curvature ranges") {
    const auto x4 = TruthFunction::named("x4").curvature(0.5, 1.0);
    REQUIRE(x4);
    CHECK(x4->kappa1 == doctest::Approx(3.0));
    CHECK(x4->kappa2 == doctest::Approx(12.0));
    const auto e = TruthFunction::named("exp").curvature(0.0, 1.0);
    CHECK(e->kappa1 == doctest::Approx(1.0));
    CHECK(e->kappa2 == doctest::Approx(std::numbers::e));
    CHECK_FALSE(TruthFunction::named("hinge").curvature(0.0, 1.0));
    CHECK(TruthFunction::named("hinge").curvature(0.6, 1.0)->kappa2 == 0.0);
    const auto s = TruthFunction::named("sin3pi").curvature(0.0, 1.0);
    const double amp = 9.0 * std::numbers::pi * std::numbers::pi;
    CHECK(s->kappa1 == doctest::Approx(-amp));
    CHECK(s->kappa2 == doctest::Approx(amp));
  }

  TEST_CASE("polynomial curvature uses the interior critical point") {
    // f = x^4 - x^3: f'' = 12x^2 - 6x, minimum -0.75 at x = 1/4.
    const TruthFunction p = TruthFunction::polynomial({0.0, 0.0, 0.0, -1.0, 1.0});
    const auto c = p.curvature(0.0, 1.0);
    CHECK(c->kappa1 == doctest::Approx(-0.75));
    CHECK(c->kappa2 == doctest::Approx(6.0));
    CHECK_FALSE(p.is_convex());
    CHECK_THROWS_AS(TruthFunction::polynomial({1, 2, 3, 4, 5, 6}), InvalidArgument);
  }

  TEST_CASE("convexity classification") {
    CHECK(TruthFunction::named("x2").is_convex());
    CHECK(TruthFunction::named("hinge").is_convex());
    CHECK_FALSE(TruthFunction::named("hinge").is_concave());
    CHECK(TruthFunction::named("concave_parabola").is_concave());
    CHECK_FALSE(TruthFunction::named("sin3pi").is_convex());
    CHECK_FALSE(TruthFunction::named("sin3pi").is_concave());
    CHECK(TruthFunction::named("affine").is_convex());
    CHECK(TruthFunction::named("affine").is_concave());
  }
}
