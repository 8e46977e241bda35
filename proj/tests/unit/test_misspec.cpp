#include <cmath>
#include <vector>

#include "convexreg/affine.hpp"
#include "convexreg/cone.hpp"
#include "convexreg/error.hpp"
#include "convexreg/functions.hpp"
#include "convexreg/misspec.hpp"
#include "convexreg/random.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace convexreg;

TEST_SUITE("misspec") {
  TEST_CASE("three point concave projection") {
    const DesignGrid g({0.0, 0.5, 1.0});
    const SampledFunction f0(g, {-0.25, 0.0, -0.25});
    const ConvexFit fit = convex_projection(f0);
    for (double t : fit.theta) CHECK(std::fabs(t + 1.0 / 6.0) <= 1e-12);
    CHECK(concave_projection_affine_check(f0, 1e-12));
  }

  TEST_CASE("non-convex projection is certified") {
    const DesignGrid g = make_grid(GridKind::uniform, 50);
    const auto f0 = TruthFunction::named("sin3pi").sample(g);
    const ConvexFit fit = convex_projection(f0);
    CHECK(verify_kkt(fit, f0.values()).passes(1e-8, 1.0));
    CHECK(is_convex_feasible(fit.theta, g));
  }

  TEST_CASE("idempotence on convex input") {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const DesignGrid g = oracle::random_grid(5 + s, s);
      const auto f0 = random_convex_function(g, s);
      CHECK(is_convex_feasible(f0.values(), g));
      const ConvexFit fit = convex_projection(f0);
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::fabs(fit.theta[i] - f0[i]) <= 1e-12);
      CHECK(pythagorean_gap(f0, f0, f0) == 0.0);
    }
  }

  TEST_CASE("random convex functions are reproducible") {
    const DesignGrid g = make_grid(GridKind::uniform, 30);
    const auto a = random_convex_function(g, 8), b = random_convex_function(g, 8), c = random_convex_function(g, 9);
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    CHECK_FALSE(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
  }

  TEST_CASE("pythagorean inequality") {
    Rng rng(77);
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 5 + rng.below(46);
      const DesignGrid g = oracle::random_grid(n, 1000 + t);
      const SampledFunction f0(g, oracle::random_responses(g, 2000 + t));
      const auto phi = random_convex_function(g, 3000 + t);
      CHECK(pythagorean_check(f0, phi, 1e-10));
      const SampledFunction proj(g, convex_projection(f0).theta);
      CHECK(pythagorean_check(f0, proj, 1e-10));
      CHECK(std::fabs(pythagorean_gap(f0, proj, proj)) <= 1e-12);
    }
    const DesignGrid g = make_grid(GridKind::uniform, 20);
    const auto convex = TruthFunction::named("x2").sample(g);
    const auto phi = random_convex_function(g, 1);
    CHECK(std::fabs(pythagorean_gap(convex, convex, phi)) <= 1e-14);
  }

  TEST_CASE("pythagorean errors") {
    const DesignGrid g = make_grid(GridKind::uniform, 20);
    const auto f0 = TruthFunction::named("sin3pi").sample(g);
    CHECK_THROWS_AS(pythagorean_check(f0, f0, 1e-10), InvalidArgument);
    const auto other = random_convex_function(make_grid(GridKind::uniform, 21), 1);
    CHECK_THROWS_AS(pythagorean_check(f0, other, 1e-10), InvalidArgument);
  }

  TEST_CASE("concave truths project to the least squares line") {
    for (std::size_t n : {5u, 50u, 500u}) {
      for (auto kind : {GridKind::uniform, GridKind::jittered}) {
        const DesignGrid g = make_grid(kind, n, n);
        const auto f0 = SampledFunction::sample(g, [](double x) { return -x * x + x; });
        CHECK(concave_projection_affine_check(f0, 1e-7));
        const ConvexFit fit = convex_projection(f0);
        const AffineFit line = best_affine_fit(f0);
        for (std::size_t i = 0; i < n; ++i)
          CHECK(std::fabs(fit.theta[i] - (line.intercept + line.slope * g[i])) <= 1e-7);
      }
    }
    const DesignGrid g = make_grid(GridKind::uniform, 40);
    CHECK(concave_projection_affine_check(SampledFunction::sample(g, [](double x) { return 3.0 * x - 1.0; }), 1e-10));
    CHECK(concave_projection_affine_check(SampledFunction::sample(g, [](double x) { return std::sin(3.0 * x); }), 1e-7));
  }

  TEST_CASE("concave check errors") {
    const DesignGrid g = make_grid(GridKind::uniform, 20);
    CHECK_THROWS_AS(concave_projection_affine_check(TruthFunction::named("x2").sample(g), 1e-7), InvalidArgument);
    const DesignGrid two({0.0, 1.0});
    CHECK_THROWS_AS(concave_projection_affine_check(SampledFunction(two, {0.0, 0.0}), 1e-7), InvalidArgument);
  }
}
