#include <algorithm>
#include <cmath>
#include <vector>

#include "convexreg/cone.hpp"
#include "convexreg/error.hpp"
#include "convexreg/random.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace convexreg;

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void check_invariants(const ConvexFit& fit, std::span<const double> y) {
  CHECK(std::is_sorted(fit.active.begin(), fit.active.end()));
  CHECK(fit.active.size() == fit.duals.size());
  CHECK(is_convex_feasible(fit.theta, fit.grid));
  const KktReport k = verify_kkt(fit, y);
  CHECK(k.primal_infeasibility <= 1e-8);
  CHECK(k.dual_infeasibility <= 1e-8);
  CHECK(k.comp_slack <= 1e-8);
  CHECK(k.stationarity <= 1e-8);
}

}  // namespace

TEST_SUITE("cone") {
  TEST_CASE("constraint rows are second divided differences") {
    const ConvexityConstraints c(DesignGrid({0.0, 0.5, 1.0}));
    CHECK(c.rows() == 1);
    CHECK(c.row(0)[0] == 2.0);
    CHECK(c.row(0)[1] == -4.0);
    CHECK(c.row(0)[2] == 2.0);
    const std::vector<double> sq{0.0, 0.25, 1.0};
    CHECK(c.evaluate(0, sq) == doctest::Approx(1.0));
  }

  TEST_CASE("feasibility") {
    const DesignGrid g({0.0, 0.5, 1.0});
    CHECK(is_convex_feasible(std::vector<double>{0.0, 0.25, 1.0}, g));
    CHECK_FALSE(is_convex_feasible(std::vector<double>{0.0, 1.0, 0.0}, g));
    CHECK_THROWS_AS(is_convex_feasible(std::vector<double>{0.0, 1.0}, g), InvalidArgument);
  }

  TEST_CASE("peak fixture") {
    const DesignGrid g({0.0, 0.5, 1.0});
    const std::vector<double> y{0.0, 1.0, 0.0};
    const ConvexFit fit = project(y, g);
    for (double v : fit.theta) CHECK(std::abs(v - 1.0 / 3.0) <= 1e-10);
    REQUIRE(fit.active == std::vector<std::size_t>{0});
    // theta - y = mu (2, -4, 2) for the divided-difference row.
    CHECK(std::abs(fit.duals[0] - 1.0 / 6.0) <= 1e-12);
    check_invariants(fit, y);
  }

  TEST_CASE("concave fixture") {
    const DesignGrid g({0.0, 0.5, 1.0});
    const std::vector<double> y{-0.25, 0.0, -0.25};
    const ConvexFit fit = project(y, g);
    for (double v : fit.theta) CHECK(std::abs(v + 1.0 / 6.0) <= 1e-10);
    CHECK(std::abs(fit.duals[0] - 1.0 / 24.0) <= 1e-12);
  }

  TEST_CASE("two points and convex data are fixed points") {
    const DesignGrid g2({0.2, 0.9});
    const std::vector<double> y2{3.0, -1.0};
    CHECK(project(y2, g2).theta == y2);
    const DesignGrid g = make_grid(GridKind::uniform, 50);
    std::vector<double> y(50);
    for (std::size_t i = 0; i < 50; ++i) y[i] = std::exp(g[i]);
    const ConvexFit fit = project(y, g);
    CHECK(max_abs_diff(fit.theta, y) == 0.0);
    CHECK(fit.iterations == 1);
  }

  TEST_CASE("input errors") {
    const DesignGrid g({0.0, 0.5, 1.0});
    CHECK_THROWS_AS(project(std::vector<double>{1.0, 2.0}, g), InvalidArgument);
    CHECK_THROWS_AS(project(std::vector<double>{1.0, NAN, 2.0}, g), InvalidArgument);
    const DesignGrid big = make_grid(GridKind::uniform, 15);
    CHECK_THROWS_AS(project_bruteforce(std::vector<double>(15, 0.0), big), UnsupportedSize);
  }

  TEST_CASE("iteration budget") {
    const DesignGrid g = make_grid(GridKind::uniform, 40);
    Rng rng(1);
    std::vector<double> y(40);
    for (double& v : y) v = rng.normal();
    ProjectOptions opts;
    opts.max_iterations = 1;
    CHECK_THROWS_AS(project(y, g, opts), SolverFailure);
  }

  TEST_CASE("agrees with the enumeration oracle") {
    Rng rng(2024);
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = 3 + rng.below(8);
      const DesignGrid g = t % 2 ? oracle::random_grid(n, t) : make_grid(GridKind::uniform, n);
      const std::vector<double> y = oracle::random_responses(g, 500 + t);
      const ConvexFit fit = project(y, g);
      const std::vector<double> want =
          oracle::projection_by_enumeration(std::vector<double>(g.points().begin(), g.points().end()), y);
      CHECK(max_abs_diff(fit.theta, want) <= 1e-8);
      CHECK(max_abs_diff(fit.theta, project_bruteforce(y, g)) <= 1e-8);
      check_invariants(fit, y);
    }
  }

  TEST_CASE("dykstra converges to the same point") {
    Rng rng(77);
    for (int t = 0; t < 20; ++t) {
      const DesignGrid g = make_grid(GridKind::jittered, 5 + rng.below(20), t);
      const std::vector<double> y = oracle::random_responses(g, 900 + t);
      const DykstraResult dk = project_dykstra(y, g, 200000, 1e-13);
      CHECK(dk.converged);
      CHECK(max_abs_diff(dk.theta, project(y, g).theta) <= 1e-6);
    }
  }

  TEST_CASE("equivariance under scaling and affine shifts") {
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
      const DesignGrid g = make_grid(GridKind::jittered, 10 + rng.below(200), t);
      const std::vector<double> y = oracle::random_responses(g, t);
      const ConvexFit base = project(y, g);
      const double c = rng.uniform(0.5, 3.0), s = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
      std::vector<double> scaled(y), shifted(y);
      for (std::size_t i = 0; i < y.size(); ++i) {
        scaled[i] *= c;
        shifted[i] += s * g[i] + b;
      }
      const ConvexFit fs = project(scaled, g), fa = project(shifted, g);
      for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(std::abs(fs.theta[i] - c * base.theta[i]) <= 1e-9);
        CHECK(std::abs(fa.theta[i] - (base.theta[i] + s * g[i] + b)) <= 1e-9);
      }
    }
  }

  TEST_CASE("large fits pass their own certificate") {
    for (std::size_t n : {1000u, 4000u, 16000u}) {
      const DesignGrid g = make_grid(GridKind::jittered, n, n);
      const std::vector<double> y = oracle::random_responses(g, n);
      const ConvexFit fit = project(y, g);
      CHECK(is_convex_feasible(fit.theta, g));
      const KktReport k = verify_kkt(fit, y);
      CHECK(k.passes(1e-9, 1.0));
    }
  }

  TEST_CASE("projection decreases the distance to any convex point") {
    Rng rng(6);
    for (int t = 0; t < 50; ++t) {
      const DesignGrid g = make_grid(GridKind::uniform, 30);
      const std::vector<double> y = oracle::random_responses(g, 3000 + t);
      const ConvexFit fit = project(y, g);
      std::vector<double> other(g.size());
      const double w = rng.uniform(0.0, 4.0), tt = rng.uniform(), s = rng.uniform(-1.0, 1.0);
      for (std::size_t i = 0; i < g.size(); ++i) other[i] = s * g[i] + w * std::max(0.0, g[i] - tt);
      double d_fit = 0.0, d_other = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        d_fit += (fit.theta[i] - y[i]) * (fit.theta[i] - y[i]);
        d_other += (other[i] - y[i]) * (other[i] - y[i]);
      }
      CHECK(d_fit <= d_other + 1e-12);
    }
  }

  TEST_CASE("canonical interpolant") {
    const DesignGrid g({0.0, 0.5, 1.0});
    const ConvexFit fit = project(std::vector<double>{0.0, 0.25, 1.0}, g);
    const PiecewiseLinearFn f = canonical_lse(fit);
    CHECK(f(0.75) == doctest::Approx(0.625));
    CHECK(f.is_convex());
  }
}
