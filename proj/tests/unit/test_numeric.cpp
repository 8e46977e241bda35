#include <cmath>
#include <vector>

#include "convexreg/error.hpp"
#include "convexreg/numeric.hpp"
#include "convexreg/random.hpp"
#include "doctest.h"

using namespace convexreg;

TEST_SUITE("numeric") {
  TEST_CASE("pairwise sum matches a long double accumulation") {
    Rng rng(11);
    for (std::size_t n : {0u, 1u, 15u, 16u, 17u, 1000u, 100000u}) {
      std::vector<double> v(n);
      long double ref = 0.0L;
      for (auto& x : v) {
        x = rng.uniform(-1.0, 1.0) * 1e3;
        ref += x;
      }
      CHECK(pairwise_sum(v) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
    }
  }

  TEST_CASE("sum of squared differences") {
    const std::vector<double> a{1.0, 2.0, 3.0}, b{0.0, 0.0, 1.0};
    CHECK(pairwise_sum_sq_diff(a, b) == 9.0);
  }

  TEST_CASE("ols recovers an exact line") {
    const std::vector<double> x{0.0, 0.25, 0.5, 1.0}, y{1.0, 1.5, 2.0, 3.0};
    const LineFit f = ols_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
  }

  TEST_CASE("ols on constant data") {
    const std::vector<double> x{0.0, 1.0, 2.0}, y{4.0, 4.0, 4.0};
    const LineFit f = ols_line(x, y);
    CHECK(f.slope == 0.0);
    CHECK(f.intercept == 4.0);
    CHECK(f.r_squared == 1.0);
  }

  TEST_CASE("ols rejects degenerate input") {
    const std::vector<double> one{1.0}, same{2.0, 2.0}, y{1.0, 2.0};
    CHECK_THROWS_AS(ols_line(one, one), InvalidArgument);
    CHECK_THROWS_AS(ols_line(same, y), InvalidArgument);
  }
}
