#pragma once

#include <span>
#include <vector>

namespace convexreg {

/// Pairwise (cascade) summation; error grows like O(log n) ulps.
double pairwise_sum(std::span<const double> values);

/// Sum of squared differences, accumulated pairwise.
double pairwise_sum_sq_diff(std::span<const double> a, std::span<const double> b);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

/// Ordinary least squares of y on x (centered formulation).
/// r_squared is 1 when y has zero variance.
LineFit ols_line(std::span<const double> x, std::span<const double> y);

}  // namespace convexreg
