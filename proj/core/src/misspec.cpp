#include "convexreg/misspec.hpp"

#include <algorithm>
#include <cmath>

#include "convexreg/error.hpp"
#include "convexreg/numeric.hpp"
#include "convexreg/random.hpp"

namespace convexreg {

ConvexFit convex_projection(const SampledFunction& f0) { return project(f0.values(), f0.grid()); }

double pythagorean_gap(const SampledFunction& f0, const SampledFunction& projection, const SampledFunction& phi) {
  return l2_loss(f0, phi) - l2_loss(f0, projection) - l2_loss(projection, phi);
}

bool pythagorean_check(const SampledFunction& f0, const SampledFunction& phi, double tol) {
  if (!f0.grid().same_points(phi.grid())) throw InvalidArgument("pythagorean_check: grids differ");
  if (!is_convex_feasible(phi.values(), phi.grid()))
    throw InvalidArgument("pythagorean_check: phi is not convex-feasible");
  const ConvexFit fit = convex_projection(f0);
  return pythagorean_gap(f0, SampledFunction(f0.grid(), fit.theta), phi) >= -tol;
}

bool concave_projection_affine_check(const SampledFunction& f0, double tol) {
  if (f0.size() <= 2) throw InvalidArgument("concave_projection_affine_check: need n > 2");
  std::vector<double> negated(f0.values().begin(), f0.values().end());
  for (double& v : negated) v = -v;
  if (!is_convex_feasible(negated, f0.grid()))
    throw InvalidArgument("concave_projection_affine_check: f0 is not concave");
  const ConvexFit fit = convex_projection(f0);
  const auto x = f0.grid().points();
  const LineFit line = ols_line(x, fit.theta);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    worst = std::max(worst, std::abs(fit.theta[i] - (line.intercept + line.slope * x[i])));
  return worst <= tol;
}

SampledFunction random_convex_function(const DesignGrid& grid, std::uint64_t seed) {
  Rng rng(seed);
  const double intercept = rng.uniform(-1.0, 1.0);
  const double slope = rng.uniform(-2.0, 2.0);
  const std::size_t hinges = static_cast<std::size_t>(rng.below(9));
  std::vector<double> at(hinges), weight(hinges);
  for (std::size_t k = 0; k < hinges; ++k) {
    at[k] = rng.uniform();
    weight[k] = rng.uniform(0.0, 4.0);
  }
  return SampledFunction::sample(grid, [&](double x) {
    double v = intercept + slope * x;
    for (std::size_t k = 0; k < hinges; ++k) v += weight[k] * std::max(0.0, x - at[k]);
    return v;
  });
}

}  // namespace convexreg
