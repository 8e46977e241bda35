#pragma once

#include <cstdint>

#include "convexreg/cone.hpp"
#include "convexreg/grid.hpp"

namespace convexreg {

/// Projection of f0's values onto the convex cone (f0 need not be convex).
ConvexFit convex_projection(const SampledFunction& f0);

/// l2(f0, phi) - l2(f0, phi0) - l2(phi0, phi) with phi0 the convex
/// projection of f0. Nonnegative up to rounding for every convex phi.
double pythagorean_gap(const SampledFunction& f0, const SampledFunction& projection, const SampledFunction& phi);

/// pythagorean_gap(f0, convex_projection(f0), phi) >= -tol. Throws
/// InvalidArgument if phi is not convex-feasible or grids differ.
bool pythagorean_check(const SampledFunction& f0, const SampledFunction& phi, double tol);

/// For concave f0 (with n > 2) the projection is affine: true iff its fitted
/// values deviate from their own least squares line by at most tol.
/// Throws InvalidArgument if -f0 is not convex-feasible or n <= 2.
bool concave_projection_affine_check(const SampledFunction& f0, double tol);

/// Random convex function sampled on grid: a random line plus up to eight
/// hinges max(0, x - u) with random nonnegative weights. Same seed, same
/// function.
SampledFunction random_convex_function(const DesignGrid& grid, std::uint64_t seed);

}  // namespace convexreg
