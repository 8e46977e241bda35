#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "convexreg/grid.hpp"

namespace convexreg {

/// Convex function that is affine between consecutive knots, stored with the
/// minimal number of pieces (adjacent equal slopes merged). Evaluation outside
/// [knots.front(), knots.back()] extends the end pieces linearly.
class PiecewiseAffineConvex {
 public:
  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const double> values() const noexcept { return values_; }
  /// k(alpha): minimal number of affine pieces.
  std::size_t pieces() const noexcept { return knots_.size() - 1; }
  std::vector<double> slopes() const;

  double operator()(double x) const;
  SampledFunction sample(const DesignGrid& grid) const;

 private:
  friend PiecewiseAffineConvex canonicalize(std::vector<double> knots, std::vector<double> values);
  PiecewiseAffineConvex(std::vector<double> knots, std::vector<double> values)
      : knots_(std::move(knots)), values_(std::move(values)) {}

  std::vector<double> knots_;
  std::vector<double> values_;
};

/// Merges adjacent segments whose slopes agree to 1e-12 relative. Throws
/// InvalidArgument for unsorted knots or a slope decrease beyond that.
PiecewiseAffineConvex canonicalize(std::vector<double> knots, std::vector<double> values);

struct AffineFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// sqrt of the l2 loss between f and the fitted line: the distance of f
  /// from affine functions.
  double distance = 0.0;
};

/// Ordinary least squares line through (x_i, f(x_i)).
AffineFit best_affine_fit(const SampledFunction& f);

/// Linear interpolant of phi0 at t_i = a + (b-a) i / m, i = 0..m. If
/// phi0'' <= kappa2 on [a, b] the sup-norm error there is at most
/// (b-a)^2 kappa2 / (8 m^2). Throws InvalidArgument for m < 1 or a >= b.
PiecewiseAffineConvex knot_interpolant(const std::function<double(double)>& phi0, std::size_t m,
                                       double a, double b);

/// One member of the piecewise-affine candidate family used to bound
/// infima over all piecewise-affine convex functions from above.
struct AffineCandidate {
  std::size_t pieces;  ///< k(alpha) after canonicalization
  double l2_error;     ///< l2 loss between phi0 and alpha on the grid
};

/// The least squares line plus the equispaced interpolants with
/// m = 1..max_k knots intervals of the (linearly extended) interpolant of
/// phi0. Requires phi0 convex-feasible and 1 <= max_k <= n.
std::vector<AffineCandidate> affine_candidates(const SampledFunction& phi0, std::size_t max_k);

struct EnvelopeValue {
  std::size_t best_k = 1;
  double value = 0.0;
};

/// min over candidates of l2(phi0, alpha) + sigma^2 k(alpha)^{5/4} / n.
/// Upper bound on the infimum over all piecewise-affine convex alpha.
EnvelopeValue adaptation_envelope(const SampledFunction& phi0, double sigma, std::size_t max_k);

/// min over candidates of k(alpha)^{5/2} (r^2 + l2(phi0, alpha))^{1/2};
/// upper bound on the local ball size functional. Equals r for affine phi0.
double gamma_upper(double r, const SampledFunction& phi0, std::size_t max_k);

}  // namespace convexreg
