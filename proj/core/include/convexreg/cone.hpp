#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "convexreg/grid.hpp"

namespace convexreg {

/// The n-2 convexity functionals of a design grid. Row r (0-based) is the
/// slope change at interior point p = r + 1:
///
///   d_r(theta) = (theta[p+1] - theta[p]) / (x[p+1] - x[p])
///              - (theta[p] - theta[p-1]) / (x[p] - x[p-1])
///
/// theta is convex-feasible iff d_r(theta) >= 0 for every row.
class ConvexityConstraints {
 public:
  explicit ConvexityConstraints(DesignGrid grid);

  const DesignGrid& grid() const noexcept { return grid_; }
  std::size_t rows() const noexcept { return coeffs_.size(); }

  /// Coefficients of row r on theta[r], theta[r+1], theta[r+2].
  const std::array<double, 3>& row(std::size_t r) const noexcept { return coeffs_[r]; }

  double evaluate(std::size_t r, std::span<const double> theta) const noexcept {
    const auto& c = coeffs_[r];
    return c[0] * theta[r] + c[1] * theta[r + 1] + c[2] * theta[r + 2];
  }

  std::vector<double> evaluate_all(std::span<const double> theta) const;

  /// out += sum_k multipliers[k] * (row rows[k])^T.
  void add_transpose(std::span<const std::size_t> rows, std::span<const double> multipliers,
                     std::span<double> out) const;

 private:
  DesignGrid grid_;
  std::vector<std::array<double, 3>> coeffs_;
};

/// True iff every second divided difference of theta is >= -tol.
/// Throws InvalidArgument when theta.size() != grid.size().
bool is_convex_feasible(std::span<const double> theta, const DesignGrid& grid, double tol = 1e-9);

/// Residuals of the optimality conditions for
///   min 1/2 |theta - y|^2  s.t.  d_r(theta) >= 0,
/// whose Lagrangian stationarity reads theta - y = sum_{r in active} mu_r grad d_r.
struct KktReport {
  double primal_infeasibility = 0.0;  ///< max_r max(0, -d_r(theta))
  double dual_infeasibility = 0.0;    ///< max_r max(0, -mu_r)
  double comp_slack = 0.0;            ///< max_r |mu_r d_r(theta)|
  double stationarity = 0.0;          ///< |theta - y - D_A^T mu|_inf
  /// Floating-point error expected in `stationarity`:
  /// 16 eps n max_i sum_r |D_ri mu_r|. D has entries of order n and mu
  /// carries O(n eps) relative error, so the residual of an exact solution
  /// grows like n^2 eps.
  double rounding_allowance = 0.0;

  /// primal, dual and slackness residuals <= tol * max(1, y_scale), and
  /// stationarity <= that bound plus rounding_allowance.
  bool passes(double tol, double y_scale) const noexcept;
};

/// Least squares projection of y onto the cone of convex sequences.
struct ConvexFit {
  DesignGrid grid;
  std::vector<double> theta;
  std::vector<std::size_t> active;  ///< constraint rows held at equality, ascending
  std::vector<double> duals;        ///< multiplier of each active row (same order)
  double primal_residual = 0.0;     ///< see KktReport::primal_infeasibility
  double dual_residual = 0.0;       ///< stationarity residual
  double dual_infeasibility = 0.0;
  double comp_slack = 0.0;
  std::size_t iterations = 0;       ///< equality-constrained solves performed
};

struct ProjectOptions {
  double tol = 1e-9;
  /// 0 selects 10 n + 100.
  std::size_t max_iterations = 0;
};

/// Primal active-set projection. Starts from the least squares line (every
/// constraint in the working set) unless y is already feasible; each
/// iteration solves the reduced least squares problem over piecewise-linear
/// functions with knots at the free interior points (tridiagonal normal
/// equations), then either drops the most negative multiplier or steps to
/// the first blocking constraint and adds it. Ties go to the smallest index.
///
/// Throws InvalidArgument for non-finite y or size mismatch, SolverFailure
/// when the iteration budget is exhausted or the final KKT check fails.
ConvexFit project(std::span<const double> y, const DesignGrid& grid, const ProjectOptions& options = {});

/// Recomputes the KKT residuals of `fit` against data y from scratch.
KktReport verify_kkt(const ConvexFit& fit, std::span<const double> y);

/// Exhaustive oracle: tries all 2^{n-2} working sets in increasing bitmask
/// order, solving each equality-constrained problem densely, and returns the
/// first candidate that passes a KKT check. Throws UnsupportedSize for n > 14.
std::vector<double> project_bruteforce(std::span<const double> y, const DesignGrid& grid);

struct DykstraResult {
  std::vector<double> theta;
  std::size_t cycles = 0;
  bool converged = false;
};

/// Cyclic Dykstra (Hildreth) projections onto the half-spaces d_r >= 0.
/// Stops once a full cycle moves no coordinate by more than tol.
DykstraResult project_dykstra(std::span<const double> y, const DesignGrid& grid,
                              std::size_t max_iters, double tol);

/// Continuous piecewise-linear interpolant of the fitted values.
PiecewiseLinearFn canonical_lse(const ConvexFit& fit);

}  // namespace convexreg
