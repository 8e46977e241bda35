#include "convexreg/cone.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "convexreg/error.hpp"

namespace convexreg {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void require_size(std::span<const double> v, const DesignGrid& grid, const char* who) {
  if (v.size() != grid.size())
    throw InvalidArgument(std::string(who) + ": length " + std::to_string(v.size()) +
                          " does not match grid size " + std::to_string(grid.size()));
}

void require_finite(std::span<const double> v, const char* who) {
  for (double x : v)
    if (!std::isfinite(x)) throw InvalidArgument(std::string(who) + ": non-finite input");
}

// Least squares fit of a continuous piecewise-linear function with knots at
// the given point indices (first and last point always included). The hat
// basis gives tridiagonal SPD normal equations, solved by LDL^T.
std::vector<double> fit_with_knots(std::span<const double> y, std::span<const double> x,
                                   const std::vector<std::size_t>& knots) {
  const std::size_t m = knots.size();
  const std::size_t n = y.size();
  std::vector<double> diag(m, 0.0), off(m - 1, 0.0), rhs(m, 0.0);
  for (std::size_t a = 0; a + 1 < m; ++a) {
    const std::size_t lo = knots[a];
    const std::size_t hi = knots[a + 1];
    const double width = x[hi] - x[lo];
    for (std::size_t j = lo; j < hi; ++j) {
      const double w1 = (x[j] - x[lo]) / width;
      const double w0 = (x[hi] - x[j]) / width;
      diag[a] += w0 * w0;
      diag[a + 1] += w1 * w1;
      off[a] += w0 * w1;
      rhs[a] += w0 * y[j];
      rhs[a + 1] += w1 * y[j];
    }
  }
  diag[m - 1] += 1.0;
  rhs[m - 1] += y[n - 1];

  std::vector<double> lower(m - 1);
  for (std::size_t a = 0; a + 1 < m; ++a) {
    lower[a] = off[a] / diag[a];
    diag[a + 1] -= lower[a] * off[a];
    rhs[a + 1] -= lower[a] * rhs[a];
  }
  std::vector<double> beta(m);
  beta[m - 1] = rhs[m - 1] / diag[m - 1];
  for (std::size_t a = m - 1; a-- > 0;) beta[a] = rhs[a] / diag[a] - lower[a] * beta[a + 1];

  std::vector<double> theta(n);
  for (std::size_t a = 0; a + 1 < m; ++a) {
    const std::size_t lo = knots[a];
    const std::size_t hi = knots[a + 1];
    const double width = x[hi] - x[lo];
    theta[lo] = beta[a];
    for (std::size_t j = lo + 1; j < hi; ++j) {
      const double w1 = (x[j] - x[lo]) / width;
      const double w0 = (x[hi] - x[j]) / width;
      theta[j] = w0 * beta[a] + w1 * beta[a + 1];
    }
  }
  theta[n - 1] = beta[m - 1];
  return theta;
}

// Multiplier of every row implied by the residual s = theta - y:
// mu_r = sum_{j > p} (x_j - x_p) s_j with p = r + 1, the inner product of s
// with the hinge (x - x_p)_+, whose only nonzero slope change is at row r.
std::vector<double> implied_multipliers(std::span<const double> theta, std::span<const double> y,
                                        std::span<const double> x) {
  const std::size_t n = theta.size();
  std::vector<double> mu(n - 2);
  double tail_sum = 0.0;  // sum_{j > p} s_j
  double acc = 0.0;       // mu at point p + 1
  for (std::size_t p = n - 1; p-- > 1;) {
    tail_sum += theta[p + 1] - y[p + 1];
    acc += (x[p + 1] - x[p]) * tail_sum;
    mu[p - 1] = acc;
  }
  return mu;
}

}  // namespace

ConvexityConstraints::ConvexityConstraints(DesignGrid grid) : grid_(std::move(grid)) {
  const std::size_t n = grid_.size();
  coeffs_.resize(n - 2);
  for (std::size_t r = 0; r + 2 < n; ++r) {
    const double left = 1.0 / (grid_[r + 1] - grid_[r]);
    const double right = 1.0 / (grid_[r + 2] - grid_[r + 1]);
    coeffs_[r] = {left, -(left + right), right};
  }
}

std::vector<double> ConvexityConstraints::evaluate_all(std::span<const double> theta) const {
  std::vector<double> d(rows());
  for (std::size_t r = 0; r < rows(); ++r) d[r] = evaluate(r, theta);
  return d;
}

void ConvexityConstraints::add_transpose(std::span<const std::size_t> rows_in,
                                         std::span<const double> multipliers,
                                         std::span<double> out) const {
  for (std::size_t k = 0; k < rows_in.size(); ++k) {
    const std::size_t r = rows_in[k];
    const auto& c = coeffs_[r];
    out[r] += multipliers[k] * c[0];
    out[r + 1] += multipliers[k] * c[1];
    out[r + 2] += multipliers[k] * c[2];
  }
}

bool is_convex_feasible(std::span<const double> theta, const DesignGrid& grid, double tol) {
  require_size(theta, grid, "is_convex_feasible");
  if (grid.size() < 3) return true;
  const ConvexityConstraints cons(grid);
  for (std::size_t r = 0; r < cons.rows(); ++r)
    if (cons.evaluate(r, theta) < -tol) return false;
  return true;
}

bool KktReport::passes(double tol, double y_scale) const noexcept {
  const double bound = tol * std::max(1.0, y_scale);
  return primal_infeasibility <= bound && dual_infeasibility <= bound && comp_slack <= bound &&
         stationarity <= bound + rounding_allowance;
}

KktReport verify_kkt(const ConvexFit& fit, std::span<const double> y) {
  require_size(y, fit.grid, "verify_kkt");
  require_size(fit.theta, fit.grid, "verify_kkt");
  if (fit.active.size() != fit.duals.size())
    throw InvalidArgument("verify_kkt: active set and duals differ in length");

  KktReport report;
  std::vector<double> residual(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) residual[i] = fit.theta[i] - y[i];
  if (fit.grid.size() < 3) {
    report.stationarity = sup_norm(residual);
    return report;
  }
  const ConvexityConstraints cons(fit.grid);
  const std::vector<double> d = cons.evaluate_all(fit.theta);
  for (double v : d) report.primal_infeasibility = std::max(report.primal_infeasibility, -v);
  for (std::size_t k = 0; k < fit.active.size(); ++k) {
    if (fit.active[k] >= cons.rows()) throw InvalidArgument("verify_kkt: active row out of range");
    report.dual_infeasibility = std::max(report.dual_infeasibility, -fit.duals[k]);
    report.comp_slack = std::max(report.comp_slack, std::abs(fit.duals[k] * d[fit.active[k]]));
  }
  std::vector<double> negated(fit.duals.size());
  std::vector<double> magnitude(fit.duals.size());
  for (std::size_t k = 0; k < negated.size(); ++k) {
    negated[k] = -fit.duals[k];
    magnitude[k] = std::abs(fit.duals[k]);
  }
  cons.add_transpose(fit.active, negated, residual);
  report.stationarity = sup_norm(residual);

  std::vector<double> terms(y.size(), 0.0);
  for (std::size_t k = 0; k < fit.active.size(); ++k) {
    const auto& c = cons.row(fit.active[k]);
    for (std::size_t j = 0; j < 3; ++j) terms[fit.active[k] + j] += magnitude[k] * std::abs(c[j]);
  }
  report.rounding_allowance = 16.0 * kEps * static_cast<double>(y.size()) * sup_norm(terms);
  return report;
}

ConvexFit project(std::span<const double> y, const DesignGrid& grid, const ProjectOptions& options) {
  require_size(y, grid, "project");
  require_finite(y, "project");
  const std::size_t n = grid.size();
  const auto x = grid.points();

  ConvexFit fit{grid, std::vector<double>(y.begin(), y.end()), {}, {}, 0.0, 0.0, 0.0, 0.0, 0};
  if (n == 2) return fit;

  const ConvexityConstraints cons(grid);
  const std::size_t rows = cons.rows();
  const double scale = std::max(1.0, sup_norm(y));
  const double min_spacing = grid.c1() / static_cast<double>(n);
  // Rounding floors for slope changes and multipliers of O(scale) data.
  const double feas_eps = 64.0 * kEps * scale / min_spacing;
  const double mult_eps = 16.0 * kEps * static_cast<double>(n) * scale;
  const std::size_t budget = options.max_iterations ? options.max_iterations : 10 * n + 100;

  std::vector<char> in_work(rows, 0);
  std::vector<double> theta(y.begin(), y.end());
  std::vector<double> d = cons.evaluate_all(theta);

  const bool feasible = std::all_of(d.begin(), d.end(), [&](double v) { return v >= -feas_eps; });
  if (feasible) {
    for (std::size_t r = 0; r < rows; ++r) in_work[r] = std::abs(d[r]) <= feas_eps;
  } else {
    std::fill(in_work.begin(), in_work.end(), 1);
  }

  std::vector<std::size_t> knots;
  std::vector<double> mu;
  std::size_t iter = 0;
  bool first = !feasible;
  for (;;) {
    if (++iter > budget)
      throw SolverFailure("project: active-set iteration budget of " + std::to_string(budget) +
                          " exhausted");
    knots.clear();
    knots.push_back(0);
    for (std::size_t r = 0; r < rows; ++r)
      if (!in_work[r]) knots.push_back(r + 1);
    knots.push_back(n - 1);
    std::vector<double> target = fit_with_knots(y, x, knots);
    if (first) {
      // The least squares line is feasible; it is the starting iterate.
      theta = target;
      d = cons.evaluate_all(theta);
      first = false;
    }

    // Ratio test over constraints outside the working set.
    double step = 1.0;
    std::size_t blocking = rows;
    for (std::size_t r = 0; r < rows; ++r) {
      if (in_work[r]) continue;
      const double d_target = cons.evaluate(r, target);
      if (d_target >= -feas_eps) continue;
      const double d_now = std::max(d[r], 0.0);
      const double ratio = d_now / (d_now - d_target);
      if (ratio < step) {
        step = ratio;
        blocking = r;
      }
    }

    if (blocking == rows) {
      theta = std::move(target);
      d = cons.evaluate_all(theta);
      mu = implied_multipliers(theta, y, x);
      std::size_t drop = rows;
      double most_negative = -mult_eps;
      for (std::size_t r = 0; r < rows; ++r) {
        if (in_work[r] && mu[r] < most_negative) {
          most_negative = mu[r];
          drop = r;
        }
      }
      if (drop == rows) break;
      in_work[drop] = 0;
    } else {
      for (std::size_t i = 0; i < n; ++i) theta[i] += step * (target[i] - theta[i]);
      d = cons.evaluate_all(theta);
      in_work[blocking] = 1;
    }
  }

  fit.theta = std::move(theta);
  for (std::size_t r = 0; r < rows; ++r) {
    if (in_work[r]) {
      fit.active.push_back(r);
      fit.duals.push_back(mu[r]);
    }
  }
  fit.iterations = iter;

  const KktReport kkt = verify_kkt(fit, y);
  fit.primal_residual = kkt.primal_infeasibility;
  fit.dual_residual = kkt.stationarity;
  fit.dual_infeasibility = kkt.dual_infeasibility;
  fit.comp_slack = kkt.comp_slack;
  if (!kkt.passes(options.tol, scale))
    throw SolverFailure("project: final iterate fails the KKT check (primal " +
                        sci(kkt.primal_infeasibility) + ", dual " + sci(kkt.dual_infeasibility) +
                        ", slack " + sci(kkt.comp_slack) + ", stationarity " + sci(kkt.stationarity) +
                        ")");
  return fit;
}

std::vector<double> project_bruteforce(std::span<const double> y, const DesignGrid& grid) {
  require_size(y, grid, "project_bruteforce");
  require_finite(y, "project_bruteforce");
  const std::size_t n = grid.size();
  if (n > 14)
    throw UnsupportedSize("project_bruteforce: n = " + std::to_string(n) + " exceeds the limit of 14");
  if (n == 2) return {y.begin(), y.end()};

  const Eigen::Index rows = static_cast<Eigen::Index>(n - 2);
  const Eigen::Index cols = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double hl = grid[r + 1] - grid[r];
    const double hr = grid[r + 2] - grid[r + 1];
    D(r, r) = 1.0 / hl;
    D(r, r + 1) = -1.0 / hl - 1.0 / hr;
    D(r, r + 2) = 1.0 / hr;
  }
  const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), cols);
  const double scale = std::max(1.0, yv.cwiseAbs().maxCoeff());
  const double d_tol = 1e-10 * scale * D.cwiseAbs().maxCoeff();
  const double mu_tol = 1e-10 * scale;

  const std::uint32_t masks = 1u << rows;
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    std::vector<Eigen::Index> work;
    for (Eigen::Index r = 0; r < rows; ++r)
      if (mask & (1u << r)) work.push_back(r);

    Eigen::VectorXd theta = yv;
    Eigen::VectorXd mu;
    if (!work.empty()) {
      Eigen::MatrixXd A(static_cast<Eigen::Index>(work.size()), cols);
      for (std::size_t k = 0; k < work.size(); ++k) A.row(static_cast<Eigen::Index>(k)) = D.row(work[k]);
      // theta = y + A^T mu with A theta = 0.
      mu = (A * A.transpose()).ldlt().solve(-(A * yv));
      theta = yv + A.transpose() * mu;
      if (mu.minCoeff() < -mu_tol) continue;
    }
    if ((D * theta).minCoeff() < -d_tol) continue;
    return {theta.data(), theta.data() + theta.size()};
  }
  throw InternalError("project_bruteforce: no working set passed the KKT check");
}

DykstraResult project_dykstra(std::span<const double> y, const DesignGrid& grid, std::size_t max_iters,
                              double tol) {
  require_size(y, grid, "project_dykstra");
  require_finite(y, "project_dykstra");
  DykstraResult result{{y.begin(), y.end()}, 0, false};
  if (grid.size() < 3) {
    result.converged = true;
    return result;
  }
  const ConvexityConstraints cons(grid);
  const std::size_t rows = cons.rows();
  std::vector<double> norm_sq(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& c = cons.row(r);
    norm_sq[r] = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
  }
  // Dykstra's correction for half-space r is always a multiple of its normal.
  std::vector<double> correction(rows, 0.0);
  std::vector<double> start;
  auto& theta = result.theta;
  while (result.cycles < max_iters) {
    start = theta;
    for (std::size_t r = 0; r < rows; ++r) {
      const auto& c = cons.row(r);
      const double old = correction[r];
      const double value = cons.evaluate(r, theta) + old * norm_sq[r];
      const double fresh = std::min(0.0, value) / norm_sq[r];
      const double delta = old - fresh;
      if (delta != 0.0) {
        theta[r] += delta * c[0];
        theta[r + 1] += delta * c[1];
        theta[r + 2] += delta * c[2];
      }
      correction[r] = fresh;
    }
    ++result.cycles;
    double change = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) change = std::max(change, std::abs(theta[i] - start[i]));
    if (change <= tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

PiecewiseLinearFn canonical_lse(const ConvexFit& fit) {
  const auto pts = fit.grid.points();
  return PiecewiseLinearFn(std::vector<double>(pts.begin(), pts.end()), fit.theta);
}

}  // namespace convexreg
