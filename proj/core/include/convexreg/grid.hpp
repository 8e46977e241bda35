#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace convexreg {

enum class GridKind { uniform, jittered };

GridKind parse_grid_kind(std::string_view name);
std::string_view to_string(GridKind kind);

/// Sorted design points x_1 < ... < x_n in [0, 1] together with the spacing
/// constants c1 = min_i n(x_i - x_{i-1}) and c2 = max_i n(x_i - x_{i-1}).
///
/// Immutable; copies share the point storage, so passing grids by value is
/// cheap and safe across threads.
class DesignGrid {
 public:
  /// Throws InvalidArgument unless n >= 2, points are finite, strictly
  /// increasing and inside [0, 1].
  explicit DesignGrid(std::vector<double> points);

  std::size_t size() const noexcept { return data_->points.size(); }
  std::span<const double> points() const noexcept { return data_->points; }
  double operator[](std::size_t i) const noexcept { return data_->points[i]; }
  double front() const noexcept { return data_->points.front(); }
  double back() const noexcept { return data_->points.back(); }
  double c1() const noexcept { return data_->c1; }
  double c2() const noexcept { return data_->c2; }

  /// Same storage, or element-wise identical points.
  bool same_points(const DesignGrid& other) const noexcept;

 private:
  struct Data {
    std::vector<double> points;
    double c1 = 0.0;
    double c2 = 0.0;
  };
  std::shared_ptr<const Data> data_;
};

/// uniform: x_i = i/n (c1 = c2 = 1).
/// jittered: spacings perturbed by at most +-25% and rescaled so x_n = 1;
/// draws are rejected until 0.5 <= c1 <= c2 <= 1.5.
DesignGrid make_grid(GridKind kind, std::size_t n, std::uint64_t seed = 0);

/// Values of a function at the design points.
class SampledFunction {
 public:
  SampledFunction(DesignGrid grid, std::vector<double> values);

  template <typename F>
  static SampledFunction sample(const DesignGrid& grid, F&& f) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);
    return SampledFunction(grid, std::move(values));
  }

  const DesignGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  DesignGrid grid_;
  std::vector<double> values_;
};

/// Noisy responses y_i = phi_0(x_i) + xi_i with noise level sigma.
struct Observations {
  Observations(DesignGrid grid, std::vector<double> y, double sigma);

  DesignGrid grid;
  std::vector<double> y;
  double sigma;
};

/// Continuous function, linear between consecutive knots.
class PiecewiseLinearFn {
 public:
  PiecewiseLinearFn(std::vector<double> knots, std::vector<double> values);

  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const double> values() const noexcept { return values_; }
  double domain_begin() const noexcept { return knots_.front(); }
  double domain_end() const noexcept { return knots_.back(); }

  /// Throws InvalidArgument outside [domain_begin, domain_end].
  double operator()(double x) const;

  /// Extends the first and last segments linearly so the domain covers
  /// [lo, hi]. Convexity is preserved.
  PiecewiseLinearFn extended_to(double lo, double hi) const;

  /// Slopes nondecreasing; each drop may not exceed tol * max(1, |slope|).
  bool is_convex(double tol = 1e-9) const;

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// (1/n) sum_i (f(x_i) - g(x_i))^2. Throws InvalidArgument on grid mismatch.
double l2_loss(const SampledFunction& f, const SampledFunction& g);

/// #{i : x_i in [a, b]}. Requires 0 <= a < b <= 1.
std::size_t interval_count(const DesignGrid& grid, double a, double b);

/// Piecewise-linear interpolant with knots at the design points.
PiecewiseLinearFn interpolant(const SampledFunction& f);

/// Exact integral of (f - g)^2 over [a, b], segment by segment on the union
/// of both knot sets.
double integral_l2(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g, double a, double b);

/// Integral of |f|^p over [a, b]. Exact for p in {1, 2}; otherwise composite
/// Simpson with 64 panels on each sign-definite piece of each segment.
double integral_abs_pow(const PiecewiseLinearFn& f, double p, double a, double b);

/// 2 (1+p)^{1/p} max(y^{-1/p}, (1-y)^{-1/p}).
double boundedness_envelope(double p, double y);

/// Checks |f~(y)| <= boundedness_envelope(p, y) for the interpolant of f,
/// extended linearly to [0, 1]. f must be convex and normalized so that
/// int_0^1 |f~|^p <= 1; violations of either throw InvalidArgument.
bool check_bound_1db(const SampledFunction& f, double p, double y);

}  // namespace convexreg
