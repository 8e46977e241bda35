#include "convexreg/functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "convexreg/error.hpp"

namespace convexreg {
namespace {

double poly_second_derivative(const std::vector<double>& c, double x) {
  return 2.0 * c[2] + 6.0 * c[3] * x + 12.0 * c[4] * x * x;
}

}  // namespace

TruthFunction TruthFunction::named(std::string_view id) {
  if (id == "x2") return {Kind::x2, "x2", {}};
  if (id == "x4") return {Kind::x4, "x4", {}};
  if (id == "exp") return {Kind::exp, "exp", {}};
  if (id == "hinge") return {Kind::hinge, "hinge", {}};
  if (id == "affine") return affine(1.0, 0.0);
  if (id == "concave_parabola") return {Kind::concave_parabola, "concave_parabola", {}};
  if (id == "sin3pi") return {Kind::sin3pi, "sin3pi", {}};
  throw InvalidArgument("unknown truth '" + std::string(id) + "'");
}

TruthFunction TruthFunction::affine(double slope, double intercept) {
  return {Kind::affine, "affine", {intercept, slope}};
}

TruthFunction TruthFunction::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty() || coeffs.size() > 5)
    throw InvalidArgument("polynomial truth takes between 1 and 5 coefficients");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw InvalidArgument("polynomial truth: non-finite coefficient");
  coeffs.resize(5, 0.0);
  return {Kind::polynomial, "poly", std::move(coeffs)};
}

const std::vector<std::string>& TruthFunction::known_ids() {
  static const std::vector<std::string> ids{"x2",     "x4",    "exp",     "hinge",
                                            "affine", "concave_parabola", "sin3pi"};
  return ids;
}

double TruthFunction::operator()(double x) const {
  switch (kind_) {
    case Kind::x2: return x * x;
    case Kind::x4: return x * x * x * x;
    case Kind::exp: return std::exp(x);
    case Kind::hinge: return std::max(0.0, 2.0 * x - 1.0);
    case Kind::affine: return coeffs_[0] + coeffs_[1] * x;
    case Kind::concave_parabola: return -(x - 0.5) * (x - 0.5);
    case Kind::sin3pi: return std::sin(3.0 * std::numbers::pi * x);
    case Kind::polynomial:
      return coeffs_[0] + x * (coeffs_[1] + x * (coeffs_[2] + x * (coeffs_[3] + x * coeffs_[4])));
  }
  return 0.0;
}

SampledFunction TruthFunction::sample(const DesignGrid& grid) const {
  return SampledFunction::sample(grid, [this](double x) { return (*this)(x); });
}

std::optional<TruthFunction::Curvature> TruthFunction::curvature(double a, double b) const {
  if (!(a <= b)) throw InvalidArgument("curvature: need a <= b");
  switch (kind_) {
    case Kind::x2: return Curvature{2.0, 2.0};
    case Kind::x4: {
      // 12 x^2 is monotone on [a, b] unless the interval straddles 0.
      const double lo = (a <= 0.0 && b >= 0.0) ? 0.0 : std::min(12.0 * a * a, 12.0 * b * b);
      return Curvature{lo, std::max(12.0 * a * a, 12.0 * b * b)};
    }
    case Kind::exp: return Curvature{std::exp(a), std::exp(b)};
    case Kind::hinge:
      if (a < 0.5 && b > 0.5) return std::nullopt;
      return Curvature{0.0, 0.0};
    case Kind::affine: return Curvature{0.0, 0.0};
    case Kind::concave_parabola: return Curvature{-2.0, -2.0};
    case Kind::sin3pi: {
      // f'' = -9 pi^2 sin(3 pi x); extremes at the ends or where 3 pi x = pi/2 + k pi.
      const double amp = 9.0 * std::numbers::pi * std::numbers::pi;
      const auto f2 = [&](double x) { return -amp * std::sin(3.0 * std::numbers::pi * x); };
      double lo = std::min(f2(a), f2(b));
      double hi = std::max(f2(a), f2(b));
      for (int k = -1; k <= 6; ++k) {
        const double x = (0.5 + k) / 3.0;
        if (x > a && x < b) {
          lo = std::min(lo, f2(x));
          hi = std::max(hi, f2(x));
        }
      }
      return Curvature{lo, hi};
    }
    case Kind::polynomial: {
      double lo = std::min(poly_second_derivative(coeffs_, a), poly_second_derivative(coeffs_, b));
      double hi = std::max(poly_second_derivative(coeffs_, a), poly_second_derivative(coeffs_, b));
      if (coeffs_[4] != 0.0) {
        const double x = -coeffs_[3] / (4.0 * coeffs_[4]);
        if (x > a && x < b) {
          lo = std::min(lo, poly_second_derivative(coeffs_, x));
          hi = std::max(hi, poly_second_derivative(coeffs_, x));
        }
      }
      return Curvature{lo, hi};
    }
  }
  return std::nullopt;
}

bool TruthFunction::is_convex() const {
  if (kind_ == Kind::hinge) return true;
  const auto c = curvature(0.0, 1.0);
  return c && c->kappa1 >= 0.0;
}

bool TruthFunction::is_concave() const {
  if (kind_ == Kind::hinge) return false;
  const auto c = curvature(0.0, 1.0);
  return c && c->kappa2 <= 0.0;
}

}  // namespace convexreg
