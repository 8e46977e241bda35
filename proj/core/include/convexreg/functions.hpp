#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "convexreg/grid.hpp"

namespace convexreg {

/// Closed-form regression functions on [0, 1] with analytically known second
/// derivatives.
class TruthFunction {
 public:
  enum class Kind { x2, x4, exp, hinge, affine, concave_parabola, sin3pi, polynomial };

  struct Curvature {
    double kappa1;  ///< inf of f'' on [a, b]
    double kappa2;  ///< sup of f'' on [a, b]
  };

  /// Ids: x2, x4, exp, hinge (max(0, 2x-1)), affine (x), concave_parabola
  /// (-(x-1/2)^2), sin3pi. Throws InvalidArgument on anything else.
  static TruthFunction named(std::string_view id);
  static TruthFunction affine(double slope, double intercept);
  /// c0 + c1 x + ... + c4 x^4; at most five coefficients.
  static TruthFunction polynomial(std::vector<double> coeffs);

  static const std::vector<std::string>& known_ids();

  Kind kind() const noexcept { return kind_; }
  const std::string& id() const noexcept { return id_; }

  double operator()(double x) const;
  SampledFunction sample(const DesignGrid& grid) const;

  /// Range of f'' over [a, b]; empty when f'' does not exist throughout
  /// (the hinge kink at 1/2 lies inside).
  std::optional<Curvature> curvature(double a, double b) const;

  bool is_convex() const;   ///< on [0, 1]
  bool is_concave() const;  ///< on [0, 1]

 private:
  TruthFunction(Kind kind, std::string id, std::vector<double> coeffs)
      : kind_(kind), id_(std::move(id)), coeffs_(std::move(coeffs)) {}

  Kind kind_;
  std::string id_;
  std::vector<double> coeffs_;  // affine: {intercept, slope}; polynomial: c0..c4
};

}  // namespace convexreg
