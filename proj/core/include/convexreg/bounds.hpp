#pragma once

#include <cstddef>

#include "convexreg/entropy.hpp"
#include "convexreg/grid.hpp"

namespace convexreg {

/// KL divergence between the Gaussian models with means f and g:
/// n l2(f, g) / (2 sigma^2). Throws on grid mismatch or sigma <= 0.
double kl_gaussian(const SampledFunction& f, const SampledFunction& g, double sigma);

/// sqrt(kl / 2), an upper bound on total variation distance.
double pinsker_tv_bound(double kl);

/// (kappa2 c1^2 / 32)^{1/5} (sigma^2 / n)^{2/5}. All inputs positive.
double neighborhood_radius(double kappa2, double c1, double sigma, std::size_t n);

struct LowerBoundInputs {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double a = 0.0;
  double b = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double sigma = 1.0;
  std::size_t n = 0;
};

struct LowerBoundReport {
  double value = 0.0;
  bool valid = false;          ///< n^2 >= required_n_sq
  double required_n_sq = 0.0;  ///< (2 c2)^{5/2} kappa2 / (sigma sqrt(c1))
  LowerBoundInputs inputs;
};

/// Local minimax lower bound
///   kappa1^2 / (4096 c2) (sqrt(c1) / kappa2)^{8/5} (b - a) (sigma^2 / n)^{4/5}.
/// The value is always computed; regimes where the bound is not established
/// (including sigma = 0) are flagged through `valid` rather than thrown.
/// Throws InvalidArgument only for malformed inputs (negative, non-finite,
/// n = 0, bad class).
LowerBoundReport assouad_lower_bound(const CurvatureClass& cls, double c1, double c2, double sigma, std::size_t n);

/// Parameters of the risk envelopes. constant_C stands in for the
/// unspecified universal constants (default 1), so envelope values are
/// shapes up to a constant.
struct EnvelopeParams {
  double constant_C = 1.0;
  double c1 = 1.0;
  double sigma = 1.0;
  std::size_t n = 0;
  double R = 1.0;  ///< max(1, distance of phi0 from affine functions)

  /// Throws InvalidArgument unless every field is positive and finite.
  void validate() const;
  /// c1 and n from phi0's grid, R = max(1, best_affine_fit(phi0).distance).
  static EnvelopeParams from(const SampledFunction& phi0, double sigma, double constant_C = 1.0);
};

struct RiskEnvelope {
  double value = 0.0;
  bool n_condition_met = false;
};

/// C log(e n / (2 c1)) (sigma^2 sqrt(R) / n)^{4/5}, flagged with whether
/// n >= C (log(e n / (2 c1)))^{5/4} sigma^2 / R^2.
RiskEnvelope risk_envelope_rig1d(const EnvelopeParams& p);

/// C (log(e n / (2 c1)))^{5/4} adaptation_envelope(phi0, sigma, max_k).
/// p.n must equal the size of phi0's grid.
double risk_envelope_adap(const SampledFunction& phi0, const EnvelopeParams& p, std::size_t max_k);

/// C (log(e n / (2 c1)))^{5/8} r^{3/4} min_alpha k(alpha)^{5/8} (r^2 + l2(phi0, alpha))^{1/8}
/// over the piecewise-affine candidate family. Requires r > 0.
double entropy_integral_bound(double r, const SampledFunction& phi0, const EnvelopeParams& p, std::size_t max_k);

}  // namespace convexreg
