#include "convexreg/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "convexreg/affine.hpp"
#include "convexreg/error.hpp"

namespace convexreg {
namespace {

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

double log_factor(const EnvelopeParams& p) {
  return std::log(std::numbers::e * static_cast<double>(p.n) / (2.0 * p.c1));
}

}  // namespace

double kl_gaussian(const SampledFunction& f, const SampledFunction& g, double sigma) {
  if (!positive(sigma)) throw InvalidArgument("kl_gaussian: sigma must be positive");
  return static_cast<double>(f.size()) * l2_loss(f, g) / (2.0 * sigma * sigma);
}

double pinsker_tv_bound(double kl) {
  if (!(kl >= 0.0)) throw InvalidArgument("pinsker_tv_bound: kl must be nonnegative");
  return std::sqrt(kl / 2.0);
}

double neighborhood_radius(double kappa2, double c1, double sigma, std::size_t n) {
  if (!positive(kappa2) || !positive(c1) || !positive(sigma) || n == 0)
    throw InvalidArgument("neighborhood_radius: inputs must be positive");
  return std::pow(kappa2 * c1 * c1 / 32.0, 0.2) * std::pow(sigma * sigma / static_cast<double>(n), 0.4);
}

LowerBoundReport assouad_lower_bound(const CurvatureClass& cls, double c1, double c2, double sigma, std::size_t n) {
  cls.validate();
  if (!positive(c1) || !positive(c2) || c1 > c2) throw InvalidArgument("assouad_lower_bound: need 0 < c1 <= c2");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("assouad_lower_bound: sigma must be >= 0");
  if (n == 0) throw InvalidArgument("assouad_lower_bound: n must be positive");

  LowerBoundReport report;
  report.inputs = {cls.kappa1, cls.kappa2, cls.a, cls.b, c1, c2, sigma, n};
  const double nd = static_cast<double>(n);
  report.value = cls.kappa1 * cls.kappa1 / (4096.0 * c2) * std::pow(std::sqrt(c1) / cls.kappa2, 1.6) *
                 (cls.b - cls.a) * std::pow(sigma * sigma / nd, 0.8);
  report.required_n_sq = sigma > 0.0 ? std::pow(2.0 * c2, 2.5) * cls.kappa2 / (sigma * std::sqrt(c1))
                                     : std::numeric_limits<double>::infinity();
  report.valid = nd * nd >= report.required_n_sq;
  return report;
}

void EnvelopeParams::validate() const {
  if (!positive(constant_C) || !positive(c1) || !positive(sigma) || n == 0 || !positive(R))
    throw InvalidArgument("EnvelopeParams: all parameters must be positive");
}

EnvelopeParams EnvelopeParams::from(const SampledFunction& phi0, double sigma, double constant_C) {
  EnvelopeParams p;
  p.constant_C = constant_C;
  p.c1 = phi0.grid().c1();
  p.sigma = sigma;
  p.n = phi0.size();
  p.R = std::max(1.0, best_affine_fit(phi0).distance);
  p.validate();
  return p;
}

RiskEnvelope risk_envelope_rig1d(const EnvelopeParams& p) {
  p.validate();
  const double nd = static_cast<double>(p.n);
  const double lg = log_factor(p);
  RiskEnvelope out;
  out.value = p.constant_C * lg * std::pow(p.sigma * p.sigma * std::sqrt(p.R) / nd, 0.8);
  out.n_condition_met = nd >= p.constant_C * std::pow(lg, 1.25) * p.sigma * p.sigma / (p.R * p.R);
  return out;
}

double risk_envelope_adap(const SampledFunction& phi0, const EnvelopeParams& p, std::size_t max_k) {
  p.validate();
  if (p.n != phi0.size()) throw InvalidArgument("risk_envelope_adap: params.n differs from the grid size");
  return p.constant_C * std::pow(log_factor(p), 1.25) * adaptation_envelope(phi0, p.sigma, max_k).value;
}

double entropy_integral_bound(double r, const SampledFunction& phi0, const EnvelopeParams& p, std::size_t max_k) {
  p.validate();
  if (!positive(r)) throw InvalidArgument("entropy_integral_bound: r must be positive");
  double best = std::numeric_limits<double>::infinity();
  for (const AffineCandidate& c : affine_candidates(phi0, max_k))
    best = std::min(best, std::pow(static_cast<double>(c.pieces), 0.625) * std::pow(r * r + c.l2_error, 0.125));
  return p.constant_C * std::pow(log_factor(p), 0.625) * std::pow(r, 0.75) * best;
}

}  // namespace convexreg
