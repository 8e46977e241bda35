#include "convexreg/affine.hpp"

#include <algorithm>
#include <cmath>

#include "convexreg/cone.hpp"
#include "convexreg/error.hpp"
#include "convexreg/numeric.hpp"

namespace convexreg {
namespace {

constexpr double kSlopeTol = 1e-12;

}  // namespace

std::vector<double> PiecewiseAffineConvex::slopes() const {
  std::vector<double> s(pieces());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]);
  return s;
}

double PiecewiseAffineConvex::operator()(double x) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
  hi = std::clamp<std::size_t>(hi, 1, knots_.size() - 1);
  const std::size_t lo = hi - 1;
  const double slope = (values_[hi] - values_[lo]) / (knots_[hi] - knots_[lo]);
  return values_[lo] + slope * (x - knots_[lo]);
}

SampledFunction PiecewiseAffineConvex::sample(const DesignGrid& grid) const {
  return SampledFunction::sample(grid, [this](double x) { return (*this)(x); });
}

PiecewiseAffineConvex canonicalize(std::vector<double> knots, std::vector<double> values) {
  if (knots.size() != values.size()) throw InvalidArgument("canonicalize: knots and values differ in length");
  if (knots.size() < 2) throw InvalidArgument("canonicalize: need at least 2 knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i]) || !std::isfinite(values[i]))
      throw InvalidArgument("canonicalize: non-finite input");
    if (i > 0 && !(knots[i] > knots[i - 1])) throw InvalidArgument("canonicalize: knots not strictly increasing");
  }

  std::vector<double> kept_knots{knots.front()};
  std::vector<double> kept_values{values.front()};
  double prev_slope = (values[1] - values[0]) / (knots[1] - knots[0]);
  for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
    const double slope = (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
    const double scale = std::max({1.0, std::abs(slope), std::abs(prev_slope)});
    if (slope - prev_slope < -kSlopeTol * scale)
      throw InvalidArgument("canonicalize: slopes decrease (function is not convex)");
    if (slope - prev_slope > kSlopeTol * scale) {
      kept_knots.push_back(knots[i]);
      kept_values.push_back(values[i]);
    }
    prev_slope = slope;
  }
  kept_knots.push_back(knots.back());
  kept_values.push_back(values.back());
  return PiecewiseAffineConvex(std::move(kept_knots), std::move(kept_values));
}

AffineFit best_affine_fit(const SampledFunction& f) {
  const LineFit line = ols_line(f.grid().points(), f.values());
  const auto x = f.grid().points();
  std::vector<double> fitted(f.size());
  for (std::size_t i = 0; i < fitted.size(); ++i) fitted[i] = line.intercept + line.slope * x[i];
  const double loss = pairwise_sum_sq_diff(f.values(), fitted) / static_cast<double>(f.size());
  return {line.slope, line.intercept, std::sqrt(loss)};
}

PiecewiseAffineConvex knot_interpolant(const std::function<double(double)>& phi0, std::size_t m,
                                       double a, double b) {
  if (m < 1) throw InvalidArgument("knot_interpolant: m must be at least 1");
  if (!(a < b)) throw InvalidArgument("knot_interpolant: need a < b");
  std::vector<double> knots(m + 1), values(m + 1);
  const double md = static_cast<double>(m);
  for (std::size_t i = 0; i <= m; ++i) {
    knots[i] = i == m ? b : a + (b - a) * static_cast<double>(i) / md;
    values[i] = phi0(knots[i]);
  }
  return canonicalize(std::move(knots), std::move(values));
}

std::vector<AffineCandidate> affine_candidates(const SampledFunction& phi0, std::size_t max_k) {
  const std::size_t n = phi0.size();
  if (max_k < 1 || max_k > n) throw InvalidArgument("affine_candidates: need 1 <= max_k <= n");
  if (!is_convex_feasible(phi0.values(), phi0.grid()))
    throw InvalidArgument("affine_candidates: phi0 is not convex on the grid");

  std::vector<AffineCandidate> out;
  out.reserve(max_k + 1);
  const AffineFit line = best_affine_fit(phi0);
  out.push_back({1, line.distance * line.distance});

  const PiecewiseLinearFn extended = interpolant(phi0).extended_to(0.0, 1.0);
  const auto handle = [&](double x) { return extended(x); };
  for (std::size_t m = 1; m <= max_k; ++m) {
    const PiecewiseAffineConvex alpha = knot_interpolant(handle, m, 0.0, 1.0);
    out.push_back({alpha.pieces(), l2_loss(phi0, alpha.sample(phi0.grid()))});
  }
  return out;
}

EnvelopeValue adaptation_envelope(const SampledFunction& phi0, double sigma, std::size_t max_k) {
  if (!(sigma >= 0.0)) throw InvalidArgument("adaptation_envelope: sigma must be nonnegative");
  const double n = static_cast<double>(phi0.size());
  EnvelopeValue best{0, 0.0};
  for (const AffineCandidate& c : affine_candidates(phi0, max_k)) {
    const double value = c.l2_error + sigma * sigma * std::pow(static_cast<double>(c.pieces), 1.25) / n;
    if (best.best_k == 0 || value < best.value) best = {c.pieces, value};
  }
  return best;
}

double gamma_upper(double r, const SampledFunction& phi0, std::size_t max_k) {
  if (!(r > 0.0)) throw InvalidArgument("gamma_upper: r must be positive");
  double best = HUGE_VAL;
  for (const AffineCandidate& c : affine_candidates(phi0, max_k)) {
    const double value = std::pow(static_cast<double>(c.pieces), 2.5) * std::sqrt(r * r + c.l2_error);
    best = std::min(best, value);
  }
  return best;
}

}  // namespace convexreg
