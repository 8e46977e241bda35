#include "convexreg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "convexreg/error.hpp"
#include "convexreg/numeric.hpp"
#include "convexreg/random.hpp"

namespace convexreg {
namespace {

constexpr double kDomainSlack = 1e-12;
constexpr int kSimpsonPanels = 64;

double segment_abs_pow(double h, double left, double right, double p) {
  // left and right are the (nonnegative) endpoint values of |f| on a
  // sign-definite linear piece of width h.
  if (p == 1.0) return 0.5 * h * (left + right);
  if (p == 2.0) return h / 3.0 * (left * left + left * right + right * right);
  const double step = 1.0 / kSimpsonPanels;
  double acc = 0.0;
  for (int k = 0; k <= kSimpsonPanels; ++k) {
    const double t = k * step;
    const double w = (k == 0 || k == kSimpsonPanels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc += w * std::pow(left + (right - left) * t, p);
  }
  return acc * h * step / 3.0;
}

}  // namespace

GridKind parse_grid_kind(std::string_view name) {
  if (name == "uniform") return GridKind::uniform;
  if (name == "jittered") return GridKind::jittered;
  throw InvalidArgument("unknown grid kind '" + std::string(name) + "' (expected uniform|jittered)");
}

std::string_view to_string(GridKind kind) {
  return kind == GridKind::uniform ? "uniform" : "jittered";
}

DesignGrid::DesignGrid(std::vector<double> points) {
  const std::size_t n = points.size();
  if (n < 2) throw InvalidArgument("DesignGrid: need at least 2 points");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(points[i])) throw InvalidArgument("DesignGrid: non-finite point");
    if (points[i] < 0.0 || points[i] > 1.0)
      throw InvalidArgument("DesignGrid: point " + std::to_string(i) + " outside [0, 1]");
    if (i > 0 && !(points[i] > points[i - 1]))
      throw InvalidArgument("DesignGrid: points not strictly increasing at index " +
                            std::to_string(i));
  }
  auto data = std::make_shared<Data>();
  const double nd = static_cast<double>(n);
  data->c1 = nd * (points[1] - points[0]);
  data->c2 = data->c1;
  for (std::size_t i = 2; i < n; ++i) {
    const double spacing = nd * (points[i] - points[i - 1]);
    data->c1 = std::min(data->c1, spacing);
    data->c2 = std::max(data->c2, spacing);
  }
  data->points = std::move(points);
  data_ = std::move(data);
}

bool DesignGrid::same_points(const DesignGrid& other) const noexcept {
  return data_ == other.data_ || data_->points == other.data_->points;
}

DesignGrid make_grid(GridKind kind, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("make_grid: n must be at least 2");
  const double nd = static_cast<double>(n);
  std::vector<double> points(n);
  if (kind == GridKind::uniform) {
    for (std::size_t i = 0; i < n; ++i) points[i] = static_cast<double>(i + 1) / nd;
    return DesignGrid(std::move(points));
  }

  Rng rng(derive_seed(seed, {0x67726964ULL, n}));
  std::vector<double> spacing(n);
  for (;;) {
    for (auto& s : spacing) s = 1.0 + rng.uniform(-0.25, 0.25);
    // x_i = (s_1 + ... + s_i) / S, accumulated in order so x_n == 1.
    const double total = pairwise_sum(spacing);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += spacing[i];
      points[i] = acc / total;
    }
    points[n - 1] = 1.0;
    DesignGrid grid(points);
    if (grid.c1() >= 0.5 && grid.c2() <= 1.5) return grid;
  }
}

SampledFunction::SampledFunction(DesignGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw InvalidArgument("SampledFunction: value count does not match grid size");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("SampledFunction: non-finite value");
}

Observations::Observations(DesignGrid g, std::vector<double> responses, double noise_sd)
    : grid(std::move(g)), y(std::move(responses)), sigma(noise_sd) {
  if (y.size() != grid.size()) throw InvalidArgument("Observations: length of y does not match grid");
  if (!(sigma > 0.0)) throw InvalidArgument("Observations: sigma must be positive");
}

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() != values_.size())
    throw InvalidArgument("PiecewiseLinearFn: knots and values differ in length");
  if (knots_.size() < 2) throw InvalidArgument("PiecewiseLinearFn: need at least 2 knots");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i] > knots_[i - 1]))
      throw InvalidArgument("PiecewiseLinearFn: knots not strictly increasing");
}

double PiecewiseLinearFn::operator()(double x) const {
  if (x < domain_begin() - kDomainSlack || x > domain_end() + kDomainSlack)
    throw InvalidArgument("PiecewiseLinearFn: evaluation point outside domain");
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
  hi = std::clamp<std::size_t>(hi, 1, knots_.size() - 1);
  const std::size_t lo = hi - 1;
  const double t = (x - knots_[lo]) / (knots_[hi] - knots_[lo]);
  return (1.0 - t) * values_[lo] + t * values_[hi];
}

PiecewiseLinearFn PiecewiseLinearFn::extended_to(double lo, double hi) const {
  std::vector<double> knots = knots_;
  std::vector<double> values = values_;
  if (lo < knots.front()) {
    const double slope = (values[1] - values[0]) / (knots[1] - knots[0]);
    values.insert(values.begin(), values[0] + slope * (lo - knots[0]));
    knots.insert(knots.begin(), lo);
  }
  if (hi > knots.back()) {
    const std::size_t m = knots.size();
    const double slope = (values[m - 1] - values[m - 2]) / (knots[m - 1] - knots[m - 2]);
    values.push_back(values[m - 1] + slope * (hi - knots[m - 1]));
    knots.push_back(hi);
  }
  return PiecewiseLinearFn(std::move(knots), std::move(values));
}

bool PiecewiseLinearFn::is_convex(double tol) const {
  double prev = (values_[1] - values_[0]) / (knots_[1] - knots_[0]);
  for (std::size_t i = 2; i < knots_.size(); ++i) {
    const double slope = (values_[i] - values_[i - 1]) / (knots_[i] - knots_[i - 1]);
    const double scale = std::max({1.0, std::abs(slope), std::abs(prev)});
    if (slope - prev < -tol * scale) return false;
    prev = slope;
  }
  return true;
}

double l2_loss(const SampledFunction& f, const SampledFunction& g) {
  if (!f.grid().same_points(g.grid())) throw InvalidArgument("l2_loss: functions live on different grids");
  return pairwise_sum_sq_diff(f.values(), g.values()) / static_cast<double>(f.size());
}

std::size_t interval_count(const DesignGrid& grid, double a, double b) {
  if (!(a < b)) throw InvalidArgument("interval_count: need a < b");
  if (a < 0.0 || b > 1.0) throw InvalidArgument("interval_count: interval must lie in [0, 1]");
  const auto pts = grid.points();
  const auto first = std::lower_bound(pts.begin(), pts.end(), a);
  const auto last = std::upper_bound(pts.begin(), pts.end(), b);
  return static_cast<std::size_t>(last - first);
}

PiecewiseLinearFn interpolant(const SampledFunction& f) {
  const auto pts = f.grid().points();
  return PiecewiseLinearFn(std::vector<double>(pts.begin(), pts.end()),
                           std::vector<double>(f.values().begin(), f.values().end()));
}

double integral_l2(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g, double a, double b) {
  if (a > b) throw InvalidArgument("integral_l2: need a <= b");
  const auto inside = [&](const PiecewiseLinearFn& h) {
    return a >= h.domain_begin() - kDomainSlack && b <= h.domain_end() + kDomainSlack;
  };
  if (!inside(f) || !inside(g)) throw InvalidArgument("integral_l2: [a, b] not inside both domains");
  if (a == b) return 0.0;

  std::vector<double> cuts{a, b};
  for (const PiecewiseLinearFn* h : {&f, &g})
    for (double t : h->knots())
      if (t > a && t < b) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> terms;
  terms.reserve(cuts.size());
  double alpha = f(cuts[0]) - g(cuts[0]);
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double beta = f(cuts[i]) - g(cuts[i]);
    terms.push_back((cuts[i] - cuts[i - 1]) / 3.0 * (alpha * alpha + alpha * beta + beta * beta));
    alpha = beta;
  }
  return pairwise_sum(terms);
}

double integral_abs_pow(const PiecewiseLinearFn& f, double p, double a, double b) {
  if (!(p >= 1.0)) throw InvalidArgument("integral_abs_pow: need p >= 1");
  if (a > b) throw InvalidArgument("integral_abs_pow: need a <= b");
  if (a < f.domain_begin() - kDomainSlack || b > f.domain_end() + kDomainSlack)
    throw InvalidArgument("integral_abs_pow: [a, b] outside the domain");
  if (a == b) return 0.0;

  std::vector<double> cuts{a, b};
  for (double t : f.knots())
    if (t > a && t < b) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());

  std::vector<double> terms;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double u = cuts[i - 1];
    const double v = cuts[i];
    const double fu = f(u);
    const double fv = f(v);
    if ((fu < 0.0 && fv > 0.0) || (fu > 0.0 && fv < 0.0)) {
      const double root = u + (v - u) * fu / (fu - fv);
      terms.push_back(segment_abs_pow(root - u, std::abs(fu), 0.0, p));
      terms.push_back(segment_abs_pow(v - root, 0.0, std::abs(fv), p));
    } else {
      terms.push_back(segment_abs_pow(v - u, std::abs(fu), std::abs(fv), p));
    }
  }
  return pairwise_sum(terms);
}

double boundedness_envelope(double p, double y) {
  if (!(p >= 1.0)) throw InvalidArgument("boundedness_envelope: need p >= 1");
  if (!(y > 0.0 && y < 1.0)) throw InvalidArgument("boundedness_envelope: need y in (0, 1)");
  const double inv_p = 1.0 / p;
  return 2.0 * std::pow(1.0 + p, inv_p) * std::max(std::pow(y, -inv_p), std::pow(1.0 - y, -inv_p));
}

bool check_bound_1db(const SampledFunction& f, double p, double y) {
  const double envelope = boundedness_envelope(p, y);
  const PiecewiseLinearFn fn = interpolant(f).extended_to(0.0, 1.0);
  if (!fn.is_convex()) throw InvalidArgument("check_bound_1db: interpolant is not convex");
  const double mass = integral_abs_pow(fn, p, 0.0, 1.0);
  if (mass > 1.0 + 1e-9) throw InvalidArgument("check_bound_1db: int |f|^p exceeds 1; normalize first");
  return std::abs(fn(y)) <= envelope;
}

}  // namespace convexreg
