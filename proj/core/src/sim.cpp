#include "convexreg/sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "convexreg/cone.hpp"
#include "convexreg/error.hpp"
#include "convexreg/numeric.hpp"
#include "convexreg/parallel.hpp"
#include "convexreg/random.hpp"

namespace convexreg {

void ExperimentConfig::validate() const {
  if (n_list.empty()) throw InvalidArgument("ExperimentConfig: n_list is empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 3) throw InvalidArgument("ExperimentConfig: every n must be at least 3");
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw InvalidArgument("ExperimentConfig: n_list must be strictly ascending");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("ExperimentConfig: sigma must be >= 0");
  if (reps < 1) throw InvalidArgument("ExperimentConfig: reps must be at least 1");
}

SimulationTarget make_target(const TruthFunction& truth, const DesignGrid& grid) {
  SampledFunction samples = truth.sample(grid);
  ConvexFit fit = project(samples.values(), grid);
  return {std::move(samples), SampledFunction(grid, std::move(fit.theta))};
}

double simulate_once(const SimulationTarget& target, double sigma, std::uint64_t rep_seed) {
  const DesignGrid& grid = target.truth.grid();
  std::vector<double> y(target.truth.values().begin(), target.truth.values().end());
  if (sigma > 0.0) {
    Rng rng(rep_seed);
    for (double& v : y) v += sigma * rng.normal();
  }
  ConvexFit fit = project(y, grid);
  return l2_loss(SampledFunction(grid, std::move(fit.theta)), target.reference);
}

double simulate_once(const TruthFunction& truth, const DesignGrid& grid, double sigma, std::uint64_t rep_seed) {
  return simulate_once(make_target(truth, grid), sigma, rep_seed);
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t n, std::size_t rep) {
  return derive_seed(seed, {n, rep});
}

RiskCurve estimate_risk(const ExperimentConfig& config, std::size_t threads) {
  config.validate();
  const std::size_t sizes = config.n_list.size();
  const std::size_t reps = config.reps;

  std::vector<SimulationTarget> targets;
  targets.reserve(sizes);
  for (std::size_t n : config.n_list)
    targets.push_back(make_target(config.truth, make_grid(config.grid_kind, n, config.seed)));

  std::vector<double> losses(sizes * reps);
  parallel_for(losses.size(), threads, [&](std::size_t task) {
    const std::size_t k = task / reps;
    const std::size_t rep = task % reps;
    losses[task] = simulate_once(targets[k], config.sigma, replication_seed(config.seed, config.n_list[k], rep));
  });

  RiskCurve curve;
  for (std::size_t k = 0; k < sizes; ++k) {
    const std::span<const double> row(losses.data() + k * reps, reps);
    const double mean = pairwise_sum(row) / static_cast<double>(reps);
    double se = 0.0;
    if (reps > 1) {
      const std::vector<double> centre(reps, mean);
      const double var = pairwise_sum_sq_diff(row, centre) / static_cast<double>(reps - 1);
      se = std::sqrt(var / static_cast<double>(reps));
    }
    curve.rows.push_back({config.n_list[k], mean, se, reps});
  }
  return curve;
}

RateFit rate_exponent(const RiskCurve& curve) {
  std::vector<double> x, y;
  for (const RiskRow& row : curve.rows) {
    if (!(row.mean_risk > 0.0)) continue;
    x.push_back(std::log(static_cast<double>(row.n)));
    y.push_back(std::log(row.mean_risk));
  }
  if (x.size() < 2) throw InvalidArgument("rate_exponent: need at least two rows with positive mean risk");
  const LineFit fit = ols_line(x, y);
  return {fit.slope, fit.intercept, fit.r_squared};
}

bool compare_to_lower_bound(const RiskCurve& curve, const LowerBoundReport& report) {
  const auto it = std::find_if(curve.rows.begin(), curve.rows.end(),
                               [&](const RiskRow& r) { return r.n == report.inputs.n; });
  if (it == curve.rows.end())
    throw InvalidArgument("compare_to_lower_bound: no risk row at n = " + std::to_string(report.inputs.n));
  if (!report.valid) return true;
  return it->mean_risk - 2.0 * it->std_error >= report.value;
}

bool compare_to_lower_bound(const RiskCurve& curve, std::span<const LowerBoundReport> reports) {
  bool ok = true;
  for (const LowerBoundReport& r : reports) ok = compare_to_lower_bound(curve, r) && ok;
  return ok;
}

}  // namespace convexreg
