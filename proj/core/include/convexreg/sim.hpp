#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "convexreg/bounds.hpp"
#include "convexreg/functions.hpp"
#include "convexreg/grid.hpp"

namespace convexreg {

struct ExperimentConfig {
  TruthFunction truth = TruthFunction::named("x2");
  std::vector<std::size_t> n_list;
  double sigma = 1.0;
  std::size_t reps = 1;
  std::uint64_t seed = 0;
  GridKind grid_kind = GridKind::uniform;

  /// Throws InvalidArgument unless n_list is nonempty, strictly ascending
  /// with every n >= 3, sigma >= 0 and reps >= 1.
  void validate() const;
};

struct RiskRow {
  std::size_t n = 0;
  double mean_risk = 0.0;
  double std_error = 0.0;
  std::size_t reps = 0;
};

struct RiskCurve {
  std::vector<RiskRow> rows;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Truth samples on a grid and the loss reference: their convex
/// projection, which equals the samples for convex truths.
struct SimulationTarget {
  SampledFunction truth;
  SampledFunction reference;
};

SimulationTarget make_target(const TruthFunction& truth, const DesignGrid& grid);

/// One replication: y = truth + sigma xi with xi drawn from Rng(rep_seed),
/// returns l2(LSE(y), reference).
double simulate_once(const SimulationTarget& target, double sigma, std::uint64_t rep_seed);
double simulate_once(const TruthFunction& truth, const DesignGrid& grid, double sigma, std::uint64_t rep_seed);

/// Stream seed of replication `rep` at sample size n.
std::uint64_t replication_seed(std::uint64_t seed, std::size_t n, std::size_t rep);

/// Mean and standard error (sample sd / sqrt(reps)) of the loss at each n.
/// Every replication owns a keyed stream and results are reduced in index
/// order, so the curve is identical for any thread count.
RiskCurve estimate_risk(const ExperimentConfig& config, std::size_t threads = 1);

/// OLS of log(mean_risk) on log(n) over rows with positive mean. Throws
/// InvalidArgument when fewer than two such rows exist.
RateFit rate_exponent(const RiskCurve& curve);

/// True iff mean - 2 se >= report.value at the row with the report's n.
/// Reports flagged invalid are skipped (true). Throws InvalidArgument when
/// no row has that n.
bool compare_to_lower_bound(const RiskCurve& curve, const LowerBoundReport& report);
bool compare_to_lower_bound(const RiskCurve& curve, std::span<const LowerBoundReport> reports);

}  // namespace convexreg
