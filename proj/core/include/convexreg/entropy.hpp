#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "convexreg/functions.hpp"
#include "convexreg/grid.hpp"

namespace convexreg {

/// Functions with kappa1 <= phi'' <= kappa2 on [a, b].
struct CurvatureClass {
  double a = 0.0;
  double b = 1.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;

  /// Throws InvalidArgument unless 0 <= a < b <= 1 and 0 < kappa1 <= kappa2.
  void validate() const;
  /// phi0 is convex on [0, 1] and its curvature range on [a, b] fits.
  bool contains(const TruthFunction& phi0) const;
};

struct AffinePiece {
  double slope = 0.0;
  double intercept = 0.0;
  double operator()(double x) const noexcept { return intercept + slope * x; }
};

/// Chords alpha_i of phi0 over [t_{i-1}, t_i], t_i = a + (b-a) i/m, as affine
/// functions on all of [0, 1].
std::vector<AffinePiece> bump_interpolants(const std::function<double(double)>& phi0, std::size_t m,
                                           const CurvatureClass& cls);

/// max(phi0, max_{i : tau_i = 1} alpha_i) at the design points.
SampledFunction phi_tau(const std::function<double(double)>& phi0, std::span<const AffinePiece> alphas,
                        const std::vector<bool>& tau, const DesignGrid& grid);

/// ceil(exp(m / 8)).
std::size_t vg_target_size(std::size_t m);
/// ceil(m / 4).
std::size_t vg_target_distance(std::size_t m);

/// Set of length-m bit vectors, packed 64 bits per word.
class BinaryCode {
 public:
  BinaryCode(std::size_t m, std::vector<std::vector<std::uint64_t>> words);
  /// Convenience for explicit witnesses.
  static BinaryCode from_bits(const std::vector<std::vector<bool>>& codewords);

  std::size_t length() const noexcept { return m_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool bit(std::size_t codeword, std::size_t i) const noexcept {
    return (words_[codeword][i / 64] >> (i % 64)) & 1u;
  }
  std::vector<bool> codeword(std::size_t j) const;
  const std::vector<std::uint64_t>& packed(std::size_t j) const noexcept { return words_[j]; }
  std::size_t hamming(std::size_t j, std::size_t k) const noexcept;
  /// Minimum pairwise Hamming distance (m when there are fewer than two words).
  std::size_t min_hamming() const noexcept { return min_hamming_; }

 private:
  std::size_t m_;
  std::vector<std::vector<std::uint64_t>> words_;
  std::size_t min_hamming_;
};

/// Greedy randomized code with at least vg_target_size(m) words and pairwise
/// Hamming distance >= vg_target_distance(m). Each attempt draws up to
/// 100x the target size; failed attempts restart on a fresh stream. Throws
/// InvalidArgument for m = 0 or m > 80 (exp(m/8) words cannot be held),
/// InternalError if every restart fails.
BinaryCode vg_code(std::size_t m, std::uint64_t seed);

/// {phi_tau : tau in W} for a Varshamov-Gilbert code W. Members are kept
/// implicitly (phi0 samples plus the bump chords) and materialized on demand.
struct PackingSet {
  CurvatureClass cls;
  std::size_t m = 0;
  SampledFunction phi0;
  std::vector<AffinePiece> alphas;
  BinaryCode code;
  std::vector<double> bump_l2;      ///< l2(phi0, max(phi0, alpha_i)) per bump
  double separation_bound = 0.0;    ///< kappa1^2 (b-a)^5 / (16384 c2 m^4)
  double epsilon = 0.0;             ///< half of sqrt(separation_bound)
  double min_pairwise_l2 = 0.0;     ///< smallest l2 between distinct members

  std::size_t size() const noexcept { return code.size(); }
  SampledFunction member(std::size_t j) const;
  std::vector<SampledFunction> members() const;
};

/// Smallest n with n >= 4 m c2 / (b - a).
std::size_t packing_required_n(std::size_t m, double c2, const CurvatureClass& cls);

/// Throws InvalidArgument if phi0 is not in the class, and
/// PreconditionViolation (carrying the required n) when the grid is too
/// coarse for m.
PackingSet build_packing(const TruthFunction& phi0, const CurvatureClass& cls, std::size_t m,
                         const DesignGrid& grid, std::uint64_t seed, std::size_t threads = 1);

/// max_i |phi(x_i) - phi0(x_i)| <= r.
bool sup_ball_membership(const SampledFunction& phi, const SampledFunction& phi0, double r);

struct ScalingPoint {
  std::size_t m = 0;
  double epsilon = 0.0;
  double log_inv_epsilon = 0.0;
  double log_code_size = 0.0;  ///< log |W|
};

struct ScalingEstimate {
  /// Log-log slope: OLS of log(log |W|) on log(1/epsilon). The entropy
  /// lower bound c epsilon^{-1/2} predicts 1/2.
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<ScalingPoint> points;
};

/// Regression of log(log |W|) on log(1/epsilon) over existing
/// packings. Throws InvalidArgument for fewer than two sets.
ScalingEstimate scaling_estimate(std::span<const PackingSet> sets);

/// Builds a packing for each m and regresses entropy on scale. Throws
/// InvalidArgument for fewer than two m values.
ScalingEstimate entropy_scaling_estimate(const TruthFunction& phi0, const CurvatureClass& cls,
                                         std::span<const std::size_t> m_list, const DesignGrid& grid,
                                         std::uint64_t seed, std::size_t threads = 1);

/// l2(phi0, max(phi0, alpha)) with alpha the chord of phi0 over [a, b].
double chord_deviation_l2(const std::function<double(double)>& phi0, double a, double b,
                          const DesignGrid& grid);

/// kappa1^2 (b-a)^5 / (4096 c2); a lower bound on chord_deviation_l2 when
/// phi0'' >= kappa1 on [a, b] and n >= 4 c2 / (b - a).
double chord_deviation_lower(double kappa1, double a, double b, double c2);

/// kappa2^2 (b-a)^5 / (32 c1); an upper bound on chord_deviation_l2 when
/// phi0'' <= kappa2 on [a, b] and n >= 4 c1 / (b - a).
double chord_deviation_upper(double kappa2, double a, double b, double c1);

}  // namespace convexreg
