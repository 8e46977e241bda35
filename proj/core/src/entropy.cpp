#include "convexreg/entropy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "convexreg/error.hpp"
#include "convexreg/numeric.hpp"
#include "convexreg/parallel.hpp"
#include "convexreg/random.hpp"

namespace convexreg {
namespace {

constexpr std::size_t kMaxCodeLength = 80;
constexpr std::size_t kRestarts = 16;
constexpr double kCurvatureSlack = 1e-12;

std::size_t popcount_xor(const std::vector<std::uint64_t>& u, const std::vector<std::uint64_t>& v) {
  std::size_t d = 0;
  for (std::size_t w = 0; w < u.size(); ++w) d += static_cast<std::size_t>(std::popcount(u[w] ^ v[w]));
  return d;
}

std::uint64_t last_word_mask(std::size_t m) {
  const std::size_t rem = m % 64;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

template <typename Selected>
std::vector<double> max_with_chords(std::span<const double> phi0_values, const DesignGrid& grid,
                                    std::span<const AffinePiece> alphas, Selected&& selected) {
  std::vector<double> out(phi0_values.begin(), phi0_values.end());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!selected(i)) continue;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::max(out[j], alphas[i](grid[j]));
  }
  return out;
}

AffinePiece chord(const std::function<double(double)>& phi0, double u, double v) {
  const double fu = phi0(u);
  const double slope = (phi0(v) - fu) / (v - u);
  return {slope, fu - slope * u};
}

}  // namespace

void CurvatureClass::validate() const {
  if (!(a >= 0.0 && a < b && b <= 1.0)) throw InvalidArgument("CurvatureClass: need 0 <= a < b <= 1");
  if (!(kappa1 > 0.0 && kappa1 <= kappa2) || !std::isfinite(kappa2))
    throw InvalidArgument("CurvatureClass: need 0 < kappa1 <= kappa2");
}

bool CurvatureClass::contains(const TruthFunction& phi0) const {
  validate();
  if (!phi0.is_convex()) return false;
  const auto c = phi0.curvature(a, b);
  if (!c) return false;
  return c->kappa1 >= kappa1 * (1.0 - kCurvatureSlack) && c->kappa2 <= kappa2 * (1.0 + kCurvatureSlack);
}

std::vector<AffinePiece> bump_interpolants(const std::function<double(double)>& phi0, std::size_t m,
                                           const CurvatureClass& cls) {
  cls.validate();
  if (m < 1) throw InvalidArgument("bump_interpolants: m must be at least 1");
  const double md = static_cast<double>(m);
  std::vector<AffinePiece> alphas(m);
  for (std::size_t i = 1; i <= m; ++i) {
    const double lo = cls.a + (cls.b - cls.a) * static_cast<double>(i - 1) / md;
    const double hi = i == m ? cls.b : cls.a + (cls.b - cls.a) * static_cast<double>(i) / md;
    alphas[i - 1] = chord(phi0, lo, hi);
  }
  return alphas;
}

SampledFunction phi_tau(const std::function<double(double)>& phi0, std::span<const AffinePiece> alphas,
                        const std::vector<bool>& tau, const DesignGrid& grid) {
  if (tau.size() != alphas.size()) throw InvalidArgument("phi_tau: tau length differs from number of chords");
  const SampledFunction base = SampledFunction::sample(grid, phi0);
  return SampledFunction(grid, max_with_chords(base.values(), grid, alphas, [&](std::size_t i) { return tau[i]; }));
}

std::size_t vg_target_size(std::size_t m) {
  return static_cast<std::size_t>(std::ceil(std::exp(static_cast<double>(m) / 8.0)));
}

std::size_t vg_target_distance(std::size_t m) { return (m + 3) / 4; }

BinaryCode::BinaryCode(std::size_t m, std::vector<std::vector<std::uint64_t>> words)
    : m_(m), words_(std::move(words)), min_hamming_(m) {
  if (m == 0) throw InvalidArgument("BinaryCode: length must be positive");
  const std::size_t word_count = (m + 63) / 64;
  const std::uint64_t mask = last_word_mask(m);
  for (const auto& w : words_)
    if (w.size() != word_count || (w.back() & ~mask) != 0)
      throw InvalidArgument("BinaryCode: codeword does not have length m");
  for (std::size_t j = 0; j < words_.size(); ++j)
    for (std::size_t k = j + 1; k < words_.size(); ++k)
      min_hamming_ = std::min(min_hamming_, popcount_xor(words_[j], words_[k]));
}

BinaryCode BinaryCode::from_bits(const std::vector<std::vector<bool>>& codewords) {
  if (codewords.empty()) throw InvalidArgument("BinaryCode::from_bits: no codewords");
  const std::size_t m = codewords.front().size();
  std::vector<std::vector<std::uint64_t>> words;
  for (const auto& c : codewords) {
    if (c.size() != m) throw InvalidArgument("BinaryCode::from_bits: codewords differ in length");
    std::vector<std::uint64_t> packed((m + 63) / 64, 0);
    for (std::size_t i = 0; i < m; ++i)
      if (c[i]) packed[i / 64] |= std::uint64_t{1} << (i % 64);
    words.push_back(std::move(packed));
  }
  return BinaryCode(m, std::move(words));
}

std::vector<bool> BinaryCode::codeword(std::size_t j) const {
  std::vector<bool> out(m_);
  for (std::size_t i = 0; i < m_; ++i) out[i] = bit(j, i);
  return out;
}

std::size_t BinaryCode::hamming(std::size_t j, std::size_t k) const noexcept {
  return popcount_xor(words_[j], words_[k]);
}

BinaryCode vg_code(std::size_t m, std::uint64_t seed) {
  if (m == 0) throw InvalidArgument("vg_code: m must be positive");
  if (m > kMaxCodeLength)
    throw InvalidArgument("vg_code: m = " + std::to_string(m) + " exceeds " + std::to_string(kMaxCodeLength) +
                          " (exp(m/8) codewords cannot be held)");
  const std::size_t target = vg_target_size(m);
  const std::size_t distance = vg_target_distance(m);
  const std::size_t word_count = (m + 63) / 64;
  const std::uint64_t mask = last_word_mask(m);

  for (std::size_t attempt = 0; attempt < kRestarts; ++attempt) {
    Rng rng(derive_seed(seed, {0x76676364ULL, m, attempt}));
    std::vector<std::vector<std::uint64_t>> kept;
    kept.reserve(target);
    std::vector<std::uint64_t> candidate(word_count);
    for (std::size_t draw = 0; draw < 100 * target && kept.size() < target; ++draw) {
      for (auto& w : candidate) w = rng.next_u64();
      candidate.back() &= mask;
      const bool far = std::all_of(kept.begin(), kept.end(),
                                   [&](const auto& k) { return popcount_xor(k, candidate) >= distance; });
      if (far) kept.push_back(candidate);
    }
    if (kept.size() == target) return BinaryCode(m, std::move(kept));
  }
  throw InternalError("vg_code: greedy construction failed for m = " + std::to_string(m));
}

SampledFunction PackingSet::member(std::size_t j) const {
  return SampledFunction(phi0.grid(), max_with_chords(phi0.values(), phi0.grid(), alphas,
                                                      [&](std::size_t i) { return code.bit(j, i); }));
}

std::vector<SampledFunction> PackingSet::members() const {
  std::vector<SampledFunction> out;
  out.reserve(size());
  for (std::size_t j = 0; j < size(); ++j) out.push_back(member(j));
  return out;
}

std::size_t packing_required_n(std::size_t m, double c2, const CurvatureClass& cls) {
  return static_cast<std::size_t>(std::ceil(4.0 * static_cast<double>(m) * c2 / (cls.b - cls.a)));
}

PackingSet build_packing(const TruthFunction& phi0, const CurvatureClass& cls, std::size_t m,
                         const DesignGrid& grid, std::uint64_t seed, std::size_t threads) {
  cls.validate();
  if (m < 1) throw InvalidArgument("build_packing: m must be at least 1");
  if (!cls.contains(phi0))
    throw InvalidArgument("build_packing: '" + phi0.id() + "' is not convex with curvature in [kappa1, kappa2]");
  const std::size_t n = grid.size();
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  if (nd < 4.0 * md * grid.c2() / (cls.b - cls.a)) {
    const std::size_t required = packing_required_n(m, grid.c2(), cls);
    throw PreconditionViolation("build_packing: n = " + std::to_string(n) + " too small for m = " +
                                    std::to_string(m) + "; need n >= " + std::to_string(required),
                                required);
  }

  PackingSet set{cls, m, phi0.sample(grid), {}, vg_code(m, seed), {}, 0.0, 0.0, 0.0};
  set.alphas = bump_interpolants([&](double x) { return phi0(x); }, m, cls);

  // Chords of a convex function exceed it only inside their own interval, so
  // each design point is raised by at most one bump. Pairwise distances then
  // split into per-bump contributions.
  std::vector<std::vector<double>> sq(m);
  const auto base = set.phi0.values();
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t owners = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double lift = set.alphas[i](grid[j]) - base[j];
      if (lift > 0.0) {
        sq[i].push_back(lift * lift);
        if (lift > 1e-12 * std::max(1.0, std::abs(base[j]))) ++owners;
      }
    }
    if (owners > 1) throw InternalError("build_packing: bump supports overlap");
  }
  set.bump_l2.resize(m);
  for (std::size_t i = 0; i < m; ++i) set.bump_l2[i] = pairwise_sum(sq[i]) / nd;

  set.separation_bound = cls.kappa1 * cls.kappa1 * std::pow(cls.b - cls.a, 5) / (16384.0 * grid.c2() * md * md * md * md);
  set.epsilon = 0.5 * std::sqrt(set.separation_bound);

  const std::size_t size = set.code.size();
  std::vector<double> row_min(size, std::numeric_limits<double>::infinity());
  parallel_for(size, threads, [&](std::size_t j) {
    for (std::size_t k = j + 1; k < size; ++k) {
      const auto& u = set.code.packed(j);
      const auto& v = set.code.packed(k);
      double d = 0.0;
      for (std::size_t w = 0; w < u.size(); ++w)
        for (std::uint64_t diff = u[w] ^ v[w]; diff != 0; diff &= diff - 1)
          d += set.bump_l2[64 * w + static_cast<std::size_t>(std::countr_zero(diff))];
      row_min[j] = std::min(row_min[j], d);
    }
  });
  set.min_pairwise_l2 = *std::min_element(row_min.begin(), row_min.end());
  return set;
}

bool sup_ball_membership(const SampledFunction& phi, const SampledFunction& phi0, double r) {
  if (!phi.grid().same_points(phi0.grid()))
    throw InvalidArgument("sup_ball_membership: functions live on different grids");
  for (std::size_t i = 0; i < phi.size(); ++i)
    if (std::abs(phi[i] - phi0[i]) > r) return false;
  return true;
}

ScalingEstimate scaling_estimate(std::span<const PackingSet> sets) {
  if (sets.size() < 2) throw InvalidArgument("scaling_estimate: need at least two packings");
  ScalingEstimate est;
  std::vector<double> xs, ys;
  for (const PackingSet& set : sets) {
    ScalingPoint p;
    p.m = set.m;
    p.epsilon = set.epsilon;
    p.log_inv_epsilon = -std::log(set.epsilon);
    p.log_code_size = std::log(static_cast<double>(set.size()));
    est.points.push_back(p);
    xs.push_back(p.log_inv_epsilon);
    ys.push_back(std::log(p.log_code_size));
  }
  const LineFit fit = ols_line(xs, ys);
  est.slope = fit.slope;
  est.intercept = fit.intercept;
  return est;
}

ScalingEstimate entropy_scaling_estimate(const TruthFunction& phi0, const CurvatureClass& cls,
                                         std::span<const std::size_t> m_list, const DesignGrid& grid,
                                         std::uint64_t seed, std::size_t threads) {
  if (m_list.size() < 2) throw InvalidArgument("entropy_scaling_estimate: need at least two values of m");
  std::vector<PackingSet> sets;
  for (std::size_t m : m_list) sets.push_back(build_packing(phi0, cls, m, grid, seed, threads));
  return scaling_estimate(sets);
}

double chord_deviation_l2(const std::function<double(double)>& phi0, double a, double b, const DesignGrid& grid) {
  if (!(a >= 0.0 && a < b && b <= 1.0)) throw InvalidArgument("chord_deviation_l2: need 0 <= a < b <= 1");
  const AffinePiece alpha = chord(phi0, a, b);
  std::vector<double> sq(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double base = phi0(grid[j]);
    const double lift = std::max(base, alpha(grid[j])) - base;
    sq[j] = lift * lift;
  }
  return pairwise_sum(sq) / static_cast<double>(grid.size());
}

double chord_deviation_lower(double kappa1, double a, double b, double c2) {
  if (!(kappa1 >= 0.0 && a < b && c2 > 0.0)) throw InvalidArgument("chord_deviation_lower: bad parameters");
  return kappa1 * kappa1 * std::pow(b - a, 5) / (4096.0 * c2);
}

double chord_deviation_upper(double kappa2, double a, double b, double c1) {
  if (!(kappa2 >= 0.0 && a < b && c1 > 0.0)) throw InvalidArgument("chord_deviation_upper: bad parameters");
  return kappa2 * kappa2 * std::pow(b - a, 5) / (32.0 * c1);
}

}  // namespace convexreg
