#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace convexreg {

/// Mixes a root seed with a list of keys (e.g. n, replication index) into
/// an independent stream seed. Streams depend only on the key tuple, never
/// on the order in which they are requested.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

/// Deterministic random source. Uses mt19937_64 (bit-exact across standard
/// libraries) and hand-rolled transforms, so draws are reproducible across
/// toolchains; std::*_distribution output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace convexreg
