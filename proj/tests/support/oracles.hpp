#pragma once

// Reference computations for tests. Nothing here calls the library's solver
// or formula code.

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "convexreg/grid.hpp"
#include "convexreg/random.hpp"

namespace oracle {

using hp = boost::multiprecision::cpp_bin_float_50;

/// Solves A z = b by Gaussian elimination with partial pivoting.
inline std::optional<std::vector<long double>> solve_dense(std::vector<std::vector<long double>> A,
                                                           std::vector<long double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
    if (std::fabs(A[piv][c]) < 1e-300L) return std::nullopt;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double f = A[r][c] / A[c][c];
      if (f == 0.0L) continue;
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<long double> z(n);
  for (std::size_t r = n; r-- > 0;) {
    long double acc = b[r];
    for (std::size_t k = r + 1; k < n; ++k) acc -= A[r][k] * z[k];
    z[r] = acc / A[r][r];
  }
  return z;
}

/// Projection onto {theta : second divided differences >= 0} by trying every
/// equality set S and solving the full Lagrange system
///   [I  -A_S^T] [theta]   [y]
///   [A_S    0 ] [mu   ] = [0]
/// in long double; returns the first candidate with theta feasible and
/// mu >= 0. Exponential: keep n <= 12.
inline std::vector<double> projection_by_enumeration(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n <= 2) return y;
  const std::size_t rows = n - 2;
  std::vector<std::vector<long double>> D(rows, std::vector<long double>(n, 0.0L));
  for (std::size_t r = 0; r < rows; ++r) {
    const long double hl = static_cast<long double>(x[r + 1]) - x[r];
    const long double hr = static_cast<long double>(x[r + 2]) - x[r + 1];
    D[r][r] = 1.0L / hl;
    D[r][r + 1] = -1.0L / hl - 1.0L / hr;
    D[r][r + 2] = 1.0L / hr;
  }
  long double hmin = 1.0L;
  for (std::size_t i = 1; i < n; ++i) hmin = std::min(hmin, static_cast<long double>(x[i]) - x[i - 1]);
  long double scale = 1.0L;
  for (double v : y) scale = std::max(scale, static_cast<long double>(std::fabs(v)));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rows); ++mask) {
    std::vector<std::size_t> S;
    for (std::size_t r = 0; r < rows; ++r)
      if (mask >> r & 1u) S.push_back(r);
    const std::size_t k = S.size();
    std::vector<std::vector<long double>> M(n + k, std::vector<long double>(n + k, 0.0L));
    std::vector<long double> rhs(n + k, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
      M[i][i] = 1.0L;
      rhs[i] = y[i];
    }
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t i = 0; i < n; ++i) {
        M[i][n + a] = -D[S[a]][i];
        M[n + a][i] = D[S[a]][i];
      }
    const auto z = solve_dense(M, rhs);
    if (!z) continue;
    bool ok = true;
    for (std::size_t a = 0; a < k && ok; ++a) ok = (*z)[n + a] >= -1e-12L * scale;
    for (std::size_t r = 0; r < rows && ok; ++r) {
      long double d = 0.0L;
      for (std::size_t i = 0; i < n; ++i) d += D[r][i] * (*z)[i];
      ok = d >= -1e-12L * scale / hmin;
    }
    if (!ok) continue;
    return std::vector<double>(z->begin(), z->begin() + static_cast<std::ptrdiff_t>(n));
  }
  throw std::logic_error("projection_by_enumeration: no KKT point found");
}

/// (1/n) sum (f - g)^2 accumulated in long double.
inline double dense_l2(const convexreg::SampledFunction& f, const convexreg::SampledFunction& g) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const long double d = static_cast<long double>(f[i]) - g[i];
    acc += d * d;
  }
  return static_cast<double>(acc / f.size());
}

/// Integral of (f - g)^2 over [a, b] by composite Simpson on `panels` panels
/// of each knot-free piece (exact for piecewise quadratics up to rounding).
template <typename F, typename G>
double simpson_sq_diff(F&& f, G&& g, const std::vector<double>& cuts, int panels = 8) {
  long double total = 0.0L;
  for (std::size_t s = 1; s < cuts.size(); ++s) {
    const long double lo = cuts[s - 1], hi = cuts[s];
    const long double h = (hi - lo) / panels;
    long double acc = 0.0L;
    for (int k = 0; k <= panels; ++k) {
      const double t = static_cast<double>(lo + k * h);
      const long double d = static_cast<long double>(f(t)) - g(t);
      const long double w = (k == 0 || k == panels) ? 1.0L : (k % 2 ? 4.0L : 2.0L);
      acc += w * d * d;
    }
    total += acc * h / 3.0L;
  }
  return static_cast<double>(total);
}

inline hp assouad(hp k1, hp k2, hp a, hp b, hp c1, hp c2, hp sigma, hp n) {
  using boost::multiprecision::pow;
  using boost::multiprecision::sqrt;
  return k1 * k1 / (4096 * c2) * pow(sqrt(c1) / k2, hp(8) / 5) * (b - a) * pow(sigma * sigma / n, hp(4) / 5);
}

inline hp radius(hp k2, hp c1, hp sigma, hp n) {
  using boost::multiprecision::pow;
  return pow(k2 * c1 * c1 / 32, hp(1) / 5) * pow(sigma * sigma / n, hp(2) / 5);
}

inline hp rig1d(hp C, hp c1, hp sigma, hp n, hp R) {
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  using boost::multiprecision::pow;
  using boost::multiprecision::sqrt;
  return C * log(exp(hp(1)) * n / (2 * c1)) * pow(sigma * sigma * sqrt(R) / n, hp(4) / 5);
}

inline double rel_err(double got, const hp& want) {
  return static_cast<double>(boost::multiprecision::abs((hp(got) - want) / want));
}

/// Random responses of size n drawn from N(0, 1) plus a random quadratic.
inline std::vector<double> random_responses(const convexreg::DesignGrid& grid, std::uint64_t seed) {
  convexreg::Rng rng(seed);
  const double c2 = rng.uniform(-3.0, 3.0), c1 = rng.uniform(-1.0, 1.0);
  std::vector<double> y(grid.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = c2 * grid[i] * grid[i] + c1 * grid[i] + rng.normal();
  return y;
}

/// Strictly increasing random points in [0, 1].
inline convexreg::DesignGrid random_grid(std::size_t n, std::uint64_t seed) {
  convexreg::Rng rng(seed);
  std::vector<double> gaps(n);
  long double total = 0.0L;
  for (auto& g : gaps) {
    g = rng.uniform(0.2, 1.0);
    total += g;
  }
  std::vector<double> pts(n);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    acc += gaps[i];
    pts[i] = static_cast<double>(acc / total);
  }
  pts[n - 1] = 1.0;
  return convexreg::DesignGrid(pts);
}

}  // namespace oracle
