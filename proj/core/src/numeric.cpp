#include "convexreg/numeric.hpp"

#include <algorithm>
#include <cmath>

#include "convexreg/error.hpp"

namespace convexreg {
namespace {

constexpr std::size_t kLeafSize = 16;

template <typename Term>
double cascade(std::size_t begin, std::size_t end, const Term& term) {
  if (end - begin <= kLeafSize) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return cascade(begin, mid, term) + cascade(mid, end, term);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return cascade(0, values.size(), [&](std::size_t i) { return values[i]; });
}

double pairwise_sum_sq_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("pairwise_sum_sq_diff: length mismatch");
  return cascade(0, a.size(), [&](std::size_t i) {
    const double d = a[i] - b[i];
    return d * d;
  });
}

LineFit ols_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("ols_line: length mismatch");
  if (x.size() < 2) throw InvalidArgument("ols_line: need at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n;
  const double my = pairwise_sum(y) / n;
  const double sxx = cascade(0, x.size(), [&](std::size_t i) { return (x[i] - mx) * (x[i] - mx); });
  const double sxy = cascade(0, x.size(), [&](std::size_t i) { return (x[i] - mx) * (y[i] - my); });
  const double syy = cascade(0, x.size(), [&](std::size_t i) { return (y[i] - my) * (y[i] - my); });
  if (!(sxx > 0.0)) throw InvalidArgument("ols_line: x values are all equal");

  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy > 0.0) {
    const double sse = cascade(0, x.size(), [&](std::size_t i) {
      const double r = y[i] - (fit.intercept + fit.slope * x[i]);
      return r * r;
    });
    fit.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  }
  return fit;
}

}  // namespace convexreg
