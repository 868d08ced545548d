#pragma once

// Seeded random grid data for property runs. Everything flows from one
// std::mt19937_64, so a seed pins the whole sequence.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "vexlp/exponent.hpp"
#include "vexlp/grid.hpp"

namespace vexlp {

using Rng = std::mt19937_64;

/// Uniform on [0, 1) from the top 53 bits.
inline double uniform(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform(rng); }
inline std::size_t uniform_index(Rng& rng, std::size_t n) { return static_cast<std::size_t>(uniform(rng) * n); }

/// Cell values with a random overall scale 10^[-2, 2], a random sign pattern,
/// and about a fifth of the cells left at zero.
inline SampledFunction random_function(const Grid& grid, Rng& rng) {
  const double scale = std::pow(10.0, uniform(rng, -2.0, 2.0));
  std::vector<double> v(grid.size());
  for (double& x : v) x = uniform(rng) < 0.2 ? 0.0 : scale * uniform(rng, -1.0, 1.0);
  return SampledFunction(grid, std::move(v));
}

/// Random smooth-ish exponent in [1.05, 6] with optional blocks of cells
/// forced to p = 1 and p = inf.
inline VariableExponent random_exponent(const Grid& grid, Rng& rng, bool with_one = false, bool with_inf = false) {
  const double base = uniform(rng, 1.2, 4.0);
  const double amp = uniform(rng, 0.0, 0.9 * (base - 1.05));
  const double freq = uniform(rng, 0.5, 6.0);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point x = grid.center(i);
    v[i] = std::min(6.0, base + amp * std::sin(freq * (x[0] + 0.7 * x[1])) + uniform(rng, 0.0, 0.05));
  }
  auto stamp = [&](double value) {
    const std::size_t len = 1 + uniform_index(rng, std::max<std::size_t>(1, v.size() / 8));
    const std::size_t start = uniform_index(rng, v.size() - len + 1);
    for (std::size_t i = start; i < start + len; ++i) v[i] = value;
  };
  if (with_one) stamp(1.0);
  if (with_inf) stamp(kInfiniteExponent);
  return VariableExponent(grid, std::move(v));
}

}  // namespace vexlp
