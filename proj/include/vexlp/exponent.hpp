#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "vexlp/grid.hpp"

namespace vexlp {

/// Marker for p(x) = infinity. Never fed to pow/exp: every consumer branches
/// on VariableExponent::is_infinite first.
inline constexpr double kInfiniteExponent = std::numeric_limits<double>::infinity();

/// Cell partition of an exponent: p = 1, 1 < p < inf, p = inf.
enum class Region : std::uint8_t { one, finite, infinite };

/// A variable exponent p(.) sampled on a grid, values in [1, inf]. The
/// conjugate exponent is computed once at construction and carried along, so
/// conjugate() is an exact involution.
class VariableExponent {
 public:
  VariableExponent(Grid grid, std::vector<double> values);

  static VariableExponent constant(const Grid& grid, double value);
  static VariableExponent sample(const Grid& grid, const std::function<double(const Point&)>& fn);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return *values_; }
  double operator[](std::size_t i) const { return (*values_)[i]; }
  std::size_t size() const { return values_->size(); }

  bool is_infinite(std::size_t i) const { return (*values_)[i] == kInfiniteExponent; }
  Region region(std::size_t i) const;
  Mask mask(Region r) const;

  VariableExponent conjugate() const;

 private:
  VariableExponent(Grid grid, std::shared_ptr<const std::vector<double>> values,
                   std::shared_ptr<const std::vector<double>> dual);

  Grid grid_;
  std::shared_ptr<const std::vector<double>> values_;
  std::shared_ptr<const std::vector<double>> dual_;
};

/// Pointwise conjugate of a single value: 1 <-> inf, otherwise p/(p-1).
double conjugate_value(double p);

struct Extremes {
  double p_minus;
  double p_plus;  // may be kInfiniteExponent
};

/// Discrete ess inf / ess sup over all cells.
Extremes extremes(const VariableExponent& p);
/// Same, restricted to cells of positive mu-weight.
Extremes extremes(const VariableExponent& p, const Measure& mu);

struct LogHoelderOptions {
  /// Grids up to this many cells are scanned over all pairs.
  std::size_t exhaustive_limit = 4096;
  /// Random pairs drawn above the limit (in addition to all neighbour pairs).
  std::size_t sample_pairs = 2'000'000;
  std::uint64_t seed = 0x5eed;
};

/// Smallest constants for the local and decay log-Hoelder conditions on 1/p.
/// A single shared constant is max(c_local, c_decay).
struct LogHoelderReport {
  double c_local = 0.0;
  double c_decay = 0.0;
  std::size_t pairs_scanned = 0;
  bool exhaustive = true;
  double combined() const { return c_local > c_decay ? c_local : c_decay; }
};

LogHoelderReport log_hoelder_report(const VariableExponent& p, const LogHoelderOptions& options = {});

}  // namespace vexlp
