#pragma once

// Uniform cell-centred grids on boxes in R^1 and R^2, functions sampled on
// them, and the midpoint quadrature every other module integrates with.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace vexlp {

using Point = std::array<double, 2>;
using Mask = std::vector<std::uint8_t>;

/// Neumaier-compensated running sum. Summation order is the caller's.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Box [lo, hi] split into counts[0] x counts[1] cells. A 1D grid keeps a
/// dummy second axis with one cell so index arithmetic is shared.
class Grid {
 public:
  Grid(int dim, Point lo, Point hi, std::array<std::size_t, 2> counts);

  static Grid line(double lo, double hi, std::size_t count);
  static Grid rect(Point lo, Point hi, std::size_t count0, std::size_t count1);

  int dim() const { return dim_; }
  std::size_t size() const { return counts_[0] * counts_[1]; }
  std::size_t count(int axis) const { return counts_[axis]; }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  double spacing(int axis) const { return (hi_[axis] - lo_[axis]) / static_cast<double>(counts_[axis]); }
  double min_spacing() const;
  /// Lebesgue measure of the box (length in 1D, area in 2D).
  double box_volume() const;
  double cell_volume() const { return box_volume() / static_cast<double>(size()); }
  /// Euclidean diameter of the box.
  double diameter() const;

  std::size_t index(std::size_t i0, std::size_t i1 = 0) const { return i0 + counts_[0] * i1; }
  std::array<std::size_t, 2> multi_index(std::size_t index) const {
    return {index % counts_[0], index / counts_[0]};
  }
  double center(int axis, std::size_t i) const {
    return lo_[axis] + (static_cast<double>(i) + 0.5) * spacing(axis);
  }
  Point center(std::size_t index) const;
  /// Closed-box membership.
  bool contains(const Point& x) const;

  /// Index of the cell whose centre is nearest to x (clamped into the box).
  std::size_t nearest_cell(const Point& x) const;

  bool operator==(const Grid&) const = default;

 private:
  int dim_;
  Point lo_;
  Point hi_;
  std::array<std::size_t, 2> counts_;
};

/// One value per cell centre; all values finite.
class SampledFunction {
 public:
  SampledFunction(Grid grid, std::vector<double> values);

  static SampledFunction zeros(const Grid& grid);
  static SampledFunction constant(const Grid& grid, double value);
  static SampledFunction sample(const Grid& grid, const std::function<double(const Point&)>& fn);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  /// Multilinear interpolation between cell centres, constant out to the box
  /// edge, zero outside the box.
  double interpolate(const Point& x) const;

  double max_abs() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Lebesgue measure, or a cell-wise density against Lebesgue measure.
class Measure {
 public:
  enum class Kind { lebesgue, weighted };

  static Measure lebesgue();
  static Measure weighted(const Grid& grid, std::vector<double> weights);
  /// Uniform probability measure on the grid box.
  static Measure normalized(const Grid& grid);

  Kind kind() const { return kind_; }
  /// Density at cell i (1 for Lebesgue).
  double weight(std::size_t i) const { return kind_ == Kind::lebesgue ? 1.0 : weights_[i]; }
  bool positive(std::size_t i) const { return weight(i) > 0.0; }
  /// Grid the weights live on; empty for Lebesgue measure.
  const std::optional<Grid>& grid() const { return grid_; }
  /// Throws "grid mismatch" if this measure cannot be used on g.
  void check_grid(const Grid& g) const;
  /// Total mass of grid box g under this measure.
  double total_mass(const Grid& g) const;
  bool is_probability(const Grid& g) const;

 private:
  Measure() = default;
  Kind kind_ = Kind::lebesgue;
  std::vector<double> weights_;
  std::optional<Grid> grid_;
};

/// Midpoint quadrature of the cell values term(i) against mu, summed in
/// lexicographic cell order.
double integrate_cells(const Grid& grid, const Measure& mu, const std::function<double(std::size_t)>& term);

double integrate(const SampledFunction& f, const Measure& mu);

/// Max of |f| over masked cells, 0 for an empty mask.
double ess_sup(const SampledFunction& f, const Mask& mask);

enum class PointwiseOp { add, sub, mul, abs, scale };

SampledFunction pointwise(PointwiseOp op, const SampledFunction& f, const SampledFunction* g = nullptr,
                          double c = 1.0);

SampledFunction add(const SampledFunction& f, const SampledFunction& g);
SampledFunction sub(const SampledFunction& f, const SampledFunction& g);
SampledFunction mul(const SampledFunction& f, const SampledFunction& g);
SampledFunction abs(const SampledFunction& f);
SampledFunction scale(const SampledFunction& f, double c);

/// Throws "grid mismatch" unless a == b.
void require_same_grid(const Grid& a, const Grid& b);

}  // namespace vexlp
