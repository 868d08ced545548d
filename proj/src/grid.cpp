#include "vexlp/grid.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "vexlp/error.hpp"

namespace vexlp {

Grid::Grid(int dim, Point lo, Point hi, std::array<std::size_t, 2> counts)
    : dim_(dim), lo_(lo), hi_(hi), counts_(counts) {
  if (dim != 1 && dim != 2) throw Error("grid dimension must be 1 or 2");
  if (dim == 1) {
    lo_[1] = 0.0;
    hi_[1] = 1.0;
    counts_[1] = 1;
  }
  for (int a = 0; a < dim; ++a) {
    if (!std::isfinite(lo_[a]) || !std::isfinite(hi_[a]) || !(hi_[a] > lo_[a]))
      throw Error("grid axis " + std::to_string(a) + ": need finite lo < hi");
    if (counts_[a] < 2) throw Error("grid axis " + std::to_string(a) + ": need at least 2 cells");
    if (!(spacing(a) > 0.0)) throw Error("grid axis " + std::to_string(a) + ": spacing underflows");
  }
  if (counts_[1] != 0 && counts_[0] > std::numeric_limits<std::size_t>::max() / counts_[1])
    throw Error("grid point count overflows the index range");
}

Grid Grid::line(double lo, double hi, std::size_t count) { return Grid(1, {lo, 0.0}, {hi, 1.0}, {count, 1}); }

Grid Grid::rect(Point lo, Point hi, std::size_t count0, std::size_t count1) {
  return Grid(2, lo, hi, {count0, count1});
}

double Grid::min_spacing() const { return dim_ == 1 ? spacing(0) : std::min(spacing(0), spacing(1)); }

double Grid::box_volume() const {
  double v = hi_[0] - lo_[0];
  if (dim_ == 2) v *= hi_[1] - lo_[1];
  return v;
}

double Grid::diameter() const {
  double d = 0.0;
  for (int a = 0; a < dim_; ++a) d += (hi_[a] - lo_[a]) * (hi_[a] - lo_[a]);
  return std::sqrt(d);
}

Point Grid::center(std::size_t index) const {
  const auto [i0, i1] = multi_index(index);
  return {center(0, i0), dim_ == 2 ? center(1, i1) : 0.0};
}

bool Grid::contains(const Point& x) const {
  for (int a = 0; a < dim_; ++a)
    if (x[a] < lo_[a] || x[a] > hi_[a]) return false;
  return true;
}

std::size_t Grid::nearest_cell(const Point& x) const {
  std::array<std::size_t, 2> idx{0, 0};
  for (int a = 0; a < dim_; ++a) {
    const double t = std::floor((x[a] - lo_[a]) / spacing(a));
    idx[a] = static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(counts_[a] - 1)));
  }
  return index(idx[0], idx[1]);
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw Error("grid mismatch");
}

SampledFunction::SampledFunction(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error("sampled function has " + std::to_string(values_.size()) + " values for " +
                std::to_string(grid_.size()) + " cells");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error("sampled function values must be finite");
}

SampledFunction SampledFunction::zeros(const Grid& grid) { return constant(grid, 0.0); }

SampledFunction SampledFunction::constant(const Grid& grid, double value) {
  return SampledFunction(grid, std::vector<double>(grid.size(), value));
}

SampledFunction SampledFunction::sample(const Grid& grid, const std::function<double(const Point&)>& fn) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.center(i));
  return SampledFunction(grid, std::move(v));
}

double SampledFunction::interpolate(const Point& x) const {
  if (!grid_.contains(x)) return 0.0;
  std::array<std::size_t, 2> base{0, 0};
  std::array<double, 2> frac{0.0, 0.0};
  for (int a = 0; a < grid_.dim(); ++a) {
    const double n = static_cast<double>(grid_.count(a));
    const double t = std::clamp((x[a] - grid_.lo(a)) / grid_.spacing(a) - 0.5, 0.0, n - 1.0);
    const double i = std::min(std::floor(t), n - 2.0);
    base[a] = static_cast<std::size_t>(i);
    frac[a] = t - i;
  }
  if (grid_.dim() == 1) {
    const std::size_t i = base[0];
    return (1.0 - frac[0]) * values_[i] + frac[0] * values_[i + 1];
  }
  const std::size_t i0 = base[0], i1 = base[1];
  const double v00 = values_[grid_.index(i0, i1)];
  const double v10 = values_[grid_.index(i0 + 1, i1)];
  const double v01 = values_[grid_.index(i0, i1 + 1)];
  const double v11 = values_[grid_.index(i0 + 1, i1 + 1)];
  const double lo = (1.0 - frac[0]) * v00 + frac[0] * v10;
  const double hi = (1.0 - frac[0]) * v01 + frac[0] * v11;
  return (1.0 - frac[1]) * lo + frac[1] * hi;
}

double SampledFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Measure Measure::lebesgue() { return Measure(); }

Measure Measure::weighted(const Grid& grid, std::vector<double> weights) {
  if (weights.size() != grid.size()) throw Error("measure weights must have one entry per cell");
  bool any_positive = false;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw Error("measure weights must be finite and non-negative");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw Error("measure needs at least one positive weight");
  Measure m;
  m.kind_ = Kind::weighted;
  m.weights_ = std::move(weights);
  m.grid_ = grid;
  return m;
}

Measure Measure::normalized(const Grid& grid) {
  return weighted(grid, std::vector<double>(grid.size(), 1.0 / grid.box_volume()));
}

void Measure::check_grid(const Grid& g) const {
  if (grid_) require_same_grid(*grid_, g);
}

double Measure::total_mass(const Grid& g) const {
  return integrate_cells(g, *this, [](std::size_t) { return 1.0; });
}

bool Measure::is_probability(const Grid& g) const {
  return kind_ == Kind::weighted && std::abs(total_mass(g) - 1.0) <= 1e-12;
}

double integrate_cells(const Grid& grid, const Measure& mu, const std::function<double(std::size_t)>& term) {
  mu.check_grid(grid);
  CompensatedSum sum;
  const std::size_t n = grid.size();
  if (mu.kind() == Measure::Kind::lebesgue) {
    for (std::size_t i = 0; i < n; ++i) sum.add(term(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double w = mu.weight(i);
      if (w > 0.0) sum.add(term(i) * w);
    }
  }
  // (sum * |box|) / N rather than sum * h^d: constant data integrates exactly.
  return sum.value() * grid.box_volume() / static_cast<double>(n);
}

double integrate(const SampledFunction& f, const Measure& mu) {
  const auto v = f.values();
  return integrate_cells(f.grid(), mu, [v](std::size_t i) { return v[i]; });
}

double ess_sup(const SampledFunction& f, const Mask& mask) {
  if (mask.size() != f.size()) throw Error("mask length does not match the grid");
  double m = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) m = std::max(m, std::abs(f[i]));
  return m;
}

SampledFunction pointwise(PointwiseOp op, const SampledFunction& f, const SampledFunction* g, double c) {
  const bool binary = op == PointwiseOp::add || op == PointwiseOp::sub || op == PointwiseOp::mul;
  if (binary) {
    if (g == nullptr) throw Error("binary pointwise operation needs two operands");
    require_same_grid(f.grid(), g->grid());
  }
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    switch (op) {
      case PointwiseOp::add: out[i] = f[i] + (*g)[i]; break;
      case PointwiseOp::sub: out[i] = f[i] - (*g)[i]; break;
      case PointwiseOp::mul: out[i] = f[i] * (*g)[i]; break;
      case PointwiseOp::abs: out[i] = std::abs(f[i]); break;
      case PointwiseOp::scale: out[i] = c * f[i]; break;
    }
  }
  return SampledFunction(f.grid(), std::move(out));
}

SampledFunction add(const SampledFunction& f, const SampledFunction& g) { return pointwise(PointwiseOp::add, f, &g); }
SampledFunction sub(const SampledFunction& f, const SampledFunction& g) { return pointwise(PointwiseOp::sub, f, &g); }
SampledFunction mul(const SampledFunction& f, const SampledFunction& g) { return pointwise(PointwiseOp::mul, f, &g); }
SampledFunction abs(const SampledFunction& f) { return pointwise(PointwiseOp::abs, f); }
SampledFunction scale(const SampledFunction& f, double c) { return pointwise(PointwiseOp::scale, f, nullptr, c); }

}  // namespace vexlp
