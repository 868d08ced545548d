#include "vexlp/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "vexlp/error.hpp"

namespace vexlp {

double conjugate_value(double p) {
  if (p == kInfiniteExponent) return 1.0;
  if (p == 1.0) return kInfiniteExponent;
  return p / (p - 1.0);
}

namespace {

void validate_exponent_values(std::span<const double> values) {
  for (double v : values) {
    if (v == kInfiniteExponent) continue;
    if (!std::isfinite(v) || v < 1.0) throw Error("exponent values must lie in [1, inf]; got " + std::to_string(v));
  }
}

}  // namespace

VariableExponent::VariableExponent(Grid grid, std::vector<double> values) : grid_(std::move(grid)) {
  if (values.size() != grid_.size()) throw Error("exponent needs one value per grid cell");
  validate_exponent_values(values);
  std::vector<double> dual(values.size());
  std::transform(values.begin(), values.end(), dual.begin(), conjugate_value);
  values_ = std::make_shared<const std::vector<double>>(std::move(values));
  dual_ = std::make_shared<const std::vector<double>>(std::move(dual));
}

VariableExponent::VariableExponent(Grid grid, std::shared_ptr<const std::vector<double>> values,
                                   std::shared_ptr<const std::vector<double>> dual)
    : grid_(std::move(grid)), values_(std::move(values)), dual_(std::move(dual)) {}

VariableExponent VariableExponent::constant(const Grid& grid, double value) {
  return VariableExponent(grid, std::vector<double>(grid.size(), value));
}

VariableExponent VariableExponent::sample(const Grid& grid, const std::function<double(const Point&)>& fn) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.center(i));
  return VariableExponent(grid, std::move(v));
}

Region VariableExponent::region(std::size_t i) const {
  const double v = (*values_)[i];
  if (v == kInfiniteExponent) return Region::infinite;
  if (v == 1.0) return Region::one;
  return Region::finite;
}

Mask VariableExponent::mask(Region r) const {
  Mask m(size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = region(i) == r ? 1 : 0;
  return m;
}

VariableExponent VariableExponent::conjugate() const { return VariableExponent(grid_, dual_, values_); }

Extremes extremes(const VariableExponent& p) {
  const auto v = p.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

Extremes extremes(const VariableExponent& p, const Measure& mu) {
  mu.check_grid(p.grid());
  Extremes e{kInfiniteExponent, 1.0};
  bool any = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!mu.positive(i)) continue;
    any = true;
    e.p_minus = std::min(e.p_minus, p[i]);
    e.p_plus = std::max(e.p_plus, p[i]);
  }
  if (!any) throw Error("measure has no positive-weight cells");
  return e;
}

namespace {

struct PairScanner {
  std::vector<Point> x;
  std::vector<double> inv_p;
  std::vector<double> radius;
  LogHoelderReport report;

  void visit(std::size_t i, std::size_t j) {
    if (i == j) return;
    ++report.pairs_scanned;
    const double diff = std::abs(inv_p[i] - inv_p[j]);
    if (diff == 0.0) return;
    const double d = std::hypot(x[i][0] - x[j][0], x[i][1] - x[j][1]);
    if (d > 0.0 && d <= 0.5) report.c_local = std::max(report.c_local, diff * -std::log(d));
    // Condition is stated for |y| >= |x| with the weight taken at x.
    const double inner = std::min(radius[i], radius[j]);
    report.c_decay = std::max(report.c_decay, diff * std::log(std::numbers::e + inner));
  }
};

}  // namespace

LogHoelderReport log_hoelder_report(const VariableExponent& p, const LogHoelderOptions& options) {
  const Grid& g = p.grid();
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i)
    if (p.is_infinite(i)) throw Error("infinite exponent");

  PairScanner scan;
  scan.x.resize(n);
  scan.inv_p.resize(n);
  scan.radius.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    scan.x[i] = g.center(i);
    scan.inv_p[i] = 1.0 / p[i];
    scan.radius[i] = std::hypot(scan.x[i][0], scan.x[i][1]);
  }

  if (n <= options.exhaustive_limit) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) scan.visit(i, j);
    scan.report.exhaustive = true;
    return scan.report;
  }

  // Subsampled scan: every neighbour pair (where local jumps live), then
  // seeded random pairs for the long-range decay condition.
  scan.report.exhaustive = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [i0, i1] = g.multi_index(i);
    if (i0 + 1 < g.count(0)) scan.visit(i, g.index(i0 + 1, i1));
    if (g.dim() == 2 && i1 + 1 < g.count(1)) {
      scan.visit(i, g.index(i0, i1 + 1));
      if (i0 + 1 < g.count(0)) scan.visit(i, g.index(i0 + 1, i1 + 1));
      if (i0 > 0) scan.visit(i, g.index(i0 - 1, i1 + 1));
    }
  }
  std::mt19937_64 rng(options.seed);
  for (std::size_t k = 0; k < options.sample_pairs; ++k) scan.visit(rng() % n, rng() % n);
  return scan.report;
}

}  // namespace vexlp
