#include "vexlp/norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace vexlp {

namespace {

// rho(f / lambda) for many lambda: log|f| is taken once, each evaluation is
// then one exp per finite-exponent cell.
class ModularEvaluator {
 public:
  ModularEvaluator(const SampledFunction& f, const VariableExponent& p, const Measure& mu) {
    require_same_grid(f.grid(), p.grid());
    mu.check_grid(f.grid());
    const Grid& g = f.grid();
    box_ = g.box_volume();
    cells_ = static_cast<double>(g.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double w = mu.weight(i);
      const double a = std::abs(f[i]);
      if (!(w > 0.0) || a == 0.0) continue;
      if (p.is_infinite(i)) {
        sup_inf_region_ = std::max(sup_inf_region_, a);
      } else {
        log_abs_.push_back(std::log(a));
        exponent_.push_back(p[i]);
        weight_.push_back(w);
      }
    }
  }

  bool is_zero() const { return log_abs_.empty() && sup_inf_region_ == 0.0; }

  double operator()(double lambda) const {
    const double log_lambda = std::log(lambda);
    CompensatedSum sum;
    for (std::size_t k = 0; k < log_abs_.size(); ++k)
      sum.add(std::exp(exponent_[k] * (log_abs_[k] - log_lambda)) * weight_[k]);
    const double integral = sum.value() * box_ / cells_;
    return integral + sup_inf_region_ / lambda;
  }

 private:
  std::vector<double> log_abs_;
  std::vector<double> exponent_;
  std::vector<double> weight_;
  double sup_inf_region_ = 0.0;
  double box_ = 1.0;
  double cells_ = 1.0;
};

}  // namespace

double modular(const SampledFunction& f, const VariableExponent& p, const Measure& mu) {
  const double v = ModularEvaluator(f, p, mu)(1.0);
  return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}

NormResult luxemburg_norm(const SampledFunction& f, const VariableExponent& p, const Measure& mu, double tol) {
  if (!(tol > 0.0)) throw Error("norm tolerance must be positive");
  const ModularEvaluator rho(f, p, mu);
  NormResult result;
  if (rho.is_zero()) return result;

  // Geometric search for lo < hi with rho(f/lo) > 1 >= rho(f/hi). Bounded by
  // the double exponent range.
  double hi = std::max(f.max_abs(), 1e-300);
  double lo = hi;
  constexpr int kMaxExpansions = 2200;
  int expansions = 0;
  if (rho(hi) > 1.0) {
    while (rho(hi) > 1.0) {
      lo = hi;
      hi *= 2.0;
      if (++expansions > kMaxExpansions || !std::isfinite(hi))
        throw NormError("norm bracket search did not terminate", {lo, hi});
    }
  } else {
    lo = hi / 2.0;
    while (!(rho(lo) > 1.0)) {
      hi = lo;
      lo /= 2.0;
      if (++expansions > kMaxExpansions || lo == 0.0)
        throw NormError("norm bracket search did not terminate", {lo, hi});
    }
  }

  // Stop a little inside the advertised width so the returned hi is within
  // tol of the infimum with room to spare.
  const double target = 0.25 * tol;
  int iterations = 0;
  while (hi - lo > target * hi) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (++iterations > kNormMaxIterations) throw NormError("norm bisection did not converge", {lo, hi});
    if (rho(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  result.norm = hi;
  result.modular_at_norm = rho(hi);
  result.iterations = iterations;
  result.bracket = {lo, hi};
  return result;
}

double hoelder_constant(const VariableExponent& p, const Measure& mu) {
  mu.check_grid(p.grid());
  bool has_one = false, has_finite = false, has_inf = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!mu.positive(i)) continue;
    switch (p.region(i)) {
      case Region::one: has_one = true; break;
      case Region::finite: has_finite = true; break;
      case Region::infinite: has_inf = true; break;
    }
  }
  double k = 0.0;
  if (has_finite) {
    const Extremes e = extremes(p, mu);
    const double inv_plus = e.p_plus == kInfiniteExponent ? 0.0 : 1.0 / e.p_plus;
    k += 1.0 / e.p_minus - inv_plus + 1.0;
  }
  if (has_inf) k += 1.0;
  if (has_one) k += 1.0;
  return k;
}

double dual_pairing(const SampledFunction& f, const SampledFunction& g, const Measure& mu) {
  require_same_grid(f.grid(), g.grid());
  const auto fv = f.values();
  const auto gv = g.values();
  return integrate_cells(f.grid(), mu, [fv, gv](std::size_t i) { return fv[i] * gv[i]; });
}

}  // namespace vexlp
