#pragma once

#include "vexlp/error.hpp"
#include "vexlp/exponent.hpp"
#include "vexlp/grid.hpp"

namespace vexlp {

inline constexpr double kDefaultNormTol = 1e-9;
inline constexpr int kNormMaxIterations = 200;

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// Luxemburg norm with the evidence that produced it: modular(f / norm) <= 1
/// and the final bisection bracket [lo, hi] with norm == hi.
struct NormResult {
  double norm = 0.0;
  double modular_at_norm = 0.0;
  int iterations = 0;
  Bracket bracket;
};

/// Bisection did not converge; carries the last bracket it had.
class NormError : public Error {
 public:
  NormError(const std::string& what, Bracket last) : Error(what), last_bracket(last) {}
  Bracket last_bracket;
};

/// rho_p(f) = integral of |f|^p over {p < inf} plus sup |f| over {p = inf},
/// both against mu. Overflowing powers give +inf.
double modular(const SampledFunction& f, const VariableExponent& p, const Measure& mu);

/// inf { lambda > 0 : rho_p(f / lambda) <= 1 } by bisection on lambda; the
/// result's bracket width is at most tol * norm.
NormResult luxemburg_norm(const SampledFunction& f, const VariableExponent& p, const Measure& mu,
                          double tol = kDefaultNormTol);

/// Hoelder constant (1/p- - 1/p+ + 1)[Omega_* != 0] + [Omega_inf != 0] + [Omega_1 != 0],
/// regions counted when they carry positive mu-measure.
double hoelder_constant(const VariableExponent& p, const Measure& mu = Measure::lebesgue());

/// F_g(f) = integral of f g against mu.
double dual_pairing(const SampledFunction& f, const SampledFunction& g, const Measure& mu);

}  // namespace vexlp
