#pragma once

// Witness that the modular inequality for phi_sigma * fails for a non-constant
// exponent: with f = R chi_V, the ratio
//   int |phi_sigma * f|^{p(x)} dx / int |f|^{p(x)} dx
// grows like a positive power of R.

#include <vector>

#include "vexlp/exponent.hpp"
#include "vexlp/mollify.hpp"
#include "vexlp/report.hpp"

namespace vexlp {

struct Box {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};
};

struct WitnessConfig {
  VariableExponent p;
  Mollifier phi;
  double eps = 0.0;     // (p+ - p-) / 3
  Point y0{0.0, 0.0};   // centre of U, inside E = {p > p+ - eps}
  Point x0{0.0, 0.0};   // centre of V, inside F = {p < p- + eps}
  double r = 0.0;
  Box u_box;
  Box v_box;
  int j = 0;            // phi > c0 on |z| < 2^-j
  double c0 = 0.0;
  double sigma = 0.0;
};

/// Builds the witness: eps, E and F, the centres of their largest runs (1D)
/// or squares (2D), r, the positivity scan for (j, c0), and
/// sigma = 1.1 * 2^j (|x0 - y0| + 2r). Re-checks the invariants before
/// returning.
WitnessConfig auto_witness(const VariableExponent& p, const Mollifier& phi);

/// Re-verifies the exponent bounds on U and V cells and the sigma condition.
/// Throws describing the first violation.
void check_witness(const WitnessConfig& cfg);

/// Same geometry with a different exponent; skips the non-constant guard so a
/// constant-exponent control can reuse a witness.
WitnessConfig with_exponent(const WitnessConfig& cfg, const VariableExponent& p);

/// Rows (R, lhs, rhs, ratio) in the given order; lhs/rhs/ratio are +inf when
/// they overflow. Metadata: slope (least squares of log ratio on log R over
/// the finite rows; needs >= 4 of them with distinct R), eps, sigma, c0, j, r.
ExperimentReport ratio_curve(const WitnessConfig& cfg, const std::vector<double>& r_list);

/// int_U (c0 |V| R / sigma^n)^{p(x)} dx, the lower bound on lhs.
double witness_lower_bound(const WitnessConfig& cfg, double R);

/// Cells of cfg's grid whose centres lie in the box.
Mask box_mask(const Grid& grid, const Box& box);

}  // namespace vexlp
