#pragma once

// Single-hidden-layer networks sum_j w_j Psi(a_j . x + b_j), radial networks
// sum_j w_j phi((x - z_j) / sigma_j), and the constructive approximants and
// density experiments built on them.

#include <optional>
#include <string>
#include <vector>

#include "vexlp/exponent.hpp"
#include "vexlp/grid.hpp"
#include "vexlp/mollify.hpp"
#include "vexlp/report.hpp"

namespace vexlp {

enum class SquashingKind { logistic, ramp, heaviside, table };

/// Non-decreasing Psi with Psi(-inf) = 0 and Psi(+inf) = 1.
///   logistic   1 / (1 + e^-x)
///   ramp       clamp(x + 1/2, 0, 1)
///   heaviside  1 for x >= 0, else 0
///   table      linear interpolation of monotone samples, constant beyond
///              the ends; end values must be within 1e-6 of 0 and 1.
class SquashingFn {
 public:
  static SquashingFn logistic();
  static SquashingFn ramp();
  static SquashingFn heaviside();
  static SquashingFn table(std::vector<double> x, std::vector<double> y);
  /// "logistic", "ramp" or "heaviside".
  static SquashingFn named(const std::string& name);

  SquashingKind kind() const { return kind_; }
  std::string name() const;
  double operator()(double x) const;

 private:
  explicit SquashingFn(SquashingKind kind) : kind_(kind) {}
  SquashingKind kind_;
  std::vector<double> x_;
  std::vector<double> y_;
};

struct SigmaTerm {
  double w = 0.0;
  Point a{0.0, 0.0};
  double b = 0.0;
  bool operator==(const SigmaTerm&) const = default;
};

struct SigmaNetwork {
  SquashingFn psi;
  int dim = 1;
  std::vector<SigmaTerm> terms;
};

struct RadialTerm {
  double w = 0.0;
  Point z{0.0, 0.0};
  double sigma = 1.0;
  bool operator==(const RadialTerm&) const = default;
};

struct RadialNetwork {
  Mollifier phi;
  std::vector<RadialTerm> terms;
};

/// sum_j w_j Psi(a_j . x + b_j) at every cell centre, summed in term order.
SampledFunction eval_sigma(const SigmaNetwork& net, const Grid& grid);

/// sum_j w_j phi((x - z_j) / sigma_j) at every cell centre. Each term only
/// touches cells within phi's support of z_j; per cell, contributions are
/// added in term order regardless of threading.
SampledFunction eval_radial(const RadialNetwork& net, const Grid& grid);

/// Parameter dump: index, w, a/z components, b/sigma.
ExperimentReport dump_network(const SigmaNetwork& net);
ExperimentReport dump_network(const RadialNetwork& net);

struct RiemannResult {
  SigmaNetwork net;
  double sup_error = 0.0;
};

/// g(x) = (1/N) sum_{k=1..N} rho(k/N) Psi(x - k/N), with
/// sup_{x in K} |(rho * Psi)(x) - g(x)| over `probe_points` evenly spaced
/// points; rho * Psi comes from 2^16-cell midpoint quadrature over [0, 1].
/// rho is read by interpolation and must vanish at cells outside [0, 1].
RiemannResult riemann_smooth(const SquashingFn& psi, const SampledFunction& rho, int n, double k_lo, double k_hi,
                             std::size_t probe_points = 2001);

/// Probe points and the reference rho * Psi at each; independent of N, so a
/// sweep over N can share one.
struct RiemannProbes {
  std::vector<double> x;
  std::vector<double> reference;
};
RiemannProbes riemann_reference(const SquashingFn& psi, const SampledFunction& rho, double k_lo, double k_hi,
                                std::size_t probe_points = 2001);
RiemannResult riemann_smooth(const SquashingFn& psi, const SampledFunction& rho, int n, const RiemannProbes& probes);

struct SigmaFit {
  SigmaNetwork net;
  /// max |f - net| over the grid centres (verified, <= eps).
  double sup_error = 0.0;
  double slope = 0.0;
};

/// Telescoping step construction in 1D: split the cells into runs with
/// oscillation < eps/3, place a knot at each run boundary (cell edges, so
/// every centre is >= h/2 from every knot), and return
/// sum_k df_k Psi(s (x - t_k)) with s large enough that the smeared steps
/// cost < eps/3 in total. Verified on the grid before returning.
SigmaFit construct_sigma_1d(const SampledFunction& f, const SquashingFn& psi, double eps);

/// Riemann sum of phi_sigma * f over every stride-th cell: centres z_j at
/// cells (stride/2 + m stride) per axis, weights f(z_j) (stride h)^n sigma^-n.
/// With stride 1 this is exactly the sum convolve() computes.
RadialNetwork construct_s1(const SampledFunction& f, const Mollifier& phi, double sigma, std::size_t stride);

/// For each eps: halve sigma from box/4 until ||f - phi_sigma * f|| <= eps/2,
/// approximate g = phi_sigma * f by construct_sigma_1d(g, psi, eps/2), and
/// report ||f - h||_{L^p(mu)}. Rows (eps, sigma, smooth_error, net_sup_error,
/// error, terms). Optionally returns the network built for the last eps.
ExperimentReport density_experiment_sigma(const SampledFunction& f, const SquashingFn& psi,
                                          const VariableExponent& p, const Measure& mu,
                                          const std::vector<double>& eps_list, const Mollifier& phi,
                                          std::optional<SigmaNetwork>* last_net = nullptr);

/// Error carrying the best error reached before a refinement floor.
class RefinementError : public Error {
 public:
  RefinementError(const std::string& what, double achieved) : Error(what), achieved_error(achieved) {}
  double achieved_error;
};

/// For each eps: halve sigma until ||phi_sigma * f - f|| <= eps/2, then halve
/// the construct_s1 stride (from the largest power of two <= sigma/h) until
/// ||eval - phi_sigma * f|| <= eps/2. Rows (eps, sigma, stride, smooth_error,
/// quadrature_error, error, terms), error measured directly as ||eval - f||.
ExperimentReport density_experiment_s1(const SampledFunction& f, const Mollifier& phi, const VariableExponent& p,
                                       const std::vector<double>& eps_list, std::optional<RadialNetwork>* last_net = nullptr);

}  // namespace vexlp
