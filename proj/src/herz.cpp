#include "vexlp/herz.hpp"

#include <algorithm>
#include <cmath>

#include "vexlp/error.hpp"
#include "vexlp/networks.hpp"
#include "vexlp/parallel.hpp"

namespace vexlp {

void validate(const HerzParams& params, const Grid& grid) {
  if (!std::isfinite(params.p) || params.p < 1.0) throw Error("herz p must lie in [1, inf)");
  if (!std::isfinite(params.q) || params.q < 1.0) throw Error("herz q must lie in [1, inf)");
  if (!std::isfinite(params.alpha)) throw Error("herz alpha must be finite");
  if (params.k_max < 1 || params.k_max > 60) throw Error("herz k_max must lie in [1, 60]");
  const double outer = std::ldexp(1.0, params.k_max);
  double far = 0.0;
  for (int a = 0; a < grid.dim(); ++a) {
    const double m = std::max(std::abs(grid.lo(a)), std::abs(grid.hi(a)));
    far += m * m;
  }
  if (!(std::sqrt(far) < outer)) throw Error("grid box is not covered by B(2^k_max)");
}

std::vector<int> annulus_index(const Grid& grid, int k_max) {
  std::vector<int> idx(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.center(i);
    const double r = std::hypot(x[0], x[1]);
    int k = 0;
    while (k < k_max && !(r < std::ldexp(1.0, k))) ++k;
    idx[i] = k;
  }
  return idx;
}

std::vector<double> annulus_norms(const SampledFunction& f, const HerzParams& params) {
  const Grid& g = f.grid();
  validate(params, g);
  const std::vector<int> ring = annulus_index(g, params.k_max);
  const std::size_t rings = static_cast<std::size_t>(params.k_max) + 1;
  // Per-ring max first so |f|/max <= 1 and the p-th powers cannot overflow.
  std::vector<double> peak(rings, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) peak[ring[i]] = std::max(peak[ring[i]], std::abs(f[i]));
  std::vector<CompensatedSum> sums(rings);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto k = static_cast<std::size_t>(ring[i]);
    if (peak[k] > 0.0 && f[i] != 0.0) sums[k].add(std::pow(std::abs(f[i]) / peak[k], params.p));
  }
  const double cell = g.box_volume() / static_cast<double>(g.size());
  std::vector<double> out(rings, 0.0);
  for (std::size_t k = 0; k < rings; ++k)
    if (peak[k] > 0.0) out[k] = peak[k] * std::pow(sums[k].value() * cell, 1.0 / params.p);
  return out;
}

double herz_norm(const SampledFunction& f, const HerzParams& params) {
  const std::vector<double> parts = annulus_norms(f, params);
  double peak = 0.0;
  std::vector<double> terms(parts.size(), 0.0);
  for (std::size_t k = 1; k < parts.size(); ++k) {
    terms[k] = std::pow(2.0, static_cast<double>(k) * params.alpha) * parts[k];
    peak = std::max(peak, terms[k]);
  }
  double tail = 0.0;
  if (peak > 0.0) {
    CompensatedSum s;
    for (std::size_t k = 1; k < terms.size(); ++k)
      if (terms[k] > 0.0) s.add(std::pow(terms[k] / peak, params.q));
    tail = peak * std::pow(s.value(), 1.0 / params.q);
  }
  return parts[0] + tail;
}

ExperimentReport herz_identity_convergence(const Mollifier& phi, const SampledFunction& f, const HerzParams& params,
                                           const std::vector<double>& sigmas) {
  if (phi.kind() != KernelKind::gaussian) throw Error("herz convergence needs a gaussian kernel");
  if (!(params.p > 1.0) || !(params.q > 1.0)) throw Error("herz convergence needs p, q in (1, inf)");
  validate(params, f.grid());
  if (sigmas.empty()) throw Error("sigma list is empty");
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas[i] > 0.0)) throw Error("sigmas must be positive");
    if (i > 0 && !(sigmas[i] < sigmas[i - 1])) throw Error("sigmas must be strictly decreasing");
  }
  const auto errors = parallel_map<double>(sigmas.size(), [&](std::size_t i) {
    return herz_norm(sub(convolve(dilate(phi, sigmas[i]), f), f), params);
  });
  ExperimentReport report("herz_convergence", {{"sigma", ""}, {"herz_error", ""}});
  for (std::size_t i = 0; i < sigmas.size(); ++i) report.add_row({sigmas[i], errors[i]});

  const RadialNetwork net = construct_s1(f, phi, sigmas.back(), 1);
  const double s1_error = herz_norm(sub(eval_radial(net, f.grid()), f), params);
  report.set_meta("p", params.p);
  report.set_meta("q", params.q);
  report.set_meta("alpha", params.alpha);
  report.set_meta("k_max", static_cast<double>(params.k_max));
  report.set_meta("s1_sigma", sigmas.back());
  report.set_meta("s1_terms", static_cast<double>(net.terms.size()));
  report.set_meta("s1_herz_error", s1_error);
  return report;
}

}  // namespace vexlp
