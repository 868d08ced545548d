#include "vexlp/networks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vexlp/error.hpp"
#include "vexlp/norm.hpp"
#include "vexlp/parallel.hpp"

namespace vexlp {

SquashingFn SquashingFn::logistic() { return SquashingFn(SquashingKind::logistic); }
SquashingFn SquashingFn::ramp() { return SquashingFn(SquashingKind::ramp); }
SquashingFn SquashingFn::heaviside() { return SquashingFn(SquashingKind::heaviside); }

SquashingFn SquashingFn::table(std::vector<double> x, std::vector<double> y) {
  if (x.size() < 2 || x.size() != y.size()) throw Error("squashing table needs >= 2 matching samples");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw Error("squashing table must be finite");
    if (i > 0 && !(x[i] > x[i - 1])) throw Error("squashing table abscissae must increase");
    if (i > 0 && y[i] < y[i - 1]) throw Error("squashing table must be non-decreasing");
  }
  if (std::abs(y.front()) > 1e-6 || std::abs(y.back() - 1.0) > 1e-6)
    throw Error("squashing table end values must be within 1e-6 of 0 and 1");
  SquashingFn s(SquashingKind::table);
  s.x_ = std::move(x);
  s.y_ = std::move(y);
  return s;
}

SquashingFn SquashingFn::named(const std::string& name) {
  if (name == "logistic") return logistic();
  if (name == "ramp") return ramp();
  if (name == "heaviside") return heaviside();
  throw Error("unknown squashing function '" + name + "'");
}

std::string SquashingFn::name() const {
  switch (kind_) {
    case SquashingKind::logistic: return "logistic";
    case SquashingKind::ramp: return "ramp";
    case SquashingKind::heaviside: return "heaviside";
    case SquashingKind::table: return "table";
  }
  return "unknown";
}

double SquashingFn::operator()(double x) const {
  switch (kind_) {
    case SquashingKind::logistic:
      // Split by sign so exp never overflows.
      if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
      else {
        const double e = std::exp(x);
        return e / (1.0 + e);
      }
    case SquashingKind::ramp: return std::clamp(x + 0.5, 0.0, 1.0);
    case SquashingKind::heaviside: return x >= 0.0 ? 1.0 : 0.0;
    case SquashingKind::table: {
      if (x <= x_.front()) return y_.front();
      if (x >= x_.back()) return y_.back();
      const auto it = std::upper_bound(x_.begin(), x_.end(), x);
      const std::size_t k = static_cast<std::size_t>(it - x_.begin());
      const double t = (x - x_[k - 1]) / (x_[k] - x_[k - 1]);
      return y_[k - 1] + t * (y_[k] - y_[k - 1]);
    }
  }
  return 0.0;
}

namespace {

void check_sigma_network(const SigmaNetwork& net) {
  if (net.terms.empty()) throw Error("network needs at least one term");
  for (const auto& t : net.terms)
    if (!std::isfinite(t.w) || !std::isfinite(t.a[0]) || !std::isfinite(t.a[1]) || !std::isfinite(t.b))
      throw Error("network parameters must be finite");
}

}  // namespace

SampledFunction eval_sigma(const SigmaNetwork& net, const Grid& grid) {
  if (net.dim != grid.dim()) throw Error("network and grid dimensions differ");
  check_sigma_network(net);
  std::vector<double> out(grid.size());
  parallel_for(grid.count(1), [&](std::size_t i1) {
    for (std::size_t i0 = 0; i0 < grid.count(0); ++i0) {
      const std::size_t idx = grid.index(i0, i1);
      const Point x = grid.center(idx);
      double s = 0.0;
      for (const auto& t : net.terms) s += t.w * net.psi(t.a[0] * x[0] + t.a[1] * x[1] + t.b);
      out[idx] = s;
    }
  });
  return SampledFunction(grid, std::move(out));
}

namespace {

// Per-axis factor of a product-form kernel, so that phi(u, v) = F(u) F(v).
bool separable(const Mollifier& phi) { return phi.dim() == 2 && phi.kind() != KernelKind::table; }

double axis_factor(const Mollifier& phi, double u) {
  const double s = phi.sigma();
  const double t = u / s;
  switch (phi.kind()) {
    case KernelKind::gaussian: return std::exp(-0.5 * t * t) / (std::sqrt(2.0 * std::numbers::pi) * s);
    case KernelKind::tent: return std::max(0.0, 1.0 - std::abs(t)) / s;
    case KernelKind::box: return std::abs(t) <= 0.5 ? 1.0 / s : 0.0;
    case KernelKind::table: break;
  }
  return 0.0;
}

// Cells along one axis whose centres lie within [c - r, c + r].
std::pair<std::ptrdiff_t, std::ptrdiff_t> axis_range(const Grid& g, int axis, double c, double r) {
  const double h = g.spacing(axis);
  const double n = static_cast<double>(g.count(axis));
  const double lo = std::ceil((c - r - g.lo(axis)) / h - 0.5);
  const double hi = std::floor((c + r - g.lo(axis)) / h - 0.5);
  if (hi < 0.0 || lo > n - 1.0 || lo > hi) return {0, -1};
  return {static_cast<std::ptrdiff_t>(std::max(lo, 0.0)), static_cast<std::ptrdiff_t>(std::min(hi, n - 1.0))};
}

}  // namespace

SampledFunction eval_radial(const RadialNetwork& net, const Grid& grid) {
  if (net.phi.dim() != grid.dim()) throw Error("network and grid dimensions differ");
  if (net.terms.empty()) throw Error("network needs at least one term");
  for (const auto& t : net.terms)
    if (!(t.sigma > 0.0) || !std::isfinite(t.sigma) || !std::isfinite(t.w) || !std::isfinite(t.z[0]) ||
        !std::isfinite(t.z[1]))
      throw Error("radial network terms need finite parameters and sigma > 0");

  const Mollifier& phi = net.phi;
  const double support = phi.support_radius();
  const bool product = separable(phi);
  const int dim = grid.dim();
  // Output is split into bands along the last axis; each band walks all terms
  // in order, so per-cell summation order does not depend on the split.
  const int band_axis = dim - 1;
  const std::size_t extent = grid.count(band_axis);
  const std::size_t bands = std::min<std::size_t>(extent, std::max<std::size_t>(1, 4 * worker_count()));
  std::vector<double> out(grid.size(), 0.0);

  parallel_for(bands, [&](std::size_t band) {
    const auto b_lo = static_cast<std::ptrdiff_t>(extent * band / bands);
    const auto b_hi = static_cast<std::ptrdiff_t>(extent * (band + 1) / bands) - 1;
    std::vector<double> fx, fy;
    for (const auto& t : net.terms) {
      const double r = support * t.sigma;
      auto [a0, a1] = axis_range(grid, 0, t.z[0], r);
      if (a0 > a1) continue;
      if (dim == 1) {
        a0 = std::max(a0, b_lo);
        a1 = std::min(a1, b_hi);
        for (std::ptrdiff_t i0 = a0; i0 <= a1; ++i0) {
          const double u = (grid.center(0, static_cast<std::size_t>(i0)) - t.z[0]) / t.sigma;
          out[static_cast<std::size_t>(i0)] += t.w * phi({u, 0.0});
        }
        continue;
      }
      auto [c0, c1] = axis_range(grid, 1, t.z[1], r);
      c0 = std::max(c0, b_lo);
      c1 = std::min(c1, b_hi);
      if (c0 > c1) continue;
      if (product) {
        fx.resize(static_cast<std::size_t>(a1 - a0 + 1));
        for (std::ptrdiff_t i0 = a0; i0 <= a1; ++i0)
          fx[static_cast<std::size_t>(i0 - a0)] =
              axis_factor(phi, (grid.center(0, static_cast<std::size_t>(i0)) - t.z[0]) / t.sigma);
      }
      for (std::ptrdiff_t i1 = c0; i1 <= c1; ++i1) {
        const double v = (grid.center(1, static_cast<std::size_t>(i1)) - t.z[1]) / t.sigma;
        double* row = out.data() + grid.index(0, static_cast<std::size_t>(i1));
        if (product) {
          const double wy = t.w * axis_factor(phi, v);
          if (wy == 0.0) continue;
          for (std::ptrdiff_t i0 = a0; i0 <= a1; ++i0) row[i0] += wy * fx[static_cast<std::size_t>(i0 - a0)];
        } else {
          for (std::ptrdiff_t i0 = a0; i0 <= a1; ++i0) {
            const double u = (grid.center(0, static_cast<std::size_t>(i0)) - t.z[0]) / t.sigma;
            row[i0] += t.w * phi({u, v});
          }
        }
      }
    }
  });
  return SampledFunction(grid, std::move(out));
}

ExperimentReport dump_network(const SigmaNetwork& net) {
  std::vector<Column> cols{{"index", ""}, {"w", ""}, {"a0", ""}};
  if (net.dim == 2) cols.push_back({"a1", ""});
  cols.push_back({"b", ""});
  ExperimentReport r("sigma_network", cols);
  for (std::size_t k = 0; k < net.terms.size(); ++k) {
    const auto& t = net.terms[k];
    std::vector<double> row{static_cast<double>(k), t.w, t.a[0]};
    if (net.dim == 2) row.push_back(t.a[1]);
    row.push_back(t.b);
    r.add_row(std::move(row));
  }
  r.set_meta("psi", net.psi.name());
  return r;
}

ExperimentReport dump_network(const RadialNetwork& net) {
  const int dim = net.phi.dim();
  std::vector<Column> cols{{"index", ""}, {"w", ""}, {"z0", ""}};
  if (dim == 2) cols.push_back({"z1", ""});
  cols.push_back({"sigma", ""});
  ExperimentReport r("radial_network", cols);
  for (std::size_t k = 0; k < net.terms.size(); ++k) {
    const auto& t = net.terms[k];
    std::vector<double> row{static_cast<double>(k), t.w, t.z[0]};
    if (dim == 2) row.push_back(t.z[1]);
    row.push_back(t.sigma);
    r.add_row(std::move(row));
  }
  r.set_meta("kernel", net.phi.name());
  return r;
}

namespace {

void check_riemann_rho(const SampledFunction& rho) {
  if (rho.grid().dim() != 1) throw Error("riemann_smooth needs a 1D kernel");
  const Grid& rg = rho.grid();
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] < 0.0) throw Error("riemann_smooth needs rho >= 0");
    const double x = rg.center(i)[0];
    if ((x < 0.0 || x > 1.0) && rho[i] != 0.0) throw Error("rho must be supported in [0, 1]");
  }
}

}  // namespace

RiemannProbes riemann_reference(const SquashingFn& psi, const SampledFunction& rho, double k_lo, double k_hi,
                                std::size_t probe_points) {
  check_riemann_rho(rho);
  if (!(k_hi > k_lo) || probe_points < 2) throw Error("riemann_smooth needs k_lo < k_hi and >= 2 probe points");
  constexpr std::size_t kQuadrature = std::size_t{1} << 16;
  const double dt = 1.0 / static_cast<double>(kQuadrature);
  std::vector<double> nodes(kQuadrature), weights(kQuadrature);
  for (std::size_t m = 0; m < kQuadrature; ++m) {
    nodes[m] = (static_cast<double>(m) + 0.5) * dt;
    weights[m] = rho.interpolate({nodes[m], 0.0}) * dt;
  }
  RiemannProbes probes;
  probes.x.resize(probe_points);
  for (std::size_t k = 0; k < probe_points; ++k)
    probes.x[k] = k_lo + (k_hi - k_lo) * static_cast<double>(k) / static_cast<double>(probe_points - 1);
  probes.reference = parallel_map<double>(probe_points, [&](std::size_t k) {
    CompensatedSum ref;
    for (std::size_t m = 0; m < kQuadrature; ++m)
      if (weights[m] != 0.0) ref.add(weights[m] * psi(probes.x[k] - nodes[m]));
    return ref.value();
  });
  return probes;
}

RiemannResult riemann_smooth(const SquashingFn& psi, const SampledFunction& rho, int n, const RiemannProbes& probes) {
  if (n < 1) throw Error("riemann_smooth needs N >= 1");
  if (probes.x.empty() || probes.x.size() != probes.reference.size()) throw Error("riemann_smooth: malformed probes");

  RiemannResult result{SigmaNetwork{psi, 1, {}}, 0.0};
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int k = 1; k <= n; ++k) {
    const double t = static_cast<double>(k) * inv_n;
    result.net.terms.push_back({rho.interpolate({t, 0.0}) * inv_n, {1.0, 0.0}, -t});
  }
  const auto errors = parallel_map<double>(probes.x.size(), [&](std::size_t k) {
    CompensatedSum g;
    for (const auto& t : result.net.terms) g.add(t.w * psi(t.a[0] * probes.x[k] + t.b));
    return std::abs(probes.reference[k] - g.value());
  });
  result.sup_error = *std::max_element(errors.begin(), errors.end());
  return result;
}

RiemannResult riemann_smooth(const SquashingFn& psi, const SampledFunction& rho, int n, double k_lo, double k_hi,
                             std::size_t probe_points) {
  if (n < 1) throw Error("riemann_smooth needs N >= 1");
  return riemann_smooth(psi, rho, n, riemann_reference(psi, rho, k_lo, k_hi, probe_points));
}

SigmaFit construct_sigma_1d(const SampledFunction& f, const SquashingFn& psi, double eps) {
  if (!(eps > 0.0)) throw Error("construct_sigma_1d needs eps > 0");
  const Grid& g = f.grid();
  if (g.dim() != 1) throw Error("construct_sigma_1d needs a 1D function");
  constexpr std::size_t kTermBudget = 1'000'000;
  const double h = g.spacing(0);
  const std::size_t n = f.size();

  // Runs of oscillation < eps/3, each represented by its midrange.
  std::vector<double> knots, jumps;
  double previous = 0.0;
  double jump_total = 0.0;
  for (std::size_t start = 0; start < n;) {
    double lo = f[start], hi = f[start];
    std::size_t end = start + 1;
    while (end < n) {
      const double nlo = std::min(lo, f[end]), nhi = std::max(hi, f[end]);
      if (!(nhi - nlo < eps / 3.0)) break;
      lo = nlo;
      hi = nhi;
      ++end;
    }
    const double level = 0.5 * (lo + hi);
    const double jump = level - previous;
    if (jump != 0.0) {
      knots.push_back(g.lo(0) + static_cast<double>(start) * h);
      jumps.push_back(jump);
      jump_total += std::abs(jump);
      if (knots.size() > kTermBudget) throw Error("budget exceeded");
    }
    previous = level;
    start = end;
  }

  SigmaFit fit{SigmaNetwork{psi, 1, {}}, 0.0, 0.0};
  if (knots.empty()) {
    fit.net.terms.push_back({0.0, {0.0, 0.0}, 0.0});
    fit.sup_error = f.max_abs();
    if (fit.sup_error > eps) throw Error("construct_sigma_1d: verification failed");
    return fit;
  }

  // Every centre is at least h/2 from every knot, so each smeared step is off
  // by at most 1 - (Psi(s h/2) - Psi(-s h/2)).
  const double allowed = eps / (3.0 * jump_total);
  double s = 1.0 / h;
  int doublings = 0;
  while (!(psi(s * h / 2.0) - psi(-s * h / 2.0) > 1.0 - allowed)) {
    s *= 2.0;
    if (++doublings > 200 || !std::isfinite(s)) throw Error("construct_sigma_1d: no slope meets the step budget");
  }
  fit.slope = s;
  for (std::size_t k = 0; k < knots.size(); ++k) fit.net.terms.push_back({jumps[k], {s, 0.0}, -s * knots[k]});

  const SampledFunction approx = eval_sigma(fit.net, g);
  for (std::size_t i = 0; i < n; ++i) fit.sup_error = std::max(fit.sup_error, std::abs(f[i] - approx[i]));
  if (fit.sup_error > eps) {
    std::ostringstream msg;
    msg << "construct_sigma_1d: verification failed (error " << fit.sup_error << " > eps " << eps << ")";
    throw Error(msg.str());
  }
  return fit;
}

RadialNetwork construct_s1(const SampledFunction& f, const Mollifier& phi, double sigma, std::size_t stride) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error("construct_s1 needs sigma > 0");
  if (stride < 1) throw Error("construct_s1 needs stride >= 1");
  const Grid& g = f.grid();
  if (phi.dim() != g.dim()) throw Error("kernel and grid dimensions differ");
  const int dim = g.dim();
  double cell = 1.0;
  for (int a = 0; a < dim; ++a) cell *= static_cast<double>(stride) * g.spacing(a) / sigma;

  RadialNetwork net{phi, {}};
  const std::size_t offset = stride / 2;
  const std::size_t n1 = dim == 2 ? g.count(1) : 1;
  for (std::size_t i1 = dim == 2 ? offset : 0; i1 < n1; i1 += dim == 2 ? stride : 1)
    for (std::size_t i0 = offset; i0 < g.count(0); i0 += stride) {
      const std::size_t idx = g.index(i0, i1);
      net.terms.push_back({f[idx] * cell, g.center(idx), sigma});
    }
  return net;
}

namespace {

struct SmoothStep {
  double sigma;
  SampledFunction smooth;
  double error;
};

// Halve sigma from a quarter of the shortest box side until
// ||f - phi_sigma * f|| <= target.
SmoothStep smooth_until(const SampledFunction& f, const Mollifier& phi, const VariableExponent& p,
                        const Measure& mu, double target) {
  const Grid& g = f.grid();
  double side = g.hi(0) - g.lo(0);
  if (g.dim() == 2) side = std::min(side, g.hi(1) - g.lo(1));
  const double floor = g.min_spacing();
  for (double sigma = side / 4.0;; sigma /= 2.0) {
    if (sigma < floor) throw Error("sigma search reached the grid spacing without meeting the target");
    SampledFunction smooth = convolve(dilate(phi, sigma), f);
    const double err = luxemburg_norm(sub(f, smooth), p, mu).norm;
    if (err <= target) return {sigma, std::move(smooth), err};
  }
}

}  // namespace

ExperimentReport density_experiment_sigma(const SampledFunction& f, const SquashingFn& psi,
                                          const VariableExponent& p, const Measure& mu,
                                          const std::vector<double>& eps_list, const Mollifier& phi,
                                          std::optional<SigmaNetwork>* last_net) {
  if (f.grid().dim() != 1) throw Error("density_experiment_sigma is 1D only");
  require_same_grid(f.grid(), p.grid());
  if (extremes(p, mu).p_plus == kInfiniteExponent) throw Error("density_experiment_sigma needs p+ < inf on K");
  if (eps_list.empty()) throw Error("eps list is empty");
  for (double e : eps_list)
    if (!(e > 0.0)) throw Error("eps values must be positive");

  struct Cell {
    double sigma = 0, smooth_error = 0, net_error = 0, error = 0;
    std::size_t terms = 0;
    std::optional<SigmaNetwork> net;
  };
  const auto cells = parallel_map<Cell>(eps_list.size(), [&](std::size_t k) {
    const double eps = eps_list[k];
    const SmoothStep step = smooth_until(f, phi, p, mu, eps / 2.0);
    SigmaFit fit = construct_sigma_1d(step.smooth, psi, eps / 2.0);
    const SampledFunction h = eval_sigma(fit.net, f.grid());
    Cell c;
    c.sigma = step.sigma;
    c.smooth_error = step.error;
    c.net_error = fit.sup_error;
    c.error = luxemburg_norm(sub(f, h), p, mu).norm;
    c.terms = fit.net.terms.size();
    c.net = std::move(fit.net);
    return c;
  });

  ExperimentReport report("density_sigma", {{"eps", ""},
                                            {"sigma", ""},
                                            {"smooth_error", ""},
                                            {"net_sup_error", ""},
                                            {"error", ""},
                                            {"terms", ""}});
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    const Cell& c = cells[k];
    report.add_row({eps_list[k], c.sigma, c.smooth_error, c.net_error, c.error, static_cast<double>(c.terms)});
  }
  report.set_meta("psi", psi.name());
  report.set_meta("kernel", phi.name());
  if (last_net) *last_net = cells.back().net;
  return report;
}

ExperimentReport density_experiment_s1(const SampledFunction& f, const Mollifier& phi, const VariableExponent& p,
                                       const std::vector<double>& eps_list, std::optional<RadialNetwork>* last_net) {
  require_same_grid(f.grid(), p.grid());
  const Extremes e = extremes(p);
  if (!(e.p_minus > 1.0) || e.p_plus == kInfiniteExponent)
    throw Error("density_experiment_s1 needs 1 < p- <= p+ < inf");
  if (eps_list.empty()) throw Error("eps list is empty");
  for (double v : eps_list)
    if (!(v > 0.0)) throw Error("eps values must be positive");
  const Measure mu = Measure::lebesgue();
  const Grid& g = f.grid();

  struct Cell {
    double sigma = 0, smooth_error = 0, quad_error = 0, error = 0;
    std::size_t stride = 0, terms = 0;
    std::optional<RadialNetwork> net;
  };
  const auto cells = parallel_map<Cell>(eps_list.size(), [&](std::size_t k) {
    const double eps = eps_list[k];
    const SmoothStep step = smooth_until(f, phi, p, mu, eps / 2.0);
    std::size_t stride = 1;
    while (static_cast<double>(stride * 2) <= step.sigma / g.min_spacing()) stride *= 2;
    double best = std::numeric_limits<double>::infinity();
    for (;;) {
      RadialNetwork net = construct_s1(f, phi, step.sigma, stride);
      const SampledFunction approx = eval_radial(net, g);
      const double quad = luxemburg_norm(sub(approx, step.smooth), p, mu).norm;
      best = std::min(best, quad);
      if (quad <= eps / 2.0) {
        Cell c;
        c.sigma = step.sigma;
        c.smooth_error = step.error;
        c.quad_error = quad;
        c.error = luxemburg_norm(sub(approx, f), p, mu).norm;
        c.stride = stride;
        c.terms = net.terms.size();
        c.net = std::move(net);
        return c;
      }
      if (stride == 1) throw RefinementError("stride refinement reached 1 without meeting eps/2", best);
      stride /= 2;
    }
  });

  ExperimentReport report("density_s1", {{"eps", ""},
                                         {"sigma", ""},
                                         {"stride", ""},
                                         {"smooth_error", ""},
                                         {"quadrature_error", ""},
                                         {"error", ""},
                                         {"terms", ""}});
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    const Cell& c = cells[k];
    report.add_row({eps_list[k], c.sigma, static_cast<double>(c.stride), c.smooth_error, c.quad_error, c.error,
                    static_cast<double>(c.terms)});
  }
  report.set_meta("kernel", phi.name());
  if (last_net) *last_net = cells.back().net;
  return report;
}

}  // namespace vexlp
