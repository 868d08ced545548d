#include "vexlp/modular_gap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "vexlp/error.hpp"
#include "vexlp/parallel.hpp"

namespace vexlp {

namespace {

struct Block {
  Point centre{0.0, 0.0};
  double half_width = 0.0;  // radius of the largest ball inside the region's cells
};

// Longest run of masked cells (1D) or largest all-masked square (2D); first
// one wins ties.
std::optional<Block> largest_block(const Grid& g, const Mask& m) {
  if (g.dim() == 1) {
    std::size_t best_start = 0, best_len = 0;
    for (std::size_t i = 0; i < g.size();) {
      if (!m[i]) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < g.size() && m[j]) ++j;
      if (j - i > best_len) {
        best_len = j - i;
        best_start = i;
      }
      i = j;
    }
    if (best_len == 0) return std::nullopt;
    const double h = g.spacing(0);
    const double a = g.lo(0) + static_cast<double>(best_start) * h;
    const double b = g.lo(0) + static_cast<double>(best_start + best_len) * h;
    return Block{{0.5 * (a + b), 0.0}, 0.5 * (b - a)};
  }
  const std::size_t n0 = g.count(0), n1 = g.count(1);
  std::vector<std::size_t> side(g.size(), 0);
  std::size_t best = 0, best_i0 = 0, best_i1 = 0;
  for (std::size_t i1 = 0; i1 < n1; ++i1)
    for (std::size_t i0 = 0; i0 < n0; ++i0) {
      const std::size_t k = g.index(i0, i1);
      if (!m[k]) continue;
      std::size_t s = 1;
      if (i0 > 0 && i1 > 0)
        s = 1 + std::min({side[g.index(i0 - 1, i1)], side[g.index(i0, i1 - 1)], side[g.index(i0 - 1, i1 - 1)]});
      side[k] = s;
      if (s > best) {
        best = s;
        best_i0 = i0;
        best_i1 = i1;
      }
    }
  if (best == 0) return std::nullopt;
  // (best_i0, best_i1) is the square's upper corner cell.
  Point c{};
  for (int a = 0; a < 2; ++a) {
    const double h = g.spacing(a);
    const std::size_t top = a == 0 ? best_i0 : best_i1;
    const double hi = g.lo(a) + static_cast<double>(top + 1) * h;
    c[a] = hi - 0.5 * static_cast<double>(best) * h;
  }
  return Block{c, 0.5 * static_cast<double>(best) * g.min_spacing()};
}

// Smallest j >= 1 with min phi on B(2^-j) >= phi(0)/2, from a sample scan.
std::pair<int, double> positivity_radius(const Mollifier& phi) {
  const double peak = phi({0.0, 0.0});
  if (!(peak > 0.0) || !std::isfinite(peak)) throw Error("no positivity radius found: phi(0) must be > 0");
  for (int j = 1; j <= 40; ++j) {
    const double rad = std::ldexp(1.0, -j);
    double lo = std::numeric_limits<double>::infinity();
    if (phi.dim() == 1) {
      constexpr int kSamples = 201;
      for (int k = 0; k < kSamples; ++k) lo = std::min(lo, phi({rad * (2.0 * k / (kSamples - 1) - 1.0), 0.0}));
    } else {
      constexpr int kSamples = 41;
      for (int a = 0; a < kSamples; ++a)
        for (int b = 0; b < kSamples; ++b) {
          const Point z{rad * (2.0 * a / (kSamples - 1) - 1.0), rad * (2.0 * b / (kSamples - 1) - 1.0)};
          if (std::hypot(z[0], z[1]) <= rad) lo = std::min(lo, phi(z));
        }
    }
    if (lo >= 0.5 * peak) return {j, 0.999 * lo};
  }
  throw Error("no positivity radius found");
}

Box box_around(const Point& c, double half, int dim) {
  Box b;
  for (int a = 0; a < dim; ++a) {
    b.lo[a] = c[a] - half;
    b.hi[a] = c[a] + half;
  }
  return b;
}

double distance(const Point& a, const Point& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

// log of sum_i exp(t_i), skipping -inf terms; -inf for an empty sum.
double log_sum_exp(const std::vector<double>& t) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : t) peak = std::max(peak, v);
  if (peak == -std::numeric_limits<double>::infinity()) return peak;
  CompensatedSum s;
  for (double v : t) s.add(std::exp(v - peak));
  return peak + std::log(s.value());
}

}  // namespace

Mask box_mask(const Grid& grid, const Box& box) {
  Mask m(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.center(i);
    bool in = true;
    for (int a = 0; a < grid.dim(); ++a) in = in && x[a] >= box.lo[a] && x[a] <= box.hi[a];
    m[i] = in ? 1 : 0;
  }
  return m;
}

WitnessConfig auto_witness(const VariableExponent& p, const Mollifier& phi) {
  const Grid& g = p.grid();
  if (phi.dim() != g.dim()) throw Error("kernel and grid dimensions differ");
  const Extremes e = extremes(p);
  if (e.p_plus == e.p_minus) throw Error("exponent is constant: theorem hypothesis violated");
  if (e.p_plus == kInfiniteExponent) throw Error("witness needs a finite exponent");
  const double eps = (e.p_plus - e.p_minus) / 3.0;

  Mask high(g.size()), low(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    high[i] = p[i] > e.p_plus - eps ? 1 : 0;
    low[i] = p[i] < e.p_minus + eps ? 1 : 0;
  }
  const auto E = largest_block(g, high);
  const auto F = largest_block(g, low);
  if (!E) throw Error("region E = {p > p+ - eps} has zero grid measure");
  if (!F) throw Error("region F = {p < p- + eps} has zero grid measure");

  const auto [j, c0] = positivity_radius(phi);
  WitnessConfig cfg{p, phi, eps, E->centre, F->centre, 0.0, {}, {}, j, c0, 0.0};
  cfg.r = std::min({0.9 * std::ldexp(1.0, -j), E->half_width, F->half_width});
  // Boxes inscribed in B(y0, r) and B(x0, r).
  const double half = g.dim() == 1 ? cfg.r : cfg.r / std::numbers::sqrt2;
  cfg.u_box = box_around(cfg.y0, half, g.dim());
  cfg.v_box = box_around(cfg.x0, half, g.dim());
  cfg.sigma = 1.1 * std::ldexp(1.0, j) * (distance(cfg.x0, cfg.y0) + 2.0 * cfg.r);
  check_witness(cfg);
  return cfg;
}

void check_witness(const WitnessConfig& cfg) {
  const Grid& g = cfg.p.grid();
  const Extremes e = extremes(cfg.p);
  const Mask u = box_mask(g, cfg.u_box), v = box_mask(g, cfg.v_box);
  std::size_t nu = 0, nv = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (u[i]) {
      ++nu;
      if (!(cfg.p[i] >= e.p_plus - cfg.eps)) throw Error("witness: p < p+ - eps inside U");
    }
    if (v[i]) {
      ++nv;
      if (!(cfg.p[i] <= e.p_minus + cfg.eps)) throw Error("witness: p > p- + eps inside V");
    }
  }
  if (nu == 0 || nv == 0) throw Error("witness: U or V contains no grid cell");
  if (!(cfg.sigma > std::ldexp(1.0, cfg.j) * (distance(cfg.x0, cfg.y0) + 2.0 * cfg.r)))
    throw Error("witness: sigma <= 2^j (|x0 - y0| + 2r)");
  if (!(cfg.c0 > 0.0)) throw Error("witness: c0 must be positive");
}

WitnessConfig with_exponent(const WitnessConfig& cfg, const VariableExponent& p) {
  require_same_grid(cfg.p.grid(), p.grid());
  WitnessConfig out = cfg;
  out.p = p;
  return out;
}

ExperimentReport ratio_curve(const WitnessConfig& cfg, const std::vector<double>& r_list) {
  const Grid& g = cfg.p.grid();
  for (double R : r_list)
    if (!(R > 0.0) || !std::isfinite(R)) throw Error("R values must be positive and finite");
  const Mask v = box_mask(g, cfg.v_box);
  std::vector<double> chi(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) chi[i] = v[i] ? 1.0 : 0.0;
  const SampledFunction smooth = convolve(dilate(cfg.phi, cfg.sigma), SampledFunction(g, std::move(chi)));
  const double log_cell = std::log(g.cell_volume());
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  struct Row {
    double lhs = 0, rhs = 0, ratio = 0;
    bool finite = true;
  };
  const auto rows = parallel_map<Row>(r_list.size(), [&](std::size_t k) {
    const double log_r = std::log(r_list[k]);
    std::vector<double> tl(g.size(), kNegInf), tr(g.size(), kNegInf);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double c = std::abs(smooth[i]);
      if (c > 0.0) tl[i] = cfg.p[i] * (log_r + std::log(c)) + log_cell;
      if (v[i]) tr[i] = cfg.p[i] * log_r + log_cell;
    }
    const double log_lhs = log_sum_exp(tl), log_rhs = log_sum_exp(tr);
    Row row;
    row.lhs = std::exp(log_lhs);
    row.rhs = std::exp(log_rhs);
    row.ratio = std::exp(log_lhs - log_rhs);
    if (!std::isfinite(row.lhs) || !std::isfinite(row.rhs) || !std::isfinite(row.ratio)) {
      row.finite = false;
      row.lhs = std::isfinite(row.lhs) ? row.lhs : kInf;
      row.rhs = std::isfinite(row.rhs) ? row.rhs : kInf;
      row.ratio = kInf;
    }
    return row;
  });

  ExperimentReport report("modular_gap", {{"R", ""}, {"lhs", ""}, {"rhs", ""}, {"ratio", ""}});
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < r_list.size(); ++k) {
    report.add_row({r_list[k], rows[k].lhs, rows[k].rhs, rows[k].ratio});
    if (rows[k].finite && rows[k].ratio > 0.0) {
      xs.push_back(std::log(r_list[k]));
      ys.push_back(std::log(rows[k].ratio));
    }
  }
  if (xs.size() < 4) throw Error("slope fit needs at least 4 finite rows");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw Error("slope fit needs distinct R values");
  report.set_meta("slope", sxy / sxx);
  report.set_meta("eps", cfg.eps);
  report.set_meta("sigma", cfg.sigma);
  report.set_meta("c0", cfg.c0);
  report.set_meta("j", static_cast<double>(cfg.j));
  report.set_meta("r", cfg.r);
  report.set_meta("x0", cfg.x0[0]);
  report.set_meta("y0", cfg.y0[0]);
  if (g.dim() == 2) {
    report.set_meta("x0_1", cfg.x0[1]);
    report.set_meta("y0_1", cfg.y0[1]);
  }
  return report;
}

double witness_lower_bound(const WitnessConfig& cfg, double R) {
  const Grid& g = cfg.p.grid();
  const Mask u = box_mask(g, cfg.u_box), v = box_mask(g, cfg.v_box);
  double v_measure = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) v_measure += v[i] ? g.cell_volume() : 0.0;
  const double log_base = std::log(cfg.c0 * v_measure * R) - g.dim() * std::log(cfg.sigma);
  std::vector<double> t(g.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < g.size(); ++i)
    if (u[i]) t[i] = cfg.p[i] * log_base + std::log(g.cell_volume());
  return std::exp(log_sum_exp(t));
}

}  // namespace vexlp
