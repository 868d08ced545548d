// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "vexlp/cli.hpp"
#include "vexlp/config.hpp"
#include "vexlp/herz.hpp"
#include "vexlp/mollify.hpp"
#include "vexlp/networks.hpp"
#include "vexlp/norm.hpp"
#include "vexlp/presets.hpp"
#include "vexlp/random.hpp"

using namespace vexlp;

namespace {

const std::string kConfigs = std::string(VEXLP_SOURCE_DIR) + "/configs/";

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      detail << what << "; ";
      pass = false;
    }
  }
};

ExperimentReport run_config(const std::string& command, const std::string& config) {
  return cli::execute(command, load_config(kConfigs + config));
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return !v.empty();
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return !v.empty();
}

Grid random_grid(Rng& rng) {
  if (uniform(rng) < 0.5) return Grid::line(uniform(rng, -2, 0), uniform(rng, 0.5, 3), 50 + uniform_index(rng, 400));
  return Grid::rect({uniform(rng, -2, 0), uniform(rng, -2, 0)}, {uniform(rng, 0.5, 2), uniform(rng, 0.5, 2)},
                    8 + uniform_index(rng, 30), 8 + uniform_index(rng, 30));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// 1. Constant-exponent reduction against a long double closed form.
void c1(Outcome& o) {
  Rng rng(101);
  double worst = 0.0;
  for (double p0 : {1.0, 2.0, 3.0, 7.5}) {
    for (int t = 0; t < 50; ++t) {
      const Grid g = random_grid(rng);
      const auto f = random_function(g, rng);
      long double s = 0.0L;
      for (double v : f.values()) s += std::pow(static_cast<long double>(std::abs(v)), static_cast<long double>(p0));
      const double exact =
          static_cast<double>(std::pow(s * static_cast<long double>(g.cell_volume()), 1.0L / p0));
      const double got = luxemburg_norm(f, VariableExponent::constant(g, p0), Measure::lebesgue()).norm;
      if (exact == 0.0) {
        o.require(got == 0.0, "zero function");
        continue;
      }
      worst = std::max(worst, rel(got, exact));
    }
  }
  o.require(worst <= 1e-9, "relative error above 1e-9");
  o.detail << "max relative error " << worst;
}

// 2. Homogeneity, triangle inequality, unit-ball property.
void c2(Outcome& o) {
  Rng rng(202);
  const double tol = kDefaultNormTol;
  double worst_h = 0.0, worst_t = -1.0, worst_u = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Grid g = random_grid(rng);
    const bool with_inf = t % 3 == 0;
    const auto p = random_exponent(g, rng, t % 2 == 0, with_inf);
    const auto f = random_function(g, rng), h = random_function(g, rng);
    const double c = std::vector<double>{-3.0, 0.5, 7.0}[t % 3];
    const double nf = luxemburg_norm(f, p, Measure::lebesgue()).norm;
    const double nh = luxemburg_norm(h, p, Measure::lebesgue()).norm;
    const double ncf = luxemburg_norm(scale(f, c), p, Measure::lebesgue()).norm;
    const double nsum = luxemburg_norm(add(f, h), p, Measure::lebesgue()).norm;
    if (nf > 0.0) worst_h = std::max(worst_h, rel(ncf, std::abs(c) * nf));
    worst_t = std::max(worst_t, (nsum - nf - nh) / std::max(nf + nh, 1e-300));
    if (!with_inf && nf > 0.0) worst_u = std::max(worst_u, std::abs(modular(scale(f, 1.0 / nf), p, Measure::lebesgue()) - 1.0));
  }
  o.require(worst_h <= 10 * tol, "homogeneity");
  o.require(worst_t <= 10 * tol, "triangle inequality");
  o.require(worst_u <= 1e-6, "unit ball");
  o.detail << "homogeneity " << worst_h << ", triangle excess " << std::max(0.0, worst_t) << ", |modular-1| "
           << worst_u;
}

// 3. Hoelder inequality with nonempty Omega_1 and Omega_inf.
void c3(Outcome& o) {
  Rng rng(303);
  int violations = 0, with_one = 0, with_inf = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Grid g = random_grid(rng);
    const auto p = random_exponent(g, rng, t % 2 == 0, t % 4 < 2);
    const auto e = extremes(p);
    with_one += e.p_minus == 1.0;
    with_inf += e.p_plus == kInfiniteExponent;
    const auto f = abs(random_function(g, rng)), h = abs(random_function(g, rng));
    const double lhs = dual_pairing(f, h, Measure::lebesgue());
    const double rhs = hoelder_constant(p) * luxemburg_norm(f, p, Measure::lebesgue()).norm *
                       luxemburg_norm(h, p.conjugate(), Measure::lebesgue()).norm;
    if (lhs > rhs * (1.0 + 1e-12)) ++violations;
    if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
  }
  o.require(violations == 0, std::to_string(violations) + " violations");
  o.require(with_one > 0 && with_inf > 0, "coverage of Omega_1 and Omega_inf");
  o.detail << "violations " << violations << ", max lhs/rhs " << worst << ", triples with Omega_1 " << with_one
           << ", with Omega_inf " << with_inf;
}

// 4. Approximate identity.
void c4(Outcome& o) {
  const auto r = run_config("mollify-converge", "mollify_tent.cfg");
  const auto s = r.column("sigma"), e = r.column("error");
  o.require(s.size() == 6 && s.front() == 0.4 && s.back() == 0.0125, "sigma ladder 0.4 -> 0.0125");
  o.require(strictly_decreasing(e), "error not strictly decreasing");
  o.require(e.back() < 0.02 * e.front(), "final error >= 0.02 x initial");
  o.detail << "errors " << e.front() << " -> " << e.back() << " (ratio " << e.back() / e.front() << ")";
}

// 5. Riemann-sum networks.
void c5(Outcome& o) {
  for (const char* cfg : {"riemann_logistic.cfg", "riemann_heaviside.cfg"}) {
    const auto r = run_config("riemann-net", cfg);
    const auto n = r.column("N"), e = r.column("sup_error");
    double e16 = NAN, e1024 = NAN;
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (n[i] == 16) e16 = e[i];
      if (n[i] == 1024) e1024 = e[i];
    }
    o.require(e1024 <= e16 / 10.0, std::string(cfg) + " error(1024) > error(16)/10");
    o.detail << r.meta("psi") << " " << e16 << " -> " << e1024 << "; ";
  }
}

// 6. Sigma(Psi) density.
void c6(Outcome& o) {
  const auto r = run_config("density-sigma", "density_sigma.cfg");
  const auto eps = r.column("eps"), err = r.column("error"), terms = r.column("terms");
  o.require(eps == std::vector<double>{0.1, 0.05, 0.02}, "eps list");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    o.require(err[i] <= eps[i], "error above eps");
    o.detail << "eps " << eps[i] << ": " << err[i] << " (" << terms[i] << " terms); ";
  }
}

// 7. S1 density plus stride-1 exactness.
void c7(Outcome& o) {
  for (const char* cfg : {"density_s1_tent.cfg", "density_s1_pyramid.cfg"}) {
    const auto r = run_config("density-s1", cfg);
    const auto eps = r.column("eps"), err = r.column("error");
    o.require(eps == std::vector<double>{0.1, 0.05}, "eps list");
    for (std::size_t i = 0; i < eps.size(); ++i) {
      o.require(err[i] <= eps[i], std::string(cfg) + " error above eps");
      o.detail << cfg << " eps " << eps[i] << ": " << err[i] << "; ";
    }
    const RunConfig c = load_config(kConfigs + cfg);
    const Grid g = make_grid(c.grid);
    const auto f = make_function(c.function, g);
    const Mollifier phi = make_kernel(c.kernel, g.dim());
    double worst = 0.0;
    for (double sigma : {0.2, 0.05}) {
      const auto a = eval_radial(construct_s1(f, phi, sigma, 1), g);
      const auto b = convolve(dilate(phi, sigma), f);
      worst = std::max(worst, sub(a, b).max_abs());
    }
    o.require(worst <= 1e-10, std::string(cfg) + " stride-1 S1 differs from convolve");
    o.detail << "stride-1 diff " << worst << "; ";
  }
}

// 8. Herz norms.
void c8(Outcome& o) {
  const double ball = std::sqrt(2.0), ring = 2.0;
  for (std::size_t n : {std::size_t{1} << 12, std::size_t{1} << 14}) {
    const double tol = n == (std::size_t{1} << 12) ? 0.02 : 0.005;
    const Grid g = Grid::line(-4.0, 4.0, n);
    const auto chi_b = SampledFunction::sample(g, [](const Point& x) { return std::abs(x[0]) < 1.0 ? 1.0 : 0.0; });
    const auto chi_c = SampledFunction::sample(g, [](const Point& x) {
      return std::abs(x[0]) >= 1.0 && std::abs(x[0]) < 2.0 ? 1.0 : 0.0;
    });
    double worst_b = 0.0;
    for (double alpha : {-0.5, 0.0, 0.7})
      for (double q : {1.0, 2.0, 3.0})
        worst_b = std::max(worst_b, rel(herz_norm(chi_b, HerzParams{2.0, q, alpha, 3}), ball));
    const double vc = herz_norm(chi_c, HerzParams{2.0, 3.0, 0.5, 3});
    o.require(worst_b <= tol && rel(vc, ring) <= tol, "closed forms at " + std::to_string(n) + " cells");
    o.detail << n << " cells: ball err " << worst_b << ", ring err " << rel(vc, ring) << "; ";
  }

  Rng rng(808);
  double worst_h = 0.0, excess = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Grid g = random_grid(rng);
    const HerzParams hp{uniform(rng, 1.0, 5.0), uniform(rng, 1.0, 4.0), uniform(rng, -1.0, 1.0), 3};
    const auto f = random_function(g, rng), h = random_function(g, rng);
    const double c = uniform(rng, -5.0, 5.0);
    const double nf = herz_norm(f, hp), nh = herz_norm(h, hp);
    if (nf > 0.0) worst_h = std::max(worst_h, rel(herz_norm(scale(f, c), hp), std::abs(c) * nf));
    excess = std::max(excess, (herz_norm(add(f, h), hp) - nf - nh) / std::max(nf + nh, 1e-300));
  }
  o.require(worst_h <= 1e-12 && excess <= 1e-12, "norm axioms");
  o.detail << "axioms: homogeneity " << worst_h << ", triangle excess " << excess << "; ";

  for (const char* cfg : {"herz_plus.cfg", "herz_minus.cfg"}) {
    const auto e = run_config("herz-converge", cfg).column("herz_error");
    o.require(strictly_decreasing(e), std::string(cfg) + " not strictly decreasing");
    o.detail << cfg << " " << e.front() << " -> " << e.back() << "; ";
  }
}

// 9. Maximal operator and RB domination.
void c9(Outcome& o) {
  const RunConfig c = load_config(kConfigs + "maximal_gaussian.cfg");
  const Grid g = make_grid(c.grid);
  const double h = g.spacing(0);
  const auto chi = SampledFunction::sample(g, [](const Point& x) { return std::abs(x[0]) <= 1.0 ? 1.0 : 0.0; });
  const auto m = maximal(chi, radius_ladder(g, c.run.radius_ratio));
  const double m0 = m[g.nearest_cell({0.0, 0.0})], m3 = m[g.nearest_cell({3.0, 0.0})];
  o.require(std::abs(m0 - 2.0) <= 2.0 * h, "Mf(0)");
  o.require(std::abs(m3 - 0.5) <= 0.02, "Mf(3)");
  o.detail << "Mf(0) " << m0 << ", Mf(3) " << m3 << "; ";
  for (const char* cfg : {"maximal_gaussian.cfg", "maximal_tent.cfg"}) {
    const auto r = run_config("maximal-check", cfg);
    const double ratio = std::stod(r.meta("max_ratio")), l1 = std::stod(r.meta("l1_mass"));
    o.require(ratio <= l1 + 1e-3, std::string(cfg) + " ratio above ||Phi||_1 + 1e-3");
    o.detail << r.meta("kernel") << " max ratio " << ratio << " vs ||Phi||_1 " << l1 << "; ";
  }
}

// 10. Modular-gap demonstrator.
void c10(Outcome& o) {
  const auto r = run_config("modular-gap", "step24.cfg");
  const auto R = r.column("R"), ratio = r.column("ratio");
  const double slope = std::stod(r.meta("slope"));
  const double control = std::stod(r.meta("control_max_over_min"));
  o.require(R == std::vector<double>{10, 1e2, 1e3, 1e4, 1e5, 1e6}, "R list");
  o.require(strictly_increasing(ratio), "ratio not strictly increasing");
  o.require(ratio.back() > 1e3, "ratio never exceeds 1e3");
  o.require(slope >= 1.6 && slope <= 2.4, "slope outside [1.6, 2.4]");
  o.require(control <= 1.05, "control max/min above 1.05");
  o.detail << "ratio " << ratio.front() << " -> " << ratio.back() << ", slope " << slope << ", control max/min "
           << control;
}

// 11. Thread-count determinism of the CLI output.
void c11(Outcome& o) {
  const std::vector<std::pair<std::string, std::string>> runs{{"mollify-converge", "mollify_tent.cfg"},
                                                              {"density-sigma", "density_sigma.cfg"},
                                                              {"density-s1", "density_s1_tent.cfg"},
                                                              {"density-s1", "density_s1_pyramid.cfg"},
                                                              {"modular-gap", "step24.cfg"}};
  for (const auto& [cmd, cfg] : runs) {
    std::string outputs[2];
    const char* threads[2] = {"1", "4"};
    for (int k = 0; k < 2; ++k) {
      setenv("VEX_THREADS", threads[k], 1);
      std::ostringstream out, err;
      const int code = cli::run({cmd, "--config", kConfigs + cfg}, out, err);
      o.require(code == 0, cmd + " exit code");
      outputs[k] = out.str();
    }
    unsetenv("VEX_THREADS");
    o.require(!outputs[0].empty() && outputs[0] == outputs[1], cmd + " " + cfg + " differs");
  }
  o.detail << runs.size() << " runs byte-identical at VEX_THREADS=1 and 4";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "constant-exponent reduction", 5, c1},   {2, "norm axioms and unit ball", 10, c2},
      {3, "hoelder inequality", 20, c3},           {4, "approximate identity", 30, c4},
      {5, "riemann-sum networks", 10, c5},         {6, "sigma(psi) density", 60, c6},
      {7, "S1 density", 120, c7},                  {8, "herz norms", 60, c8},
      {9, "maximal operator and RB domination", 30, c9}, {10, "modular-gap demonstrator", 30, c10},
      {11, "determinism", 600, c11},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < c.budget_s, "runtime over budget");
    failed += !o.pass;
    std::cout << "criterion " << c.id << " [" << c.name << "]: " << (o.pass ? "PASS" : "FAIL") << " ("
              << o.detail.str() << ") " << secs << " s of " << c.budget_s << " s\n";
  }
  std::cout << (failed ? "ACCEPTANCE FAILED: " + std::to_string(failed) + " criteria" : std::string("ACCEPTANCE PASSED"))
            << "\n";
  return failed ? 1 : 0;
}
