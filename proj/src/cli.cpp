#include "vexlp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "vexlp/herz.hpp"
#include "vexlp/modular_gap.hpp"
#include "vexlp/networks.hpp"
#include "vexlp/norm.hpp"
#include "vexlp/parallel.hpp"
#include "vexlp/presets.hpp"
#include "vexlp/random.hpp"

namespace vexlp::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// FNV-1a over the raw bytes of the inputs, cut to 53 bits so the CSV value
// is an exactly representable integer.
class InputHash {
 public:
  void add(std::span<const double> v) {
    for (double x : v) add_bytes(&x, sizeof x);
  }
  void add(double x) { add_bytes(&x, sizeof x); }
  double value() const { return static_cast<double>(h_ & ((std::uint64_t{1} << 53) - 1)); }

 private:
  void add_bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= b[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

std::string grid_label(const Grid& g) {
  std::ostringstream s;
  s << g.dim() << "d";
  for (int a = 0; a < g.dim(); ++a) s << ':' << format_real(g.lo(a)) << ':' << format_real(g.hi(a)) << ':' << g.count(a);
  return s.str();
}

void require_list(const std::vector<double>& v, const char* key, const std::string& command) {
  if (v.empty()) throw ConfigError(command + " needs [run] " + key);
}

struct Inputs {
  Grid grid;
  SampledFunction f;
  VariableExponent p;
  Mollifier phi;
  Measure mu;
};

Inputs build(const RunConfig& c) {
  Grid g = make_grid(c.grid);
  SampledFunction f = make_function(c.function, g);
  VariableExponent p = make_exponent(c.exponent, g);
  Mollifier phi = make_kernel(c.kernel, g.dim());
  Measure mu = make_measure(c.measure, g);
  return {g, f, p, phi, mu};
}

ExperimentReport norm_like(const std::string& command, const RunConfig& c, const Inputs& in) {
  InputHash hash;
  hash.add(in.f.values());
  hash.add(in.p.values());
  for (std::size_t i = 0; i < in.grid.size(); ++i) hash.add(in.mu.weight(i));
  ExperimentReport r(command, {{"input_hash", ""}, {"value", ""}, {"iterations", ""}, {"bracket_width", ""}});
  if (command == "norm") {
    hash.add(c.run.tol);
    const NormResult n = luxemburg_norm(in.f, in.p, in.mu, c.run.tol);
    r.add_row({hash.value(), n.norm, static_cast<double>(n.iterations), n.bracket.width()});
    r.set_meta("modular_at_norm", n.modular_at_norm);
  } else {
    r.add_row({hash.value(), modular(in.f, in.p, in.mu), 0.0, 0.0});
  }
  return r;
}

ExperimentReport hoelder_check(const RunConfig& c, const Inputs& in) {
  LogHoelderOptions opt;
  opt.seed = c.run.seed;
  double c_local = kInf, c_decay = kInf, combined = kInf, pairs = 0.0;
  bool has_inf = false;
  for (std::size_t i = 0; i < in.p.size(); ++i) has_inf = has_inf || in.p.is_infinite(i);
  if (!has_inf) {
    const LogHoelderReport lh = log_hoelder_report(in.p, opt);
    c_local = lh.c_local;
    c_decay = lh.c_decay;
    combined = lh.combined();
    pairs = static_cast<double>(lh.pairs_scanned);
  }
  const double k = hoelder_constant(in.p, in.mu);
  const VariableExponent dual = in.p.conjugate();
  const double f_norm = luxemburg_norm(in.f, in.p, in.mu, c.run.tol).norm;
  const SampledFunction abs_f = abs(in.f);

  Rng rng(c.run.seed);
  std::vector<SampledFunction> gs;
  for (int t = 0; t < c.run.trials; ++t) gs.push_back(random_function(in.grid, rng));
  const auto ratios = parallel_map<double>(gs.size(), [&](std::size_t t) {
    const double bound = k * f_norm * luxemburg_norm(gs[t], dual, in.mu, c.run.tol).norm;
    const double lhs = dual_pairing(abs_f, abs(gs[t]), in.mu);
    return bound > 0.0 ? lhs / bound : 0.0;
  });
  double worst = 0.0;
  int violations = 0;
  for (double q : ratios) {
    worst = std::max(worst, q);
    if (q > 1.0) ++violations;
  }
  ExperimentReport r("hoelder-check", {{"c_local", ""},
                                        {"c_decay", ""},
                                        {"c_combined", ""},
                                        {"k_p", ""},
                                        {"pairs_scanned", ""},
                                        {"trials", ""},
                                        {"violations", ""},
                                        {"max_ratio", ""}});
  r.add_row({c_local, c_decay, combined, k, pairs, static_cast<double>(c.run.trials), static_cast<double>(violations),
             worst});
  return r;
}

int resolve_k_max(const RunConfig& c, const Grid& g) {
  if (c.run.herz_k_max > 0) return c.run.herz_k_max;
  double far = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const double m = std::max(std::abs(g.lo(a)), std::abs(g.hi(a)));
    far += m * m;
  }
  int k = 1;
  while (!(std::sqrt(far) < std::ldexp(1.0, k))) ++k;
  return k;
}

void dump(const std::string& path, const ExperimentReport& net) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write network dump '" + path + "'");
  net.write_csv(out);
}

std::string description(const std::string& name) {
  static const std::map<std::string, std::string> text{
      {"norm", "Luxemburg norm of f in L^p(mu)"},
      {"modular", "modular rho_p(f)"},
      {"hoelder-check", "log-Hoelder constants and a seeded Hoelder-inequality sweep"},
      {"mollify-converge", "||phi_sigma * f - f||_p over sigma_list"},
      {"maximal-check", "sup_sigma |phi_sigma * f| against the maximal function"},
      {"riemann-net", "Riemann-sum networks for rho * Psi over n_list"},
      {"density-sigma", "Sigma(Psi) density experiment over eps_list"},
      {"density-s1", "S1 density experiment over eps_list"},
      {"herz-converge", "Herz-norm error of phi_sigma * f over sigma_list"},
      {"modular-gap", "modular-inequality gap witness over r_list"},
  };
  return text.at(name);
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"norm",        "modular",       "hoelder-check", "mollify-converge",
                                              "maximal-check", "riemann-net", "density-sigma", "density-s1",
                                              "herz-converge", "modular-gap"};
  return names;
}

ExperimentReport execute(const std::string& command, const RunConfig& c) {
  const Inputs in = build(c);
  const RunParams& run = c.run;
  auto finish = [&](ExperimentReport r) {
    r.set_meta("command", command);
    r.set_meta("seed", std::to_string(run.seed));
    r.set_meta("grid", grid_label(in.grid));
    r.set_meta("tol", run.tol);
    return r;
  };

  if (command == "norm" || command == "modular") return finish(norm_like(command, c, in));
  if (command == "hoelder-check") return finish(hoelder_check(c, in));
  if (command == "mollify-converge") {
    require_list(run.sigma_list, "sigma_list", command);
    return finish(identity_convergence(in.phi, in.f, in.p, in.mu, run.sigma_list, run.tol));
  }
  if (command == "maximal-check") {
    require_list(run.sigma_list, "sigma_list", command);
    const RBMajorant majorant = RBMajorant::least_for(in.phi);
    ExperimentReport r =
        rb_domination_check(in.phi, majorant, in.f, run.sigma_list, radius_ladder(in.grid, run.radius_ratio));
    r.set_meta("radius_ratio", run.radius_ratio);
    return finish(std::move(r));
  }
  if (command == "riemann-net") {
    if (run.n_list.empty()) throw ConfigError(command + " needs [run] n_list");
    const SquashingFn psi = SquashingFn::named(run.psi);
    ExperimentReport r("riemann-net", {{"N", ""}, {"terms", ""}, {"sup_error", ""}});
    std::optional<RiemannResult> last;
    const RiemannProbes probes =
        riemann_reference(psi, in.f, run.k_lo, run.k_hi, static_cast<std::size_t>(run.probe_points));
    for (int n : run.n_list) {
      RiemannResult res = riemann_smooth(psi, in.f, n, probes);
      r.add_row({static_cast<double>(n), static_cast<double>(res.net.terms.size()), res.sup_error});
      last = std::move(res);
    }
    dump(run.dump_network, dump_network(last->net));
    r.set_meta("psi", psi.name());
    r.set_meta("k_lo", run.k_lo);
    r.set_meta("k_hi", run.k_hi);
    return finish(std::move(r));
  }
  if (command == "density-sigma") {
    require_list(run.eps_list, "eps_list", command);
    std::optional<SigmaNetwork> net;
    ExperimentReport r =
        density_experiment_sigma(in.f, SquashingFn::named(run.psi), in.p, in.mu, run.eps_list, in.phi, &net);
    dump(run.dump_network, dump_network(*net));
    return finish(std::move(r));
  }
  if (command == "density-s1") {
    require_list(run.eps_list, "eps_list", command);
    std::optional<RadialNetwork> net;
    ExperimentReport r = density_experiment_s1(in.f, in.phi, in.p, run.eps_list, &net);
    dump(run.dump_network, dump_network(*net));
    return finish(std::move(r));
  }
  if (command == "herz-converge") {
    require_list(run.sigma_list, "sigma_list", command);
    const HerzParams params{run.herz_p, run.herz_q, run.herz_alpha, resolve_k_max(c, in.grid)};
    return finish(herz_identity_convergence(in.phi, in.f, params, run.sigma_list));
  }
  if (command == "modular-gap") {
    require_list(run.r_list, "r_list", command);
    const WitnessConfig cfg = auto_witness(in.p, in.phi);
    ExperimentReport r = ratio_curve(cfg, run.r_list);
    if (c.control) {
      const ExperimentReport ctl = ratio_curve(with_exponent(cfg, make_exponent(*c.control, in.grid)), run.r_list);
      const auto ratios = ctl.column("ratio");
      const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
      r.set_meta("control_max_over_min", *hi / *lo);
      r.set_meta("control_slope", std::stod(ctl.meta("slope")));
    }
    return finish(std::move(r));
  }
  throw ConfigError("unknown subcommand '" + command + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variable-exponent Lebesgue space experiments", "vexlp"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  const auto& names = subcommands();
  if (!args.empty() && args.front().rfind("-", 0) != 0 &&
      std::find(names.begin(), names.end(), args.front()) == names.end()) {
    err << "error: unknown subcommand '" << args.front() << "'\n" << app.help();
    return kExitConfig;
  }
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name, description(name));
    sub->add_option("--config", config_path, "experiment config file")->required();
    sub->add_option("--out", out_path, "write CSV here instead of stdout");
    sub->add_option("--seed", seed, "override [run] seed");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunConfig config = load_config(config_path);
    if (seed) config.run.seed = *seed;
    const std::string csv = execute(command, config).to_csv();
    if (out_path.empty()) {
      out << csv;
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw ConfigError("cannot write '" + out_path + "'");
      file << csv;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << command << ": " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace vexlp::cli
