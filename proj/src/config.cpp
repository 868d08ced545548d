#include "vexlp/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "vexlp/presets.hpp"
#include "vexlp/report.hpp"

namespace vexlp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  if (trim(value).empty()) return out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

double parse_real(const std::string& key, const std::string& text, int line, bool allow_inf = false) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw ParseError("key '" + key + "': expected a real, got '" + text + "'", line);
  if (std::isnan(v) || (std::isinf(v) && !(allow_inf && v > 0)))
    throw ParseError("key '" + key + "': value must be finite", line);
  return v;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& text, int line) {
  Int v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw ParseError("key '" + key + "': expected an integer, got '" + text + "'", line);
  return v;
}

std::vector<double> parse_reals(const std::string& key, const Entry& e, bool allow_inf = false) {
  std::vector<double> out;
  for (const auto& item : split_list(e.value)) out.push_back(parse_real(key, item, e.line, allow_inf));
  return out;
}

template <typename Int>
std::vector<Int> parse_ints(const std::string& key, const Entry& e) {
  std::vector<Int> out;
  for (const auto& item : split_list(e.value)) out.push_back(parse_int<Int>(key, item, e.line));
  return out;
}

void reject_unknown(const std::string& section, const Section& s, const std::set<std::string>& allowed) {
  for (const auto& [k, e] : s)
    if (!allowed.count(k)) throw ParseError("unknown key '" + k + "' in [" + section + "]", e.line);
}

const Entry& require(const std::string& section, const Section& s, const std::string& key) {
  const auto it = s.find(key);
  if (it == s.end()) throw ParseError("[" + section + "] is missing key '" + key + "'", 0);
  return it->second;
}

void range_error(const std::string& key, const std::string& what, int line) {
  throw ParseError("key '" + key + "': " + what, line);
}

GridSpec parse_grid(const Section& s) {
  reject_unknown("grid", s, {"dim", "lo", "hi", "counts"});
  GridSpec g;
  const Entry& d = require("grid", s, "dim");
  g.dim = parse_int<int>("dim", d.value, d.line);
  if (g.dim != 1 && g.dim != 2) range_error("dim", "must be 1 or 2", d.line);
  const Entry& lo = require("grid", s, "lo");
  const Entry& hi = require("grid", s, "hi");
  const Entry& counts = require("grid", s, "counts");
  g.lo = parse_reals("lo", lo);
  g.hi = parse_reals("hi", hi);
  g.counts = parse_ints<std::size_t>("counts", counts);
  const auto n = static_cast<std::size_t>(g.dim);
  if (g.lo.size() != n) range_error("lo", "needs " + std::to_string(n) + " entries", lo.line);
  if (g.hi.size() != n) range_error("hi", "needs " + std::to_string(n) + " entries", hi.line);
  if (g.counts.size() != n) range_error("counts", "needs " + std::to_string(n) + " entries", counts.line);
  for (std::size_t a = 0; a < n; ++a) {
    if (!(g.hi[a] > g.lo[a])) range_error("hi", "must exceed lo on every axis", hi.line);
    if (g.counts[a] < 2) range_error("counts", "must be >= 2", counts.line);
    if (g.counts[a] > (std::size_t{1} << 24)) range_error("counts", "must be <= 2^24", counts.line);
  }
  return g;
}

PresetSpec parse_preset(const std::string& section, const Section& s, bool exponent) {
  const Entry& k = require(section, s, "kind");
  PresetSpec p;
  p.kind = k.value;
  const PresetSchema* schema = exponent ? find_exponent_schema(p.kind) : find_function_schema(p.kind);
  if (!schema) throw ParseError("[" + section + "] unknown kind '" + p.kind + "'", k.line);
  std::set<std::string> allowed{"kind"};
  for (const auto& [name, def] : schema->params) allowed.insert(name);
  if (schema->table) allowed.insert("values");
  reject_unknown(section, s, allowed);
  for (const auto& [name, def] : schema->params) {
    const auto it = s.find(name);
    p.params[name] = it == s.end() ? def : parse_real(name, it->second.value, it->second.line);
  }
  if (schema->table) {
    const Entry& v = require(section, s, "values");
    p.values = parse_reals("values", v, exponent);
    if (p.values.empty()) range_error("values", "table needs at least one value", v.line);
  }
  return p;
}

std::string parse_choice(const std::string& section, const Section& s, const std::set<std::string>& choices) {
  reject_unknown(section, s, {"kind"});
  const Entry& k = require(section, s, "kind");
  if (!choices.count(k.value)) throw ParseError("[" + section + "] unknown kind '" + k.value + "'", k.line);
  return k.value;
}

RunParams parse_run(const Section& s) {
  RunParams r;
  using Setter = std::function<void(const std::string&, const Entry&)>;
  auto positive_list = [](const std::string& key, const Entry& e) {
    auto v = parse_reals(key, e);
    for (double x : v)
      if (!(x > 0.0)) range_error(key, "entries must be positive", e.line);
    return v;
  };
  const std::map<std::string, Setter> setters{
      {"seed", [&](auto& k, auto& e) { r.seed = parse_int<std::uint64_t>(k, e.value, e.line); }},
      {"tol",
       [&](auto& k, auto& e) {
         r.tol = parse_real(k, e.value, e.line);
         if (!(r.tol > 0.0) || r.tol > 0.1) range_error(k, "must lie in (0, 0.1]", e.line);
       }},
      {"sigma_list", [&](auto& k, auto& e) { r.sigma_list = positive_list(k, e); }},
      {"eps_list", [&](auto& k, auto& e) { r.eps_list = positive_list(k, e); }},
      {"r_list", [&](auto& k, auto& e) { r.r_list = positive_list(k, e); }},
      {"n_list",
       [&](auto& k, auto& e) {
         r.n_list = parse_ints<int>(k, e);
         for (int n : r.n_list)
           if (n < 1) range_error(k, "entries must be >= 1", e.line);
       }},
      {"psi",
       [&](auto& k, auto& e) {
         if (e.value != "logistic" && e.value != "ramp" && e.value != "heaviside")
           range_error(k, "must be logistic, ramp or heaviside", e.line);
         r.psi = e.value;
       }},
      {"k_lo", [&](auto& k, auto& e) { r.k_lo = parse_real(k, e.value, e.line); }},
      {"k_hi", [&](auto& k, auto& e) { r.k_hi = parse_real(k, e.value, e.line); }},
      {"trials",
       [&](auto& k, auto& e) {
         r.trials = parse_int<int>(k, e.value, e.line);
         if (r.trials < 1) range_error(k, "must be >= 1", e.line);
       }},
      {"radius_ratio",
       [&](auto& k, auto& e) {
         r.radius_ratio = parse_real(k, e.value, e.line);
         if (!(r.radius_ratio > 1.0) || r.radius_ratio > 1.25) range_error(k, "must lie in (1, 1.25]", e.line);
       }},
      {"probe_points",
       [&](auto& k, auto& e) {
         r.probe_points = parse_int<int>(k, e.value, e.line);
         if (r.probe_points < 2) range_error(k, "must be >= 2", e.line);
       }},
      {"herz_p",
       [&](auto& k, auto& e) {
         r.herz_p = parse_real(k, e.value, e.line);
         if (r.herz_p < 1.0) range_error(k, "must be >= 1", e.line);
       }},
      {"herz_q",
       [&](auto& k, auto& e) {
         r.herz_q = parse_real(k, e.value, e.line);
         if (r.herz_q < 1.0) range_error(k, "must be >= 1", e.line);
       }},
      {"herz_alpha", [&](auto& k, auto& e) { r.herz_alpha = parse_real(k, e.value, e.line); }},
      {"herz_k_max",
       [&](auto& k, auto& e) {
         r.herz_k_max = parse_int<int>(k, e.value, e.line);
         if (r.herz_k_max < 0 || r.herz_k_max > 60) range_error(k, "must lie in [0, 60]", e.line);
       }},
      {"dump_network", [&](auto&, auto& e) { r.dump_network = e.value; }},
  };
  for (const auto& [k, e] : s) {
    const auto it = setters.find(k);
    if (it == setters.end()) throw ParseError("unknown key '" + k + "' in [run]", e.line);
    it->second(k, e);
  }
  if (!(r.k_hi > r.k_lo)) throw ParseError("key 'k_hi': must exceed k_lo", s.count("k_hi") ? s.at("k_hi").line : 0);
  return r;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, Section> sections;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  static const std::set<std::string> kSections{"grid", "function", "exponent", "control", "kernel", "measure", "run"};
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("malformed section header", line_no);
      current = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(current)) throw ParseError("unknown section [" + current + "]", line_no);
      if (sections.count(current)) throw ParseError("duplicate section [" + current + "]", line_no);
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    if (current.empty()) throw ParseError("key outside any section", line_no);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line_no);
    Section& s = sections[current];
    if (s.count(key)) throw ParseError("duplicate key '" + key + "'", line_no);
    s[key] = {trim(line.substr(eq + 1)), line_no};
  }

  if (!sections.count("grid")) throw ParseError("missing [grid]", 0);
  RunConfig c;
  c.grid = parse_grid(sections["grid"]);
  if (sections.count("function")) c.function = parse_preset("function", sections["function"], false);
  if (sections.count("exponent")) c.exponent = parse_preset("exponent", sections["exponent"], true);
  if (sections.count("control")) c.control = parse_preset("control", sections["control"], true);
  if (sections.count("kernel")) c.kernel = parse_choice("kernel", sections["kernel"], {"gaussian", "tent", "box"});
  if (sections.count("measure")) c.measure = parse_choice("measure", sections["measure"], {"lebesgue", "normalized"});
  if (sections.count("run")) c.run = parse_run(sections["run"]);

  // Tables must match the grid.
  std::size_t cells = 1;
  for (std::size_t n : c.grid.counts) cells *= n;
  auto check_table = [&](const char* name, const PresetSpec& p) {
    if (!p.values.empty() && p.values.size() != cells)
      throw ParseError(std::string("[") + name + "] table has " + std::to_string(p.values.size()) + " values for " +
                           std::to_string(cells) + " cells",
                       sections[name].at("values").line);
  };
  check_table("function", c.function);
  if (sections.count("exponent")) check_table("exponent", c.exponent);
  if (c.control) check_table("control", *c.control);

  // Exponent range checks need the grid; report them at the section's kind line.
  const Grid grid = make_grid(c.grid);
  auto check_exponent = [&](const char* name, const PresetSpec& p) {
    try {
      (void)make_exponent(p, grid);
    } catch (const ConfigError& e) {
      throw ParseError(std::string("[") + name + "] " + e.what(), sections[name].at("kind").line);
    }
  };
  if (sections.count("exponent")) check_exponent("exponent", c.exponent);
  if (c.control) check_exponent("control", *c.control);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

template <typename T, typename F>
std::string join(const std::vector<T>& v, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out;
}

std::string reals(const std::vector<double>& v) { return join(v, format_real); }

template <typename T>
std::string ints(const std::vector<T>& v) {
  return join(v, [](T x) { return std::to_string(x); });
}

void write_preset(std::ostream& out, const std::string& section, const PresetSpec& p) {
  out << '[' << section << "]\nkind = " << p.kind << '\n';
  for (const auto& [k, v] : p.params) out << k << " = " << format_real(v) << '\n';
  if (!p.values.empty()) out << "values = " << reals(p.values) << '\n';
}

}  // namespace

std::string serialize(const RunConfig& c) {
  std::ostringstream out;
  out << "[grid]\ndim = " << c.grid.dim << "\nlo = " << reals(c.grid.lo) << "\nhi = " << reals(c.grid.hi)
      << "\ncounts = " << ints(c.grid.counts) << '\n';
  write_preset(out, "function", c.function);
  write_preset(out, "exponent", c.exponent);
  if (c.control) write_preset(out, "control", *c.control);
  out << "[kernel]\nkind = " << c.kernel << '\n';
  out << "[measure]\nkind = " << c.measure << '\n';
  const RunParams& r = c.run;
  out << "[run]\nseed = " << r.seed << "\ntol = " << format_real(r.tol) << "\nsigma_list = " << reals(r.sigma_list)
      << "\neps_list = " << reals(r.eps_list) << "\nr_list = " << reals(r.r_list) << "\nn_list = " << ints(r.n_list)
      << "\npsi = " << r.psi << "\nk_lo = " << format_real(r.k_lo) << "\nk_hi = " << format_real(r.k_hi)
      << "\ntrials = " << r.trials << "\nradius_ratio = " << format_real(r.radius_ratio)
      << "\nprobe_points = " << r.probe_points << "\nherz_p = " << format_real(r.herz_p)
      << "\nherz_q = " << format_real(r.herz_q) << "\nherz_alpha = " << format_real(r.herz_alpha)
      << "\nherz_k_max = " << r.herz_k_max << "\ndump_network = " << r.dump_network << '\n';
  return out.str();
}

}  // namespace vexlp
