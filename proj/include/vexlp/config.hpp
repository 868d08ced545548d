#pragma once

// Experiment configs: line-oriented `key = value` with [section] headers,
// `#` comments and comma-separated lists.
//
//   [grid]      dim, lo, hi, counts        (lists of dim entries)
//   [function]  kind + preset parameters   (see presets.hpp)
//   [exponent]  kind + preset parameters
//   [control]   optional second exponent (modular-gap control run)
//   [kernel]    kind = gaussian | tent | box
//   [measure]   kind = lebesgue | normalized
//   [run]       seed and subcommand parameters

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vexlp/error.hpp"

namespace vexlp {

struct GridSpec {
  int dim = 1;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::size_t> counts;
  bool operator==(const GridSpec&) const = default;
};

/// A named preset: kind plus numeric parameters; `values` carries inline
/// tables (kind = table).
struct PresetSpec {
  std::string kind;
  std::map<std::string, double> params;
  std::vector<double> values;
  bool operator==(const PresetSpec&) const = default;
};

struct RunParams {
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::vector<double> sigma_list;
  std::vector<double> eps_list;
  std::vector<double> r_list;
  std::vector<int> n_list;
  std::string psi = "logistic";
  double k_lo = -4.0;
  double k_hi = 4.0;
  int trials = 100;
  double radius_ratio = 1.25;
  int probe_points = 2001;
  double herz_p = 2.0;
  double herz_q = 2.0;
  double herz_alpha = 0.0;
  int herz_k_max = 0;  // 0: smallest k_max covering the box
  std::string dump_network;
  bool operator==(const RunParams&) const = default;
};

struct RunConfig {
  GridSpec grid;
  PresetSpec function{"constant", {{"value", 0.0}}, {}};
  PresetSpec exponent{"constant", {{"value", 2.0}}, {}};
  std::optional<PresetSpec> control;
  std::string kernel = "gaussian";
  std::string measure = "lebesgue";
  RunParams run;
  bool operator==(const RunConfig&) const = default;
};

/// Parse errors carry the 1-based line (0 when not tied to a line).
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, int line)
      : ConfigError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Canonical text; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& config);

}  // namespace vexlp
