#include "vexlp/presets.hpp"

#include <algorithm>
#include <cmath>

#include "vexlp/error.hpp"

namespace vexlp {

namespace {

const std::vector<PresetSchema>& function_schemas() {
  static const std::vector<PresetSchema> s{
      {"constant", {{"value", 1.0}}},
      {"indicator", {{"lo", 0.0}, {"hi", 1.0}}},
      {"ball", {{"radius", 1.0}}},
      {"annulus", {{"inner", 1.0}, {"outer", 2.0}}},
      {"tent", {{"center", 0.0}, {"center1", 0.0}, {"half_width", 1.0}, {"height", 1.0}}},
      {"pyramid", {{"center", 0.0}, {"center1", 0.0}, {"half_width", 1.0}, {"height", 1.0}}},
      {"bump", {{"center", 0.0}, {"center1", 0.0}, {"radius", 1.0}, {"height", 1.0}}},
      {"gaussian", {{"center", 0.0}, {"center1", 0.0}, {"width", 1.0}, {"height", 1.0}}},
      {"linear", {{"slope", 1.0}, {"intercept", 0.0}}},
      {"sine", {{"amplitude", 1.0}, {"frequency", 1.0}, {"phase", 0.0}}},
      {"table", {}, true},
  };
  return s;
}

const std::vector<PresetSchema>& exponent_schemas() {
  static const std::vector<PresetSchema> s{
      {"constant", {{"value", 2.0}}},
      {"step", {{"low", 2.0}, {"high", 4.0}, {"threshold", 0.0}}},
      {"smooth", {{"base", 2.0}, {"amplitude", 0.5}, {"frequency", 1.0}}},
      {"linear", {{"intercept", 2.0}, {"slope", 1.0}}},
      {"table", {}, true},
  };
  return s;
}

const PresetSchema* find(const std::vector<PresetSchema>& all, const std::string& kind) {
  for (const auto& s : all)
    if (s.kind == kind) return &s;
  return nullptr;
}

double param(const PresetSpec& spec, const std::string& name) {
  const auto it = spec.params.find(name);
  if (it == spec.params.end()) throw ConfigError("preset '" + spec.kind + "' is missing parameter '" + name + "'");
  return it->second;
}

double positive_param(const PresetSpec& spec, const std::string& name) {
  const double v = param(spec, name);
  if (!(v > 0.0)) throw ConfigError("preset '" + spec.kind + "': parameter '" + name + "' must be positive");
  return v;
}

std::vector<double> table_values(const PresetSpec& spec, const Grid& grid) {
  if (spec.values.size() != grid.size())
    throw ConfigError("table has " + std::to_string(spec.values.size()) + " values for " +
                      std::to_string(grid.size()) + " cells");
  return spec.values;
}

}  // namespace

const PresetSchema* find_function_schema(const std::string& kind) { return find(function_schemas(), kind); }
const PresetSchema* find_exponent_schema(const std::string& kind) { return find(exponent_schemas(), kind); }

Grid make_grid(const GridSpec& spec) {
  try {
    if (spec.dim == 1) return Grid::line(spec.lo.at(0), spec.hi.at(0), spec.counts.at(0));
    return Grid::rect({spec.lo.at(0), spec.lo.at(1)}, {spec.hi.at(0), spec.hi.at(1)}, spec.counts.at(0),
                      spec.counts.at(1));
  } catch (const std::out_of_range&) {
    throw ConfigError("grid spec has too few entries");
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

SampledFunction make_function(const PresetSpec& spec, const Grid& grid) {
  const std::string& k = spec.kind;
  if (k == "table") {
    try {
      return SampledFunction(grid, table_values(spec, grid));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  const int dim = grid.dim();
  auto offset = [&](const Point& x) {
    return Point{x[0] - param(spec, "center"), dim == 2 ? x[1] - param(spec, "center1") : 0.0};
  };
  std::function<double(const Point&)> fn;
  if (k == "constant") {
    const double v = param(spec, "value");
    fn = [v](const Point&) { return v; };
  } else if (k == "indicator") {
    const double lo = param(spec, "lo"), hi = param(spec, "hi");
    fn = [=](const Point& x) {
      for (int a = 0; a < dim; ++a)
        if (x[a] < lo || x[a] > hi) return 0.0;
      return 1.0;
    };
  } else if (k == "ball" || k == "annulus") {
    const double inner = k == "ball" ? 0.0 : param(spec, "inner");
    const double outer = k == "ball" ? positive_param(spec, "radius") : param(spec, "outer");
    fn = [=](const Point& x) {
      const double r = std::hypot(x[0], x[1]);
      return r >= inner && r < outer ? 1.0 : 0.0;
    };
  } else if (k == "tent" || k == "pyramid") {
    const double w = positive_param(spec, "half_width"), height = param(spec, "height");
    const bool product = k == "tent";
    fn = [=](const Point& x) {
      const Point d = offset(x);
      if (product) {
        double v = height * std::max(0.0, 1.0 - std::abs(d[0]) / w);
        if (dim == 2) v *= std::max(0.0, 1.0 - std::abs(d[1]) / w);
        return v;
      }
      return height * std::max(0.0, 1.0 - std::max(std::abs(d[0]), std::abs(d[1])) / w);
    };
  } else if (k == "bump") {
    const double rad = positive_param(spec, "radius"), height = param(spec, "height");
    fn = [=](const Point& x) {
      const Point d = offset(x);
      const double s2 = (d[0] * d[0] + d[1] * d[1]) / (rad * rad);
      return s2 < 1.0 ? height * std::exp(1.0 - 1.0 / (1.0 - s2)) : 0.0;
    };
  } else if (k == "gaussian") {
    const double w = positive_param(spec, "width"), height = param(spec, "height");
    fn = [=](const Point& x) {
      const Point d = offset(x);
      return height * std::exp(-0.5 * (d[0] * d[0] + d[1] * d[1]) / (w * w));
    };
  } else if (k == "linear") {
    const double s = param(spec, "slope"), c = param(spec, "intercept");
    fn = [=](const Point& x) { return s * x[0] + c; };
  } else if (k == "sine") {
    const double amp = param(spec, "amplitude"), freq = param(spec, "frequency"), phase = param(spec, "phase");
    fn = [=](const Point& x) { return amp * std::sin(freq * x[0] + phase); };
  } else {
    throw ConfigError("unknown function kind '" + k + "'");
  }
  try {
    return SampledFunction::sample(grid, fn);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

VariableExponent make_exponent(const PresetSpec& spec, const Grid& grid) {
  const std::string& k = spec.kind;
  std::function<double(const Point&)> fn;
  if (k == "table") {
    try {
      return VariableExponent(grid, table_values(spec, grid));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (k == "constant") {
    const double v = param(spec, "value");
    fn = [v](const Point&) { return v; };
  } else if (k == "step") {
    const double lo = param(spec, "low"), hi = param(spec, "high"), t = param(spec, "threshold");
    fn = [=](const Point& x) { return x[0] < t ? lo : hi; };
  } else if (k == "smooth") {
    const double b = param(spec, "base"), a = param(spec, "amplitude"), w = param(spec, "frequency");
    fn = [=](const Point& x) { return b + a * std::sin(w * x[0]); };
  } else if (k == "linear") {
    const double c = param(spec, "intercept"), s = param(spec, "slope");
    fn = [=](const Point& x) { return c + s * x[0]; };
  } else {
    throw ConfigError("unknown exponent kind '" + k + "'");
  }
  try {
    return VariableExponent::sample(grid, fn);
  } catch (const Error& e) {
    throw ConfigError(std::string("exponent preset '") + k + "': " + e.what());
  }
}

Mollifier make_kernel(const std::string& kind, int dim) {
  if (kind == "gaussian") return Mollifier::gaussian(dim);
  if (kind == "tent") return Mollifier::tent(dim);
  if (kind == "box") return Mollifier::box(dim);
  throw ConfigError("unknown kernel '" + kind + "'");
}

Measure make_measure(const std::string& kind, const Grid& grid) {
  if (kind == "lebesgue") return Measure::lebesgue();
  if (kind == "normalized") return Measure::normalized(grid);
  throw ConfigError("unknown measure '" + kind + "'");
}

}  // namespace vexlp
