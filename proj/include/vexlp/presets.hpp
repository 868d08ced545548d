#pragma once

// Named presets that turn config specs into grids, functions, exponents,
// kernels and measures.
//
// Functions (x = first coordinate, |x - c| Euclidean with c = (center, center1)):
//   constant   value
//   indicator  lo, hi              1 on [lo, hi]^dim
//   ball       radius              1 on |x| < radius
//   annulus    inner, outer        1 on inner <= |x| < outer
//   tent       center, center1, half_width, height
//                                  height * prod_a (1 - |x_a - c_a| / half_width)_+
//   pyramid    center, center1, half_width, height
//                                  height * (1 - max_a |x_a - c_a| / half_width)_+
//   bump       center, center1, radius, height
//                                  height * exp(1 - 1 / (1 - |x - c|^2 / radius^2)) inside
//   gaussian   center, center1, width, height
//   linear     slope, intercept
//   sine       amplitude, frequency, phase
//   table      values (one per cell, lexicographic)
// Exponents:
//   constant   value
//   step       low, high, threshold     low for x < threshold, else high
//   smooth     base, amplitude, frequency    base + amplitude sin(frequency x)
//   linear     intercept, slope
//   table      values (inf allowed)

#include <string>
#include <utility>
#include <vector>

#include "vexlp/config.hpp"
#include "vexlp/exponent.hpp"
#include "vexlp/grid.hpp"
#include "vexlp/mollify.hpp"

namespace vexlp {

struct PresetSchema {
  std::string kind;
  std::vector<std::pair<std::string, double>> params;  // name, default
  bool table = false;
};

const PresetSchema* find_function_schema(const std::string& kind);
const PresetSchema* find_exponent_schema(const std::string& kind);

Grid make_grid(const GridSpec& spec);
SampledFunction make_function(const PresetSpec& spec, const Grid& grid);
VariableExponent make_exponent(const PresetSpec& spec, const Grid& grid);
Mollifier make_kernel(const std::string& kind, int dim);
Measure make_measure(const std::string& kind, const Grid& grid);

}  // namespace vexlp
