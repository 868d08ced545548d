#pragma once

// Non-homogeneous Herz norms
//   ||f|| = ||f||_{L^p(B(1))} + ( sum_{k=1..k_max} (2^{k alpha} ||f chi_k||_p)^q )^{1/q}
// with annuli C_k = B(2^k) \ B(2^{k-1}) taken by cell-centre membership.

#include <vector>

#include "vexlp/grid.hpp"
#include "vexlp/mollify.hpp"
#include "vexlp/report.hpp"

namespace vexlp {

struct HerzParams {
  double p = 2.0;
  double q = 2.0;
  double alpha = 0.0;
  int k_max = 1;
};

/// Throws unless p, q >= 1 (finite), k_max >= 1 and B(2^k_max) contains the
/// grid box.
void validate(const HerzParams& params, const Grid& grid);

/// Cell -> annulus index: 0 for |x| < 1, k for 2^{k-1} <= |x| < 2^k.
std::vector<int> annulus_index(const Grid& grid, int k_max);

/// ||f chi||_{L^p} for each annulus 0..k_max (0 being B(1)).
std::vector<double> annulus_norms(const SampledFunction& f, const HerzParams& params);

double herz_norm(const SampledFunction& f, const HerzParams& params);

/// Rows (sigma, herz_norm(phi_sigma * f - f)). Metadata carries the Herz error
/// of the stride-1 S1 network for the smallest sigma. Gaussian kernels only.
ExperimentReport herz_identity_convergence(const Mollifier& phi, const SampledFunction& f, const HerzParams& params,
                                           const std::vector<double>& sigmas);

}  // namespace vexlp
