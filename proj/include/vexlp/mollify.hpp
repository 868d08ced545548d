#pragma once

// Approximate identities phi_sigma(x) = sigma^-n phi(x / sigma), grid
// convolution, the (r^-n normalised) maximal operator and the RB-class
// domination check sup_sigma |phi_sigma * f| <= C Mf.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vexlp/exponent.hpp"
#include "vexlp/grid.hpp"
#include "vexlp/norm.hpp"
#include "vexlp/report.hpp"

namespace vexlp {

enum class KernelKind { gaussian, tent, box, table };

/// Gaussian support is truncated here (in units of sigma, per axis); the tail
/// mass beyond it is below 1e-14.
inline constexpr double kGaussianTruncation = 8.0;

/// A unit-integral kernel. Named kinds are closed forms:
///   gaussian  (2 pi)^(-n/2) exp(-|x|^2 / 2)
///   tent      (1 - |x|)_+            (product over axes in 2D)
///   box       1 on |x|_inf <= 1/2
/// table kernels interpolate a sampled function and must integrate to 1
/// within 1e-8 under midpoint quadrature.
class Mollifier {
 public:
  static Mollifier gaussian(int dim);
  static Mollifier tent(int dim);
  static Mollifier box(int dim);
  static Mollifier table(SampledFunction samples);

  KernelKind kind() const { return kind_; }
  int dim() const { return dim_; }
  /// Accumulated dilation factor (1 for an undilated kernel).
  double sigma() const { return sigma_; }
  double integral() const { return integral_; }
  std::string name() const;

  double operator()(const Point& x) const;

  /// Per-axis half-width outside of which the kernel is zero (or, for the
  /// gaussian, treated as zero).
  double support_radius() const;

  const std::optional<SampledFunction>& samples() const { return samples_; }

 private:
  Mollifier(KernelKind kind, int dim) : kind_(kind), dim_(dim) {}
  friend Mollifier dilate(const Mollifier& phi, double sigma);

  KernelKind kind_;
  int dim_;
  double sigma_ = 1.0;
  double integral_ = 1.0;
  std::optional<SampledFunction> samples_;
};

/// phi_sigma(x) = sigma^-n phi(x / sigma). Table kernels are resampled onto
/// the sigma-scaled grid.
Mollifier dilate(const Mollifier& phi, double sigma);

enum class ConvolutionMethod { automatic, direct, fft };

/// Grids above this many cells take the FFT path under automatic.
inline constexpr std::size_t kFftCellThreshold = std::size_t{1} << 14;

/// (phi * f)(x_i) = sum_j phi(x_i - x_j) f(x_j) h^n on f's grid, f extended by
/// zero outside its box. The direct path sums kernel offsets in a fixed
/// order, so a whole-cell shift of f shifts the result bit for bit.
SampledFunction convolve(const Mollifier& phi, const SampledFunction& f,
                         ConvolutionMethod method = ConvolutionMethod::automatic);

/// Rows (sigma, ||phi_sigma * f - f||_p) for each sigma.
ExperimentReport identity_convergence(const Mollifier& phi, const SampledFunction& f, const VariableExponent& p,
                                      const Measure& mu, const std::vector<double>& sigmas,
                                      double tol = kDefaultNormTol);

/// Mf(x) = max over the given radii of r^-n * integral over {|y - x| < r} of
/// |f|, with cells counted by centre and f zero outside the box.
SampledFunction maximal(const SampledFunction& f, const std::vector<double>& radii);

/// Geometric radii from h/2 to the box diameter, each snapped to an odd
/// multiple of h/2 (the radius whose cell-centre ball has exact length 2r in
/// 1D) and deduplicated.
std::vector<double> radius_ladder(const Grid& grid, double ratio = 1.25);

/// Radial non-increasing majorant Phi(|x|) of a kernel, stored as a right-
/// continuous step profile on an ascending radius table starting at 0. A step
/// profile dominates any non-increasing function it was sampled from.
class RBMajorant {
 public:
  RBMajorant(int dim, std::vector<double> radii, std::vector<double> profile);

  /// Samples profile(r) at count evenly spaced radii in [0, r_max].
  static RBMajorant from_profile(int dim, const std::function<double(double)>& profile, double r_max,
                                 std::size_t count);
  /// Least radial non-increasing majorant of |phi|, from a ray scan.
  static RBMajorant least_for(const Mollifier& phi, std::size_t count = 4096);

  int dim() const { return dim_; }
  double operator()(double r) const;
  /// Integral of Phi(|x|) over R^n.
  double l1_mass() const { return l1_mass_; }
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& profile() const { return profile_; }

 private:
  int dim_;
  std::vector<double> radii_;
  std::vector<double> profile_;
  double l1_mass_ = 0.0;
};

/// Verifies |phi| <= Phi on the kernel's sample grid, then reports per cell
/// (x, sup_sigma |phi_sigma * f|, Mf, ratio) wherever Mf > 1e-12. Metadata
/// carries max_ratio and l1_mass. radii defaults to radius_ladder(grid).
ExperimentReport rb_domination_check(const Mollifier& phi, const RBMajorant& majorant, const SampledFunction& f,
                                     const std::vector<double>& sigmas, std::vector<double> radii = {});

}  // namespace vexlp
