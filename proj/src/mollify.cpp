#include "vexlp/mollify.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "vexlp/error.hpp"
#include "vexlp/parallel.hpp"

namespace vexlp {

namespace {

double gaussian_base(const Point& x, int dim) {
  const double r2 = x[0] * x[0] + (dim == 2 ? x[1] * x[1] : 0.0);
  const double norm = dim == 1 ? 1.0 / std::sqrt(2.0 * std::numbers::pi) : 1.0 / (2.0 * std::numbers::pi);
  return norm * std::exp(-0.5 * r2);
}

double tent_base(const Point& x, int dim) {
  double v = std::max(0.0, 1.0 - std::abs(x[0]));
  if (dim == 2) v *= std::max(0.0, 1.0 - std::abs(x[1]));
  return v;
}

double box_base(const Point& x, int dim) {
  if (std::abs(x[0]) > 0.5) return 0.0;
  if (dim == 2 && std::abs(x[1]) > 0.5) return 0.0;
  return 1.0;
}

void check_dim(int dim) {
  if (dim != 1 && dim != 2) throw Error("kernel dimension must be 1 or 2");
}

}  // namespace

Mollifier Mollifier::gaussian(int dim) {
  check_dim(dim);
  return Mollifier(KernelKind::gaussian, dim);
}

Mollifier Mollifier::tent(int dim) {
  check_dim(dim);
  return Mollifier(KernelKind::tent, dim);
}

Mollifier Mollifier::box(int dim) {
  check_dim(dim);
  return Mollifier(KernelKind::box, dim);
}

Mollifier Mollifier::table(SampledFunction samples) {
  const double mass = integrate(samples, Measure::lebesgue());
  if (std::abs(mass - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "table kernel integrates to " << mass << ", expected 1 within 1e-8";
    throw Error(msg.str());
  }
  Mollifier m(KernelKind::table, samples.grid().dim());
  m.integral_ = mass;
  m.samples_ = std::move(samples);
  return m;
}

std::string Mollifier::name() const {
  switch (kind_) {
    case KernelKind::gaussian: return "gaussian";
    case KernelKind::tent: return "tent";
    case KernelKind::box: return "box";
    case KernelKind::table: return "table";
  }
  return "unknown";
}

double Mollifier::operator()(const Point& x) const {
  if (kind_ == KernelKind::table) return samples_->interpolate(x);
  const Point u{x[0] / sigma_, dim_ == 2 ? x[1] / sigma_ : 0.0};
  const double scale = dim_ == 1 ? 1.0 / sigma_ : 1.0 / (sigma_ * sigma_);
  switch (kind_) {
    case KernelKind::gaussian: return scale * gaussian_base(u, dim_);
    case KernelKind::tent: return scale * tent_base(u, dim_);
    case KernelKind::box: return scale * box_base(u, dim_);
    case KernelKind::table: break;
  }
  return 0.0;
}

double Mollifier::support_radius() const {
  switch (kind_) {
    case KernelKind::gaussian: return kGaussianTruncation * sigma_;
    case KernelKind::tent: return sigma_;
    case KernelKind::box: return 0.5 * sigma_;
    case KernelKind::table: {
      const Grid& g = samples_->grid();
      double r = 0.0;
      for (int a = 0; a < g.dim(); ++a) r = std::max({r, std::abs(g.lo(a)), std::abs(g.hi(a))});
      return r;
    }
  }
  return 0.0;
}

Mollifier dilate(const Mollifier& phi, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error("dilation sigma must be positive");
  Mollifier out = phi;
  out.sigma_ = phi.sigma_ * sigma;
  if (phi.kind_ == KernelKind::table) {
    const Grid& g = phi.samples_->grid();
    const Grid scaled(g.dim(), {g.lo(0) * sigma, g.lo(1) * sigma}, {g.hi(0) * sigma, g.hi(1) * sigma},
                      {g.count(0), g.count(1)});
    const double amp = g.dim() == 1 ? 1.0 / sigma : 1.0 / (sigma * sigma);
    std::vector<double> v(phi.samples_->values().begin(), phi.samples_->values().end());
    for (double& x : v) x *= amp;
    out.samples_ = SampledFunction(scaled, std::move(v));
    out.integral_ = integrate(*out.samples_, Measure::lebesgue());
  }
  return out;
}

namespace {

// Kernel values at whole-cell offsets m with |m_a h_a| <= support, clipped to
// offsets that can reach another cell of the grid.
struct OffsetKernel {
  std::array<std::size_t, 2> radius{0, 0};
  std::array<std::size_t, 2> width{1, 1};
  std::vector<double> values;  // index (m0 + r0) + width0 * (m1 + r1)

  OffsetKernel(const Mollifier& phi, const Grid& grid) {
    if (phi.dim() != grid.dim()) throw Error("kernel and grid dimensions differ");
    const double support = phi.support_radius();
    for (int a = 0; a < grid.dim(); ++a) {
      const double cells = std::floor(support / grid.spacing(a));
      radius[a] = static_cast<std::size_t>(std::min(cells, static_cast<double>(grid.count(a) - 1)));
      width[a] = 2 * radius[a] + 1;
    }
    values.resize(width[0] * width[1]);
    for (std::size_t k1 = 0; k1 < width[1]; ++k1) {
      const double y = (static_cast<double>(k1) - static_cast<double>(radius[1])) * grid.spacing(1);
      for (std::size_t k0 = 0; k0 < width[0]; ++k0) {
        const double x = (static_cast<double>(k0) - static_cast<double>(radius[0])) * grid.spacing(0);
        values[k0 + width[0] * k1] = phi({x, grid.dim() == 2 ? y : 0.0});
      }
    }
  }
};

SampledFunction convolve_direct(const OffsetKernel& k, const SampledFunction& f) {
  const Grid& g = f.grid();
  const auto fv = f.values();
  const std::ptrdiff_t n0 = static_cast<std::ptrdiff_t>(g.count(0));
  const std::ptrdiff_t n1 = static_cast<std::ptrdiff_t>(g.count(1));
  const std::ptrdiff_t r0 = static_cast<std::ptrdiff_t>(k.radius[0]);
  const std::ptrdiff_t r1 = static_cast<std::ptrdiff_t>(k.radius[1]);
  const std::ptrdiff_t w0 = static_cast<std::ptrdiff_t>(k.width[0]);
  const double cell = g.cell_volume();
  std::vector<double> out(g.size());
  for (std::ptrdiff_t i1 = 0; i1 < n1; ++i1) {
    const std::ptrdiff_t m1_lo = std::max(-r1, i1 - (n1 - 1));
    const std::ptrdiff_t m1_hi = std::min(r1, i1);
    for (std::ptrdiff_t i0 = 0; i0 < n0; ++i0) {
      const std::ptrdiff_t m0_lo = std::max(-r0, i0 - (n0 - 1));
      const std::ptrdiff_t m0_hi = std::min(r0, i0);
      double s = 0.0;
      for (std::ptrdiff_t m1 = m1_lo; m1 <= m1_hi; ++m1) {
        const double* krow = k.values.data() + (m1 + r1) * w0 + r0;
        const double* frow = fv.data() + (i1 - m1) * n0 + i0;
        for (std::ptrdiff_t m0 = m0_lo; m0 <= m0_hi; ++m0) s += krow[m0] * frow[-m0];
      }
      out[static_cast<std::size_t>(i0 + n0 * i1)] = s * cell;
    }
  }
  return SampledFunction(g, std::move(out));
}

// FFTW's planner is not re-entrant; execution on distinct arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    if (!ptr) throw Error("fftw allocation failed");
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

SampledFunction convolve_fft(const OffsetKernel& k, const SampledFunction& f) {
  const Grid& g = f.grid();
  const std::size_t n0 = g.count(0), n1 = g.count(1);
  const std::size_t l0 = n0 + 2 * k.radius[0];
  const std::size_t l1 = n1 + 2 * k.radius[1];
  const std::size_t lc = l0 / 2 + 1;
  const std::size_t real_size = l0 * l1;
  const std::size_t complex_size = lc * l1;

  FftwBuffer a_buf(sizeof(double) * real_size), b_buf(sizeof(double) * real_size);
  FftwBuffer fa_buf(sizeof(fftw_complex) * complex_size), fb_buf(sizeof(fftw_complex) * complex_size);
  auto* a = static_cast<double*>(a_buf.ptr);
  auto* b = static_cast<double*>(b_buf.ptr);
  auto* fa = static_cast<fftw_complex*>(fa_buf.ptr);
  auto* fb = static_cast<fftw_complex*>(fb_buf.ptr);

  fftw_plan fwd_a, fwd_b, inv;
  {
    std::lock_guard lock(fftw_planner_mutex());
    const int rank = g.dim();
    const int dims[2] = {static_cast<int>(l1), static_cast<int>(l0)};
    const int* d = rank == 1 ? dims + 1 : dims;
    fwd_a = fftw_plan_dft_r2c(rank, d, a, fa, FFTW_ESTIMATE);
    fwd_b = fftw_plan_dft_r2c(rank, d, b, fb, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r(rank, d, fa, a, FFTW_ESTIMATE);
  }

  std::fill(a, a + real_size, 0.0);
  std::fill(b, b + real_size, 0.0);
  const auto fv = f.values();
  for (std::size_t i1 = 0; i1 < n1; ++i1)
    for (std::size_t i0 = 0; i0 < n0; ++i0) a[i0 + l0 * i1] = fv[i0 + n0 * i1];
  for (std::size_t k1 = 0; k1 < k.width[1]; ++k1)
    for (std::size_t k0 = 0; k0 < k.width[0]; ++k0) b[k0 + l0 * k1] = k.values[k0 + k.width[0] * k1];

  fftw_execute(fwd_a);
  fftw_execute(fwd_b);
  for (std::size_t i = 0; i < complex_size; ++i) {
    const double re = fa[i][0] * fb[i][0] - fa[i][1] * fb[i][1];
    const double im = fa[i][0] * fb[i][1] + fa[i][1] * fb[i][0];
    fa[i][0] = re;
    fa[i][1] = im;
  }
  fftw_execute(inv);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_a);
    fftw_destroy_plan(fwd_b);
    fftw_destroy_plan(inv);
  }

  const double scale = g.cell_volume() / static_cast<double>(real_size);
  std::vector<double> out(g.size());
  for (std::size_t i1 = 0; i1 < n1; ++i1)
    for (std::size_t i0 = 0; i0 < n0; ++i0)
      out[i0 + n0 * i1] = a[(i0 + k.radius[0]) + l0 * (i1 + k.radius[1])] * scale;
  return SampledFunction(g, std::move(out));
}

}  // namespace

SampledFunction convolve(const Mollifier& phi, const SampledFunction& f, ConvolutionMethod method) {
  const OffsetKernel kernel(phi, f.grid());
  if (method == ConvolutionMethod::automatic)
    method = f.size() > kFftCellThreshold ? ConvolutionMethod::fft : ConvolutionMethod::direct;
  return method == ConvolutionMethod::fft ? convolve_fft(kernel, f) : convolve_direct(kernel, f);
}

ExperimentReport identity_convergence(const Mollifier& phi, const SampledFunction& f, const VariableExponent& p,
                                      const Measure& mu, const std::vector<double>& sigmas, double tol) {
  if (extremes(p).p_plus == kInfiniteExponent) throw Error("identity convergence needs p+ < inf");
  for (std::size_t i = 1; i < sigmas.size(); ++i)
    if (!(sigmas[i] < sigmas[i - 1])) throw Error("sigmas must be strictly decreasing");
  const auto errors = parallel_map<double>(sigmas.size(), [&](std::size_t i) {
    const SampledFunction smooth = convolve(dilate(phi, sigmas[i]), f);
    return luxemburg_norm(sub(smooth, f), p, mu, tol).norm;
  });
  ExperimentReport report("identity_convergence", {{"sigma", ""}, {"error", ""}});
  for (std::size_t i = 0; i < sigmas.size(); ++i) report.add_row({sigmas[i], errors[i]});
  report.set_meta("kernel", phi.name());
  return report;
}

namespace {

// Largest k >= 0 with k * h < r, or -1 when r <= 0.
std::ptrdiff_t cells_strictly_inside(double r, double h) {
  if (!(r > 0.0)) return -1;
  auto k = static_cast<std::ptrdiff_t>(std::ceil(r / h)) - 1;
  while (k >= 0 && static_cast<double>(k) * h >= r) --k;
  while (static_cast<double>(k + 1) * h < r) ++k;
  return k;
}

}  // namespace

SampledFunction maximal(const SampledFunction& f, const std::vector<double>& radii) {
  if (radii.empty()) throw Error("maximal operator needs at least one radius");
  for (double r : radii)
    if (!(r > 0.0) || !std::isfinite(r)) throw Error("maximal operator radii must be positive");
  const Grid& g = f.grid();
  const std::size_t n0 = g.count(0), n1 = g.count(1);
  const double h0 = g.spacing(0), h1 = g.spacing(1);
  const double cell = g.cell_volume();

  // Row-wise prefix sums of |f| * cell volume.
  std::vector<double> prefix((n0 + 1) * n1, 0.0);
  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    double s = 0.0;
    for (std::size_t i0 = 0; i0 < n0; ++i0) {
      s += std::abs(f[g.index(i0, i1)]) * cell;
      prefix[(n0 + 1) * i1 + i0 + 1] = s;
    }
  }
  auto row_sum = [&](std::size_t i1, std::ptrdiff_t a, std::ptrdiff_t b) {  // cells a..b inclusive
    a = std::max<std::ptrdiff_t>(a, 0);
    b = std::min<std::ptrdiff_t>(b, static_cast<std::ptrdiff_t>(n0) - 1);
    if (a > b) return 0.0;
    const double* row = prefix.data() + (n0 + 1) * i1;
    return row[b + 1] - row[a];
  };

  std::vector<double> best(g.size(), 0.0);
  std::vector<std::ptrdiff_t> half_width;
  for (double r : radii) {
    const double norm = g.dim() == 1 ? 1.0 / r : 1.0 / (r * r);
    if (g.dim() == 1) {
      const std::ptrdiff_t k = cells_strictly_inside(r, h0);
      for (std::size_t i0 = 0; i0 < n0; ++i0) {
        const auto c = static_cast<std::ptrdiff_t>(i0);
        best[i0] = std::max(best[i0], row_sum(0, c - k, c + k) * norm);
      }
      continue;
    }
    // Half-widths of the cell-centre disc per row offset.
    const std::ptrdiff_t ky = std::min<std::ptrdiff_t>(cells_strictly_inside(r, h1), static_cast<std::ptrdiff_t>(n1));
    half_width.assign(static_cast<std::size_t>(2 * ky + 1), -1);
    for (std::ptrdiff_t dy = -ky; dy <= ky; ++dy) {
      const double y = static_cast<double>(dy) * h1;
      const double rem = r * r - y * y;
      half_width[static_cast<std::size_t>(dy + ky)] = rem > 0.0 ? cells_strictly_inside(std::sqrt(rem), h0) : -1;
    }
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
      for (std::size_t i0 = 0; i0 < n0; ++i0) {
        double mass = 0.0;
        const auto c0 = static_cast<std::ptrdiff_t>(i0);
        for (std::ptrdiff_t dy = -ky; dy <= ky; ++dy) {
          const std::ptrdiff_t row = static_cast<std::ptrdiff_t>(i1) + dy;
          if (row < 0 || row >= static_cast<std::ptrdiff_t>(n1)) continue;
          const std::ptrdiff_t kx = half_width[static_cast<std::size_t>(dy + ky)];
          if (kx < 0) continue;
          mass += row_sum(static_cast<std::size_t>(row), c0 - kx, c0 + kx);
        }
        const std::size_t idx = g.index(i0, i1);
        best[idx] = std::max(best[idx], mass * norm);
      }
    }
  }
  return SampledFunction(g, std::move(best));
}

std::vector<double> radius_ladder(const Grid& grid, double ratio) {
  if (!(ratio > 1.0)) throw Error("radius ladder ratio must exceed 1");
  const double h = grid.min_spacing();
  const double diam = grid.diameter();
  std::vector<double> radii;
  auto push_snapped = [&](double r) {
    const double m = std::max(0.0, std::round(r / h - 0.5));
    const double snapped = (m + 0.5) * h;
    if (radii.empty() || snapped > radii.back()) radii.push_back(snapped);
  };
  for (double r = 0.5 * h; r < diam; r *= ratio) push_snapped(r);
  push_snapped(diam + 0.5 * h);
  return radii;
}

RBMajorant::RBMajorant(int dim, std::vector<double> radii, std::vector<double> profile)
    : dim_(dim), radii_(std::move(radii)), profile_(std::move(profile)) {
  check_dim(dim);
  if (radii_.size() < 2 || radii_.size() != profile_.size())
    throw Error("majorant needs matching radius and profile tables of length >= 2");
  if (radii_.front() != 0.0) throw Error("majorant radius table must start at 0");
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    if (!std::isfinite(profile_[i]) || profile_[i] < 0.0) throw Error("majorant profile must be finite and >= 0");
    if (i > 0 && !(radii_[i] > radii_[i - 1])) throw Error("majorant radii must be strictly increasing");
    if (i > 0 && profile_[i] > profile_[i - 1]) throw Error("majorant profile must be non-increasing");
  }
  CompensatedSum mass;
  for (std::size_t i = 0; i + 1 < radii_.size(); ++i) {
    const double a = radii_[i], b = radii_[i + 1];
    const double shell = dim_ == 1 ? 2.0 * (b - a) : std::numbers::pi * (b * b - a * a);
    mass.add(profile_[i] * shell);
  }
  l1_mass_ = mass.value();
}

RBMajorant RBMajorant::from_profile(int dim, const std::function<double(double)>& profile, double r_max,
                                    std::size_t count) {
  if (count < 2 || !(r_max > 0.0)) throw Error("majorant table needs count >= 2 and r_max > 0");
  std::vector<double> r(count), v(count);
  for (std::size_t i = 0; i < count; ++i) {
    r[i] = r_max * static_cast<double>(i) / static_cast<double>(count - 1);
    v[i] = profile(r[i]);
  }
  return RBMajorant(dim, std::move(r), std::move(v));
}

RBMajorant RBMajorant::least_for(const Mollifier& phi, std::size_t count) {
  if (count < 2) throw Error("majorant table needs count >= 2");
  const double r_max = phi.support_radius() * (phi.dim() == 2 ? std::numbers::sqrt2 : 1.0);
  constexpr std::size_t kAngles = 256;
  std::vector<double> r(count), v(count);
  for (std::size_t i = 0; i < count; ++i) {
    r[i] = r_max * static_cast<double>(i) / static_cast<double>(count - 1);
    double m = 0.0;
    if (phi.dim() == 1) {
      m = std::max(std::abs(phi({r[i], 0.0})), std::abs(phi({-r[i], 0.0})));
    } else {
      for (std::size_t a = 0; a < kAngles; ++a) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(a) / kAngles;
        m = std::max(m, std::abs(phi({r[i] * std::cos(t), r[i] * std::sin(t)})));
      }
    }
    v[i] = m;
  }
  for (std::size_t i = count - 1; i-- > 0;) v[i] = std::max(v[i], v[i + 1]);
  return RBMajorant(phi.dim(), std::move(r), std::move(v));
}

double RBMajorant::operator()(double r) const {
  if (r < 0.0) r = -r;
  if (r > radii_.back()) return 0.0;
  const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
  return profile_[static_cast<std::size_t>(it - radii_.begin()) - 1];
}

namespace {

void verify_majorant(const Mollifier& phi, const RBMajorant& majorant) {
  if (phi.dim() != majorant.dim()) throw Error("majorant and kernel dimensions differ");
  Grid sample_grid = phi.kind() == KernelKind::table
                         ? phi.samples()->grid()
                         : [&] {
                             const double s = phi.support_radius();
                             return phi.dim() == 1 ? Grid::line(-s, s, 2001) : Grid::rect({-s, -s}, {s, s}, 201, 201);
                           }();
  for (std::size_t i = 0; i < sample_grid.size(); ++i) {
    const Point x = sample_grid.center(i);
    const double value = std::abs(phi(x));
    const double bound = majorant(std::hypot(x[0], x[1]));
    if (value > bound * (1.0 + 1e-12) + 1e-300) {
      std::ostringstream msg;
      msg << "majorant violated at x = (" << x[0];
      if (phi.dim() == 2) msg << ", " << x[1];
      msg << "): |phi| = " << value << " > Phi = " << bound;
      throw Error(msg.str());
    }
  }
}

}  // namespace

ExperimentReport rb_domination_check(const Mollifier& phi, const RBMajorant& majorant, const SampledFunction& f,
                                     const std::vector<double>& sigmas, std::vector<double> radii) {
  verify_majorant(phi, majorant);
  if (sigmas.empty()) throw Error("domination check needs at least one sigma");
  const Grid& g = f.grid();
  if (radii.empty()) radii = radius_ladder(g);

  const auto smoothed = parallel_map<std::vector<double>>(sigmas.size(), [&](std::size_t i) {
    const SampledFunction c = convolve(dilate(phi, sigmas[i]), f);
    return std::vector<double>(c.values().begin(), c.values().end());
  });
  std::vector<double> sup_conv(g.size(), 0.0);
  for (const auto& c : smoothed)
    for (std::size_t i = 0; i < g.size(); ++i) sup_conv[i] = std::max(sup_conv[i], std::abs(c[i]));
  const SampledFunction mf = maximal(f, radii);

  std::vector<Column> cols{{"x0", ""}};
  if (g.dim() == 2) cols.push_back({"x1", ""});
  cols.insert(cols.end(), {{"sup_conv", ""}, {"maximal", ""}, {"ratio", ""}});
  ExperimentReport report("rb_domination", cols);
  double max_ratio = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(mf[i] > 1e-12)) continue;
    const Point x = g.center(i);
    const double ratio = sup_conv[i] / mf[i];
    max_ratio = std::max(max_ratio, ratio);
    std::vector<double> row{x[0]};
    if (g.dim() == 2) row.push_back(x[1]);
    row.insert(row.end(), {sup_conv[i], mf[i], ratio});
    report.add_row(std::move(row));
  }
  report.set_meta("kernel", phi.name());
  report.set_meta("max_ratio", max_ratio);
  report.set_meta("l1_mass", majorant.l1_mass());
  return report;
}

}  // namespace vexlp
