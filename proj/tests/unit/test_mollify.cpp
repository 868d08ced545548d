#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vexlp/error.hpp"
#include "vexlp/mollify.hpp"
#include "vexlp/random.hpp"

using namespace vexlp;

namespace {

std::vector<Mollifier> kernels(int dim) { return {Mollifier::gaussian(dim), Mollifier::tent(dim), Mollifier::box(dim)}; }

double max_abs_diff(const SampledFunction& a, const SampledFunction& b) { return sub(a, b).max_abs(); }

// Lebesgue measure of (x - r, x + r) intersected with [-1, 1].
double overlap(double x, double r) { return std::max(0.0, std::min(x + r, 1.0) - std::max(x - r, -1.0)); }

}  // namespace

TEST_CASE("dilation") {
  const Mollifier g = Mollifier::gaussian(1);
  const Mollifier same = dilate(g, 1.0);
  for (double x : {-2.0, 0.0, 0.3, 5.0}) CHECK(same({x, 0.0}) == g({x, 0.0}));
  CHECK(dilate(g, 2.0)({0.0, 0.0}) == doctest::Approx(0.5 * g({0.0, 0.0})).epsilon(1e-15));
  CHECK_THROWS_AS(dilate(g, 0.0), Error);
  CHECK_THROWS_AS(dilate(g, -1.0), Error);
}

TEST_CASE("dilated kernels keep unit mass") {
  for (int dim : {1, 2}) {
    for (const Mollifier& phi : kernels(dim)) {
      for (double sigma : {0.1, 0.7, 3.0}) {
        const Mollifier k = dilate(phi, sigma);
        const double half = 8.0 * sigma;
        const std::size_t n = dim == 1 ? 160000 : 1600;
        const Grid box = dim == 1 ? Grid::line(-half, half, n) : Grid::rect({-half, -half}, {half, half}, n, n);
        const double mass = integrate(SampledFunction::sample(box, [&](const Point& x) { return k(x); }),
                                      Measure::lebesgue());
        CHECK_MESSAGE(mass == doctest::Approx(1.0).epsilon(1e-6), phi.name() << " dim " << dim << " sigma " << sigma);
      }
    }
  }
}

TEST_CASE("table kernels") {
  const Grid g = Grid::line(-1.0, 1.0, 400);
  const auto tent = SampledFunction::sample(g, [](const Point& x) { return std::max(0.0, 1.0 - std::abs(x[0])); });
  const Mollifier t = Mollifier::table(tent);
  CHECK(t.integral() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(t({0.3, 0.0}) == doctest::Approx(0.7).epsilon(1e-3));
  const Mollifier wide = dilate(t, 2.0);
  CHECK(wide.integral() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(wide({0.6, 0.0}) == doctest::Approx(0.35).epsilon(1e-3));
  CHECK_THROWS_AS(Mollifier::table(scale(tent, 2.0)), Error);
}

TEST_CASE("single-cell box kernel is the identity") {
  Rng rng(1);
  const Grid g = Grid::line(0.0, 1.0, 100);
  const auto f = random_function(g, rng);
  const auto out = convolve(dilate(Mollifier::box(1), g.spacing(0)), f, ConvolutionMethod::direct);
  CHECK(max_abs_diff(out, f) <= 1e-12 * f.max_abs());
}

TEST_CASE("constants are reproduced away from the boundary") {
  const Grid g = Grid::line(-10.0, 10.0, 4000);
  const auto one = SampledFunction::constant(g, 1.0);
  const auto out = convolve(dilate(Mollifier::gaussian(1), 0.5), one);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g.center(i)[0]) < 5.0) CHECK(out[i] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("gaussian against indicator matches the erf formula") {
  const Grid g = Grid::line(-1.0, 2.0, 3000);
  const auto chi = SampledFunction::sample(g, [](const Point& x) { return x[0] >= 0.0 && x[0] <= 1.0 ? 1.0 : 0.0; });
  const double sigma = 0.1;
  const auto out = convolve(dilate(Mollifier::gaussian(1), sigma), chi);
  for (double x : {0.5, 0.05, 0.95, 1.1, -0.2}) {
    const double exact =
        0.5 * (std::erf((1.0 - x) / (sigma * std::numbers::sqrt2)) + std::erf(x / (sigma * std::numbers::sqrt2)));
    CHECK(out.interpolate({x, 0.0}) == doctest::Approx(exact).epsilon(1e-4));
  }
  CHECK(out[g.nearest_cell({0.5, 0.0})] == doctest::Approx(0.99999994).epsilon(1e-4));
}

TEST_CASE("direct and FFT paths agree") {
  Rng rng(2);
  const Grid g1 = Grid::line(-2.0, 2.0, 3001);
  const Grid g2 = Grid::rect({-1.0, -1.5}, {1.0, 1.5}, 70, 90);
  for (const Grid& g : {g1, g2}) {
    const auto f = random_function(g, rng);
    for (const Mollifier& phi : kernels(g.dim())) {
      for (double sigma : {0.05, 0.3}) {
        const Mollifier k = dilate(phi, sigma);
        const auto a = convolve(k, f, ConvolutionMethod::direct);
        const auto b = convolve(k, f, ConvolutionMethod::fft);
        CHECK(max_abs_diff(a, b) <= 1e-10 * std::max(1.0, a.max_abs()));
      }
    }
  }
}

TEST_CASE("convolution properties") {
  const Grid g = Grid::line(-5.0, 5.0, 2000);
  const auto bump = [](double c) {
    return [c](const Point& x) { return std::max(0.0, 1.0 - 4.0 * (x[0] - c) * (x[0] - c)); };
  };
  const auto f = SampledFunction::sample(g, bump(0.0));
  const Mollifier k = dilate(Mollifier::gaussian(1), 0.1);

  SUBCASE("mass conservation") {
    const double before = integrate(f, Measure::lebesgue());
    CHECK(integrate(convolve(k, f), Measure::lebesgue()) == doctest::Approx(before).epsilon(1e-6));
  }
  SUBCASE("positivity") {
    for (const Mollifier& phi : kernels(1)) {
      const auto out = convolve(dilate(phi, 0.2), f);
      for (double v : out.values()) CHECK(v >= 0.0);
    }
  }
  SUBCASE("whole-cell shifts commute exactly") {
    const std::size_t shift = 37;
    std::vector<double> moved(g.size(), 0.0);
    for (std::size_t i = shift; i < g.size(); ++i) moved[i] = f[i - shift];
    const auto a = convolve(k, f, ConvolutionMethod::direct);
    const auto b = convolve(k, SampledFunction(g, moved), ConvolutionMethod::direct);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.center(i)[0];
      if (x > -3.0 && x < 3.0) REQUIRE(b[i + shift] == a[i]);
    }
  }
}

TEST_CASE("identity convergence") {
  const Grid g = Grid::line(-0.5, 1.5, 2000);
  const auto tent = SampledFunction::sample(g, [](const Point& x) { return std::max(0.0, 1.0 - 2.0 * std::abs(x[0] - 0.5)); });
  const std::vector<double> sigmas{0.4, 0.2, 0.1, 0.05};

  const auto zero = identity_convergence(Mollifier::gaussian(1), SampledFunction::zeros(g),
                                         VariableExponent::constant(g, 2.0), Measure::lebesgue(), sigmas);
  for (double e : zero.column("error")) CHECK(e == 0.0);

  const auto r = identity_convergence(Mollifier::gaussian(1), tent, VariableExponent::constant(g, 2.0),
                                      Measure::lebesgue(), sigmas);
  const auto err = r.column("error");
  for (std::size_t i = 1; i < err.size(); ++i) CHECK(err[i] < err[i - 1]);

  const auto smooth = VariableExponent::sample(g, [](const Point& x) { return 2.0 + x[0]; });
  std::vector<double> fine{0.4, 0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625};
  const auto e2 = identity_convergence(Mollifier::gaussian(1), tent, smooth, Measure::lebesgue(), fine).column("error");
  CHECK(e2.back() < 0.02 * e2.front());

  CHECK_THROWS_AS(identity_convergence(Mollifier::gaussian(1), tent, smooth, Measure::lebesgue(), {0.1, 0.2}), Error);
  CHECK_THROWS_AS(identity_convergence(Mollifier::gaussian(1), tent, VariableExponent::constant(g, kInfiniteExponent),
                                       Measure::lebesgue(), sigmas),
                  Error);
}

TEST_CASE("radius ladder") {
  const Grid g = Grid::line(-4.0, 4.0, 800);
  const auto radii = radius_ladder(g);
  const double h = g.spacing(0);
  CHECK(radii.front() == doctest::Approx(0.5 * h));
  CHECK(radii.back() >= g.diameter());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double m = radii[i] / h - 0.5;
    CHECK(m == doctest::Approx(std::round(m)).epsilon(1e-9));
    if (i > 0) {
      CHECK(radii[i] > radii[i - 1]);
      // Consecutive rungs never step by more than the ratio plus one cell.
      CHECK(radii[i] <= 1.25 * radii[i - 1] + h);
    }
  }
  CHECK_THROWS_AS(radius_ladder(g, 1.0), Error);
}

TEST_CASE("maximal operator") {
  const Grid g = Grid::line(-4.0, 4.0, 1600);
  const double h = g.spacing(0);
  CHECK(maximal(SampledFunction::zeros(g), radius_ladder(g)).max_abs() == 0.0);
  CHECK_THROWS_AS(maximal(SampledFunction::zeros(g), {}), Error);
  CHECK_THROWS_AS(maximal(SampledFunction::zeros(g), {0.1, -1.0}), Error);

  const auto chi = SampledFunction::sample(g, [](const Point& x) { return std::abs(x[0]) <= 1.0 ? 1.0 : 0.0; });
  // Oracle: dense scan of the continuous profile r -> |B(x, r) & [-1, 1]| / r.
  auto profile_max = [](double x) {
    double best = 0.0;
    for (double r = 1e-4; r < 20.0; r += 1e-4) best = std::max(best, overlap(x, r) / r);
    return best;
  };
  CHECK(profile_max(0.0) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(profile_max(3.0) == doctest::Approx(0.5).epsilon(1e-3));

  const auto m = maximal(chi, radius_ladder(g));
  CHECK(std::abs(m[g.nearest_cell({0.0, 0.0})] - 2.0) <= 2.0 * h);
  const auto dense = maximal(chi, radius_ladder(g, 1.01));
  CHECK(std::abs(dense[g.nearest_cell({3.0, 0.0})] - 0.5) <= 0.02);
  CHECK(std::abs(dense[g.nearest_cell({0.0, 0.0})] - 2.0) <= 2.0 * h);
}

TEST_CASE("maximal operator against brute force") {
  Rng rng(4);
  const Grid g = Grid::rect({-1.0, -1.0}, {1.0, 1.0}, 14, 11);
  const auto f = random_function(g, rng);
  const std::vector<double> radii{0.05, 0.2, 0.37, 0.8, 1.9};
  const auto m = maximal(f, radii);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double best = 0.0;
    for (double r : radii) {
      double s = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        const Point x = g.center(i), y = g.center(j);
        if (std::hypot(x[0] - y[0], x[1] - y[1]) < r) s += std::abs(f[j]) * g.cell_volume();
      }
      best = std::max(best, s / (r * r));
    }
    CHECK(m[i] == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("maximal dominates v_n |f| at continuity points") {
  for (int dim : {1, 2}) {
    const Grid g = dim == 1 ? Grid::line(-2, 2, 2000) : Grid::rect({-2, -2}, {2, 2}, 200, 200);
    const auto f = SampledFunction::sample(g, [](const Point& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); });
    const auto m = maximal(f, radius_ladder(g));
    const double v = dim == 1 ? 2.0 : std::numbers::pi;
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(m[i] >= v * std::abs(f[i]) - 0.05);
  }
}

TEST_CASE("RB majorants") {
  CHECK_THROWS_AS(RBMajorant(1, {0.0, 1.0}, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(RBMajorant(1, {0.1, 1.0}, {1.0, 0.5}), Error);
  CHECK_THROWS_AS(RBMajorant(1, {0.0, 1.0}, {1.0}), Error);
  const RBMajorant step(1, {0.0, 1.0, 2.0}, {1.0, 0.5, 0.0});
  CHECK(step(0.5) == 1.0);
  CHECK(step(1.0) == 0.5);
  CHECK(step(3.0) == 0.0);
  CHECK(step.l1_mass() == doctest::Approx(2.0 * (1.0 + 0.5)));

  // The least majorant of a unit-mass radial decreasing kernel has mass close to 1.
  CHECK(RBMajorant::least_for(Mollifier::gaussian(1)).l1_mass() == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(RBMajorant::least_for(Mollifier::gaussian(2)).l1_mass() == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(RBMajorant::least_for(Mollifier::tent(1)).l1_mass() == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("RB domination check") {
  const Grid g = Grid::line(-3.0, 4.0, 1400);
  const auto chi = SampledFunction::sample(g, [](const Point& x) { return x[0] >= 0 && x[0] <= 1 ? 1.0 : 0.0; });
  const std::vector<double> sigmas{2, 1, 0.5, 0.25, 0.125, 0.0625, 0.03125};
  for (const Mollifier& phi : {Mollifier::gaussian(1), Mollifier::tent(1)}) {
    const RBMajorant maj = RBMajorant::least_for(phi);
    const auto r = rb_domination_check(phi, maj, chi, sigmas, radius_ladder(g, 1.05));
    CHECK(std::stod(r.meta("max_ratio")) <= maj.l1_mass() + 1e-3);
    CHECK(std::stod(r.meta("max_ratio")) <= 1.0 + 1e-3);
    for (double q : r.column("ratio")) CHECK(q >= 0.0);
  }
  const auto empty = rb_domination_check(Mollifier::gaussian(1), RBMajorant::least_for(Mollifier::gaussian(1)),
                                         SampledFunction::zeros(g), sigmas);
  CHECK(empty.rows().empty());

  const RBMajorant too_small(1, {0.0, 1.0}, {0.1, 0.0});
  CHECK_THROWS_WITH_AS(rb_domination_check(Mollifier::gaussian(1), too_small, chi, sigmas),
                       doctest::Contains("majorant violated at x"), Error);
}
