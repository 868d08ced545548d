#include <doctest.h>

#include <cmath>

#include "vexlp/error.hpp"
#include "vexlp/modular_gap.hpp"

using namespace vexlp;

namespace {

VariableExponent step24(const Grid& g) {
  return VariableExponent::sample(g, [](const Point& x) { return x[0] < 0.0 ? 2.0 : 4.0; });
}

const std::vector<double> kR{10, 100, 1e3, 1e4, 1e5, 1e6};

}  // namespace

TEST_CASE("witness construction in 1D") {
  const Grid g = Grid::line(-1.0, 1.0, 2000);
  const auto w = auto_witness(step24(g), Mollifier::gaussian(1));
  CHECK(w.eps == doctest::Approx(2.0 / 3.0));
  CHECK(w.y0[0] > 0.0);
  CHECK(w.x0[0] < 0.0);
  CHECK(w.r > 0.0);
  CHECK(w.c0 > 0.0);
  CHECK(w.sigma > std::ldexp(1.0, w.j) * (std::abs(w.x0[0] - w.y0[0]) + 2.0 * w.r));
  CHECK_NOTHROW(check_witness(w));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.center(i)[0];
    if (x >= w.u_box.lo[0] && x <= w.u_box.hi[0]) CHECK(w.p[i] == 4.0);
    if (x >= w.v_box.lo[0] && x <= w.v_box.hi[0]) CHECK(w.p[i] == 2.0);
  }
}

TEST_CASE("ratio curve grows for a non-constant exponent") {
  const Grid g = Grid::line(-1.0, 1.0, 2000);
  const auto w = auto_witness(step24(g), Mollifier::gaussian(1));
  const auto r = ratio_curve(w, kR);
  const auto ratio = r.column("ratio"), lhs = r.column("lhs"), R = r.column("R");
  for (std::size_t i = 1; i < ratio.size(); ++i) CHECK(ratio[i] > ratio[i - 1]);
  CHECK(std::stod(r.meta("slope")) > 1.5);
  for (std::size_t i = 0; i < R.size(); ++i) CHECK(witness_lower_bound(w, R[i]) <= lhs[i] * (1.0 + 1e-12));

  // Same geometry, constant exponent: the ratio stays bounded.
  const auto c = ratio_curve(with_exponent(w, VariableExponent::constant(g, 2.0)), kR).column("ratio");
  const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
  CHECK(*hi / *lo == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(*hi <= 1.0 + 1e-9);
}

TEST_CASE("witness construction in 2D") {
  const Grid g = Grid::rect({-1, -1}, {1, 1}, 80, 80);
  const auto p = VariableExponent::sample(g, [](const Point& x) { return x[0] + x[1] < 0.0 ? 1.5 : 3.0; });
  const auto w = auto_witness(p, Mollifier::gaussian(2));
  CHECK_NOTHROW(check_witness(w));
  CHECK(w.y0[0] + w.y0[1] > 0.0);
  CHECK(w.x0[0] + w.x0[1] < 0.0);
  const auto r = ratio_curve(w, kR);
  CHECK(std::stod(r.meta("slope")) > 1.0);
}

TEST_CASE("witness errors") {
  const Grid g = Grid::line(-1.0, 1.0, 200);
  CHECK_THROWS_WITH(auto_witness(VariableExponent::constant(g, 3.0), Mollifier::gaussian(1)),
                    doctest::Contains("exponent is constant"));
  const auto w = auto_witness(step24(g), Mollifier::gaussian(1));
  CHECK_THROWS_AS(ratio_curve(w, {10, 10, 10, 10}), Error);
  CHECK_THROWS_AS(ratio_curve(w, {10, 100, 1000}), Error);
  CHECK_THROWS_AS(ratio_curve(w, {10, -1, 100, 1000}), Error);
  WitnessConfig bad = w;
  bad.sigma = 0.5 * w.sigma / 1.1;
  CHECK_THROWS_AS(check_witness(bad), Error);
  WitnessConfig swapped = w;
  std::swap(swapped.u_box, swapped.v_box);
  CHECK_THROWS_AS(check_witness(swapped), Error);
}

TEST_CASE("box masks") {
  const Grid g = Grid::line(0.0, 1.0, 10);
  const auto m = box_mask(g, Box{{0.2, 0.0}, {0.5, 0.0}});
  CHECK(m == Mask{0, 0, 1, 1, 1, 0, 0, 0, 0, 0});
}
