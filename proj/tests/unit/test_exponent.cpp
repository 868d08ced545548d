#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vexlp/error.hpp"
#include "vexlp/exponent.hpp"
#include "vexlp/random.hpp"

using namespace vexlp;

TEST_CASE("conjugate values") {
  CHECK(conjugate_value(2.0) == 2.0);
  CHECK(conjugate_value(1.0) == kInfiniteExponent);
  CHECK(conjugate_value(kInfiniteExponent) == 1.0);
  CHECK(conjugate_value(3.0) == doctest::Approx(1.5));
}

TEST_CASE("conjugate is an exact involution") {
  Rng rng(11);
  const Grid g = Grid::line(-1.0, 1.0, 300);
  for (int t = 0; t < 20; ++t) {
    const VariableExponent p = random_exponent(g, rng, t % 2 == 0, t % 3 == 0);
    const VariableExponent back = p.conjugate().conjugate();
    for (std::size_t i = 0; i < p.size(); ++i) REQUIRE(back[i] == p[i]);
    // 1/p + 1/p' = 1 pointwise away from the endpoint regions.
    const VariableExponent q = p.conjugate();
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p.region(i) == Region::finite) CHECK(1.0 / p[i] + 1.0 / q[i] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("regions partition the grid") {
  const Grid g = Grid::line(0.0, 1.0, 6);
  const VariableExponent p(g, {1.0, 1.5, kInfiniteExponent, 2.0, 1.0, kInfiniteExponent});
  const Mask one = p.mask(Region::one), fin = p.mask(Region::finite), inf = p.mask(Region::infinite);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(one[i] + fin[i] + inf[i] == 1);
  CHECK(one == Mask{1, 0, 0, 0, 1, 0});
  CHECK(inf == Mask{0, 0, 1, 0, 0, 1});
  const Extremes e = extremes(p);
  CHECK(e.p_minus == 1.0);
  CHECK(e.p_plus == kInfiniteExponent);
  const Extremes w = extremes(p, Measure::weighted(g, {0, 1, 0, 1, 0, 0}));
  CHECK(w.p_minus == 1.5);
  CHECK(w.p_plus == 2.0);
  CHECK_THROWS_AS(extremes(p, Measure::weighted(g, {0, 0, 0, 0, 0, 0})), Error);
}

TEST_CASE("exponent validation") {
  const Grid g = Grid::line(0.0, 1.0, 3);
  CHECK_THROWS_AS(VariableExponent(g, {1.0, 0.5, 2.0}), Error);
  CHECK_THROWS_AS(VariableExponent(g, {1.0, NAN, 2.0}), Error);
  CHECK_THROWS_AS(VariableExponent(g, {1.0, 2.0}), Error);
  CHECK_NOTHROW(VariableExponent(g, {1.0, kInfiniteExponent, 2.0}));
}

namespace {

// Independent brute-force oracle over all pairs.
std::pair<double, double> brute_log_hoelder(const VariableExponent& p) {
  const Grid& g = p.grid();
  double local = 0.0, decay = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      const Point x = g.center(i), y = g.center(j);
      const double diff = std::abs(1.0 / p[i] - 1.0 / p[j]);
      const double d = std::hypot(x[0] - y[0], x[1] - y[1]);
      if (d <= 0.5) local = std::max(local, diff * std::log(1.0 / d));
      const double rx = std::hypot(x[0], x[1]), ry = std::hypot(y[0], y[1]);
      if (ry >= rx) decay = std::max(decay, diff * std::log(std::numbers::e + rx));
    }
  return {local, decay};
}

}  // namespace

TEST_CASE("log-Hoelder report") {
  const Grid g = Grid::line(-2.0, 2.0, 200);
  CHECK(log_hoelder_report(VariableExponent::constant(g, 3.0)).combined() == 0.0);

  const auto smooth = VariableExponent::sample(g, [](const Point& x) { return 2.0 + 0.5 * std::sin(2.0 * x[0]); });
  const auto [local, decay] = brute_log_hoelder(smooth);
  const LogHoelderReport r = log_hoelder_report(smooth);
  CHECK(r.exhaustive);
  CHECK(r.c_local == doctest::Approx(local).epsilon(1e-12));
  CHECK(r.c_decay == doctest::Approx(decay).epsilon(1e-12));
  CHECK(r.combined() == std::max(local, decay));

  // A jump: the local constant is the jump in 1/p times log(1/h).
  const auto step = VariableExponent::sample(g, [](const Point& x) { return x[0] < 0 ? 2.0 : 4.0; });
  CHECK(log_hoelder_report(step).c_local == doctest::Approx(0.25 * std::log(1.0 / g.spacing(0))).epsilon(1e-12));

  const Grid k = Grid::rect({-1, -1}, {1, 1}, 12, 12);
  const auto p2 = VariableExponent::sample(k, [](const Point& x) { return 2.0 + x[0] * x[1]; });
  const auto [l2, d2] = brute_log_hoelder(p2);
  CHECK(log_hoelder_report(p2).c_local == doctest::Approx(l2).epsilon(1e-12));
  CHECK(log_hoelder_report(p2).c_decay == doctest::Approx(d2).epsilon(1e-12));
}

TEST_CASE("log-Hoelder subsampled scan") {
  const Grid g = Grid::line(-2.0, 2.0, 6000);
  const auto step = VariableExponent::sample(g, [](const Point& x) { return x[0] < 0 ? 2.0 : 4.0; });
  LogHoelderOptions opt;
  opt.sample_pairs = 10000;
  const LogHoelderReport r = log_hoelder_report(step, opt);
  CHECK_FALSE(r.exhaustive);
  // Neighbour pairs are always scanned, so the jump is found exactly.
  CHECK(r.c_local == doctest::Approx(0.25 * std::log(1.0 / g.spacing(0))).epsilon(1e-12));
  CHECK(log_hoelder_report(step, opt).c_decay == r.c_decay);  // seeded
}

TEST_CASE("log-Hoelder rejects infinite exponents") {
  const Grid g = Grid::line(0.0, 1.0, 4);
  CHECK_THROWS_WITH(log_hoelder_report(VariableExponent(g, {2, 2, kInfiniteExponent, 2})), "infinite exponent");
}
