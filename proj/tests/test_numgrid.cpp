#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "snumbers/numgrid.hpp"

using namespace snumbers;
using doctest::Approx;

namespace {
const double pi = std::numbers::pi;

double max_abs_diff(const GridFunction& f, const auto& fn, std::size_t from = 0, std::size_t skip_end = 0) {
  double d = 0;
  for (std::size_t i = from; i + skip_end < f.size(); ++i) d = std::max(d, std::abs(f[i] - fn(f.grid().node(i))));
  return d;
}
}  // namespace

TEST_CASE("interval and grid preconditions") {
  CHECK_THROWS_AS(Interval(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Interval(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Interval(0.0, INFINITY), std::invalid_argument);
  CHECK_THROWS_AS(Grid(Interval(0, 1), 4), std::invalid_argument);
  CHECK_THROWS_AS(Grid(Interval(0, 1), 1), std::invalid_argument);

  const Grid g(Interval(0.3, 1.7), 11);
  CHECK(g.node(0) == 0.3);
  CHECK(g.node(10) == 1.7);
  CHECK(g.spacing() == Approx(0.14));

  CHECK(Grid::with_density(Interval(0, 1), 2049).size() == 2049);
  CHECK(Grid::with_density(Interval(0, 2), 100).size() == 201);
  CHECK(Grid::with_density(Interval(0, 0.001), 100).size() == 5);
}

TEST_CASE("default density honours the environment override") {
  ::setenv("SNUMBERS_GRID_NODES", "301", 1);
  CHECK(default_nodes_per_unit() == 301);
  ::setenv("SNUMBERS_GRID_NODES", "garbage", 1);
  CHECK(default_nodes_per_unit() == kBuiltinNodesPerUnit);
  ::unsetenv("SNUMBERS_GRID_NODES");
  CHECK(default_nodes_per_unit() == kBuiltinNodesPerUnit);
}

TEST_CASE("lp_norm examples") {
  const Grid g(Interval(0, 1), 101);
  CHECK(lp_norm(GridFunction::sample(g, [](double) { return 1.0; }), 2.0) == Approx(1.0).epsilon(1e-14));
  CHECK(lp_norm(GridFunction::sample(g, [](double x) { return x; }), 2.0) == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(lp_norm(GridFunction::zeros(g), 3.0) == 0.0);
  CHECK_THROWS_AS(lp_norm(GridFunction::zeros(g), 1.0), std::invalid_argument);
}

TEST_CASE("quadrature is exact on squared quadratics") {
  // Simpson integrates q² exactly only up to degree 3; for degree-4 q² the
  // error is O(h⁴), far below 1e-8 at m = 1001.
  const Grid g(Interval(-0.5, 1.5), 1001);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const double c0 = u(rng), c1 = u(rng), c2 = u(rng);
    const auto q = GridFunction::sample(g, [&](double x) { return c0 + c1 * x + c2 * x * x; });
    // ∫ (c0 + c1 x + c2 x²)² over (a, b) from the antiderivative.
    auto F = [&](double x) {
      return c0 * c0 * x + c0 * c1 * x * x + (c1 * c1 + 2 * c0 * c2) * x * x * x / 3 + c1 * c2 * std::pow(x, 4) / 2 +
             c2 * c2 * std::pow(x, 5) / 5;
    };
    const double n = lp_norm(q, 2.0);
    CHECK(n * n == Approx(F(1.5) - F(-0.5)).epsilon(1e-8));
  }
}

TEST_CASE("lp_norm is absolutely homogeneous") {
  const Grid g(Interval(0, 1), 51);
  const auto f = GridFunction::sample(g, [](double x) { return std::sin(7 * x) - x; });
  for (double p : {1.5, 2.0, 3.0})
    for (double c : {-3.0, 0.25, 8.0}) CHECK(lp_norm(f * c, p) == Approx(std::abs(c) * lp_norm(f, p)).epsilon(1e-14));
}

TEST_CASE("second_antiderivative examples") {
  const Grid g(Interval(0, 1), 201);
  const auto u1 = second_antiderivative(GridFunction::zeros(g), 0.0, 1.0);
  CHECK(max_abs_diff(u1, [](double x) { return x; }) < 1e-14);

  const auto two = GridFunction::sample(g, [](double) { return 2.0; });
  CHECK(max_abs_diff(second_antiderivative(two, 0.0, 0.0), [](double x) { return x * x; }) < 1e-10);

  const auto g3 = GridFunction::sample(g, [](double x) { return -pi * pi * std::sin(pi * x); });
  const auto u3 = second_antiderivative(g3, 0.0, pi);
  const double h = g.spacing();
  CHECK(max_abs_diff(u3, [](double x) { return std::sin(pi * x); }) < 10.0 * h * h);
}

TEST_CASE("double integral is exact for piecewise-linear data") {
  // g linear means u is a cubic; the Hermite recurrence reproduces it.
  const Grid g(Interval(-1, 2), 31);
  const auto lin = GridFunction::sample(g, [](double x) { return 1 + 2 * x; });
  const auto s = double_integral(lin, 0.5, -1.0);
  for (std::size_t i = 0; i < lin.size(); ++i) {
    const double x = g.node(i), t = x + 1;
    // ∫_{-1}^x (x - s)(1 + 2s) ds = t²/2 + 2(x (x² - 1)/2 - (x³ + 1)/3)
    const double val = 0.5 - t + t * t / 2 + 2 * (x * (x * x - 1) / 2 - (x * x * x + 1) / 3);
    const double slope = -1 + t + (x * x - 1);
    CHECK(s.value[i] == Approx(val).epsilon(1e-12).scale(1.0));
    CHECK(s.slope[i] == Approx(slope).epsilon(1e-12).scale(1.0));
  }
  const auto curv = hermite_curvature(s);
  CHECK(max_abs_diff(curv, [](double x) { return 1 + 2 * x; }) < 1e-9);
}

TEST_CASE("adjoints satisfy the dot-product identity") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N;
  for (std::size_t m : {5u, 17u, 101u}) {
    const Grid g(Interval(0.2, 1.9), m);
    std::vector<double> x(m), y(m);
    for (auto& v : x) v = N(rng);
    for (auto& v : y) v = N(rng);
    const GridFunction gx(g, x);
    const auto Sx = second_antiderivative(gx, 0, 0);
    const auto Ax = antiderivative(gx);
    const auto Sty = second_antiderivative_adjoint(y, g.spacing());
    const auto Aty = antiderivative_adjoint(y, g.spacing());
    double l1 = 0, r1 = 0, l2 = 0, r2 = 0;
    for (std::size_t i = 0; i < m; ++i) {
      l1 += Sx[i] * y[i];
      r1 += x[i] * Sty[i];
      l2 += Ax[i] * y[i];
      r2 += x[i] * Aty[i];
    }
    CHECK(l1 == Approx(r1).epsilon(1e-12));
    CHECK(l2 == Approx(r2).epsilon(1e-12));
  }
}

TEST_CASE("second_derivative examples and round trip") {
  const Grid g(Interval(0, 1), 401);
  const double h = g.spacing();
  const auto sq = second_derivative(GridFunction::sample(g, [](double x) { return x * x; }));
  CHECK(max_abs_diff(sq, [](double) { return 2.0; }) < 1e-8);
  const auto aff = second_derivative(GridFunction::sample(g, [](double x) { return 3 - 2 * x; }));
  CHECK(max_abs_diff(aff, [](double) { return 0.0; }) < 1e-8);
  const auto s = second_derivative(GridFunction::sample(g, [](double x) { return std::sin(pi * x); }));
  CHECK(max_abs_diff(s, [](double x) { return -pi * pi * std::sin(pi * x); }) < 20 * h * h * std::pow(pi, 4));

  const auto gs = GridFunction::sample(g, [](double x) { return std::exp(x) * std::cos(3 * x); });
  const auto rt = second_derivative(second_antiderivative(gs, 0.4, -1.1));
  double err = 0;
  for (std::size_t i = 1; i + 1 < g.size(); ++i) err = std::max(err, std::abs(rt[i] - gs[i]));
  CHECK(err < 50 * h * h);
  CHECK_THROWS_AS(second_derivative(GridFunction::zeros(Grid(Interval(0, 1), 3))), std::invalid_argument);
}

TEST_CASE("rescale examples") {
  const Grid g(Interval(0, 1), 21);
  const auto f = GridFunction::sample(g, [](double x) { return std::sin(pi * x); });
  const auto same = rescale(f, Interval(0, 1));
  CHECK(same.grid() == g);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(same[i] == f[i]);

  const auto lin = rescale(GridFunction::sample(g, [](double x) { return x; }), Interval(0, 2));
  CHECK(max_abs_diff(lin, [](double y) { return y / 2; }) < 1e-15);

  const auto moved = rescale(f, Interval(2, 4));
  CHECK(moved.grid().interval() == Interval(2, 4));
  CHECK(max_abs_diff(moved, [](double y) { return std::sin(pi * (y - 2) / 2); }) < 1e-14);
}

TEST_CASE("rescale preserves sign pattern and monotonicity") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N;
  const Grid g(Interval(0, 1), 41);
  std::vector<double> v(41);
  double acc = 0;
  for (auto& x : v) x = acc += std::abs(N(rng));
  const GridFunction f(g, v);
  const auto r = rescale(f, Interval(-3, 5));
  for (std::size_t i = 0; i + 1 < r.size(); ++i) CHECK(r[i] < r[i + 1]);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::signbit(r[i]) == std::signbit(f[i]));
}

TEST_CASE("chord, reflect and odd_reflect") {
  const Grid g(Interval(1, 3), 21);
  const auto f = GridFunction::sample(g, [](double x) { return x * x; });
  CHECK(max_abs_diff(chord(f), [](double x) { return 1 + 4 * (x - 1); }) < 1e-13);
  CHECK(max_abs_diff(reflect(f), [](double x) { return (4 - x) * (4 - x); }) < 1e-13);

  const Grid h(Interval(0, 1), 11);
  const auto s = GridFunction::sample(h, [](double x) { return std::sin(x); });
  const auto o = odd_reflect(s);
  REQUIRE(o.size() == 21);
  CHECK(o.grid().interval() == Interval(-1, 1));
  for (std::size_t i = 0; i < 21; ++i) CHECK(o[i] == -o[20 - i]);
  CHECK(o[10] == 0.0);
}

TEST_CASE("require_exponent") {
  CHECK_NOTHROW(require_exponent(1.0001));
  CHECK_THROWS_AS(require_exponent(1.0), std::invalid_argument);
  CHECK_THROWS_AS(require_exponent(INFINITY), std::invalid_argument);
  CHECK_THROWS_AS(require_exponent(NAN), std::invalid_argument);
}
