#include "snumbers/numgrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace snumbers {

Interval::Interval(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw std::invalid_argument("interval requires finite endpoints with a < b");
}

Grid::Grid(Interval interval, std::size_t nodes)
    : interval_(interval), nodes_(nodes), h_(interval.length() / static_cast<double>(nodes - 1)) {
  if (nodes < 3) throw std::invalid_argument("grid needs at least 3 nodes");
  if (nodes % 2 == 0) throw std::invalid_argument("grid node count must be odd");
}

Grid Grid::with_density(Interval interval, std::size_t nodes_per_unit) {
  auto n = static_cast<std::size_t>(std::ceil(static_cast<double>(nodes_per_unit) * interval.length()));
  n = std::max<std::size_t>(n, 5);
  if (n % 2 == 0) ++n;
  return Grid(interval, n);
}

double Grid::node(std::size_t i) const {
  // Hit b exactly on the last node.
  if (i + 1 == nodes_) return interval_.b();
  return interval_.a() + static_cast<double>(i) * h_;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(nodes_);
  for (std::size_t i = 0; i < nodes_; ++i) x[i] = node(i);
  return x;
}

std::size_t default_nodes_per_unit() {
  if (const char* env = std::getenv("SNUMBERS_GRID_NODES")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 5) return static_cast<std::size_t>(v);
  }
  return kBuiltinNodesPerUnit;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("value count does not match grid size");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("grid function values must be finite");
}

GridFunction GridFunction::zeros(const Grid& grid) {
  return GridFunction(grid, std::vector<double>(grid.size(), 0.0));
}

GridFunction GridFunction::operator*(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::operator+(const GridFunction& o) const {
  if (!(o.grid_ == grid_)) throw std::invalid_argument("grid mismatch");
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.values_[i];
  return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::operator-(const GridFunction& o) const {
  if (!(o.grid_ == grid_)) throw std::invalid_argument("grid mismatch");
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.values_[i];
  return GridFunction(grid_, std::move(v));
}

std::vector<double> simpson_weights(const Grid& grid) {
  const std::size_t m = grid.size();
  const double h = grid.spacing();
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
  w.front() = w.back() = h / 3.0;
  return w;
}

std::vector<double> trapezoid_weights(const Grid& grid) {
  std::vector<double> w(grid.size(), grid.spacing());
  w.front() = w.back() = 0.5 * grid.spacing();
  return w;
}

void require_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("exponent p must lie in (1, inf)");
}

double lp_norm_pow(std::span<const double> values, double spacing, double p) {
  require_exponent(p);
  const std::size_t m = values.size();
  if (m < 3 || m % 2 == 0) throw std::invalid_argument("Simpson rule needs an odd count >= 3");
  double ends = std::pow(std::abs(values.front()), p) + std::pow(std::abs(values.back()), p);
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double v = std::pow(std::abs(values[i]), p);
    (i % 2 == 1 ? odd : even) += v;
  }
  return spacing / 3.0 * (ends + 4.0 * odd + 2.0 * even);
}

double lp_norm_pow(const GridFunction& f, double p) {
  return lp_norm_pow(f.values(), f.grid().spacing(), p);
}

double lp_norm(const GridFunction& f, double p) { return std::pow(lp_norm_pow(f, p), 1.0 / p); }

HermiteSamples double_integral(const GridFunction& g, double c0, double c1) {
  const std::size_t m = g.size();
  const double h = g.grid().spacing();
  std::vector<double> u(m);
  std::vector<double> du(m);
  u[0] = c0;
  du[0] = c1;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    u[k + 1] = u[k] + h * du[k] + h * h * (g[k] / 3.0 + g[k + 1] / 6.0);
    du[k + 1] = du[k] + 0.5 * h * (g[k] + g[k + 1]);
  }
  return {GridFunction(g.grid(), std::move(u)), GridFunction(g.grid(), std::move(du))};
}

GridFunction second_antiderivative(const GridFunction& g, double c0, double c1) {
  return double_integral(g, c0, c1).value;
}

// u_k = Σ_j g_j ∫ (x_k - t)_+ φ_j(t) dt with φ_j the hat functions, so the
// transpose is the hat-function moment of Y(t) = Σ_k y_k (x_k - t)_+, which is
// piecewise linear with node values accumulated from the right.
std::vector<double> second_antiderivative_adjoint(std::span<const double> y, double spacing) {
  const std::size_t m = y.size();
  std::vector<double> big_y(m, 0.0);
  double tail = 0.0;
  for (std::size_t i = m - 1; i-- > 0;) {
    tail += y[i + 1];
    big_y[i] = big_y[i + 1] + spacing * tail;
  }
  std::vector<double> out(m);
  const double c = spacing / 6.0;
  out[0] = c * (2.0 * big_y[0] + big_y[1]);
  out[m - 1] = c * (big_y[m - 2] + 2.0 * big_y[m - 1]);
  for (std::size_t j = 1; j + 1 < m; ++j) out[j] = c * (big_y[j - 1] + 4.0 * big_y[j] + big_y[j + 1]);
  return out;
}

GridFunction antiderivative(const GridFunction& g) {
  const double h = g.grid().spacing();
  std::vector<double> v(g.size());
  v[0] = 0.0;
  for (std::size_t k = 0; k + 1 < g.size(); ++k) v[k + 1] = v[k] + 0.5 * h * (g[k] + g[k + 1]);
  return GridFunction(g.grid(), std::move(v));
}

std::vector<double> antiderivative_adjoint(std::span<const double> y, double spacing) {
  const std::size_t m = y.size();
  std::vector<double> out(m, 0.0);
  double tail = 0.0;  // Σ_{i>j} y_i
  for (std::size_t j = m; j-- > 0;) {
    if (j == 0)
      out[0] = 0.5 * spacing * tail;
    else
      out[j] = 0.5 * spacing * y[j] + spacing * tail;
    tail += y[j];
  }
  return out;
}

GridFunction hermite_curvature(const HermiteSamples& s) {
  const std::size_t m = s.value.size();
  const double h = s.value.grid().spacing();
  std::vector<double> left(m, 0.0);   // from the cell ending at the node
  std::vector<double> right(m, 0.0);  // from the cell starting at the node
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double secant = (s.value[k + 1] - s.value[k]) / h;
    right[k] = (6.0 * secant - 4.0 * s.slope[k] - 2.0 * s.slope[k + 1]) / h;
    left[k + 1] = (-6.0 * secant + 2.0 * s.slope[k] + 4.0 * s.slope[k + 1]) / h;
  }
  std::vector<double> c(m);
  c[0] = right[0];
  c[m - 1] = left[m - 1];
  for (std::size_t k = 1; k + 1 < m; ++k) c[k] = 0.5 * (left[k] + right[k]);
  return GridFunction(s.value.grid(), std::move(c));
}

GridFunction second_derivative(const GridFunction& u) {
  const std::size_t m = u.size();
  if (m < 5) throw std::invalid_argument("second derivative needs at least 5 nodes");
  const double h2 = u.grid().spacing() * u.grid().spacing();
  std::vector<double> d(m);
  for (std::size_t i = 1; i + 1 < m; ++i) d[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / h2;
  d[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / h2;
  d[m - 1] = (2.0 * u[m - 1] - 5.0 * u[m - 2] + 4.0 * u[m - 3] - u[m - 4]) / h2;
  return GridFunction(u.grid(), std::move(d));
}

GridFunction rescale(const GridFunction& f, const Interval& target) {
  const auto v = f.values();
  return GridFunction(Grid(target, f.size()), std::vector<double>(v.begin(), v.end()));
}

GridFunction chord(const GridFunction& f) {
  const Interval& I = f.grid().interval();
  const double fa = f.front();
  const double slope = (f.back() - fa) / I.length();
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fa + slope * (f.grid().node(i) - I.a());
  v.back() = f.back();
  return GridFunction(f.grid(), std::move(v));
}

GridFunction reflect(const GridFunction& f) {
  const auto v = f.values();
  return GridFunction(f.grid(), std::vector<double>(v.rbegin(), v.rend()));
}

GridFunction odd_reflect(const GridFunction& f) {
  const Interval& I = f.grid().interval();
  const std::size_t m = f.size();
  std::vector<double> v(2 * m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    v[m - 1 + i] = f[i];
    v[m - 1 - i] = -f[i];
  }
  v[m - 1] = f[0];
  return GridFunction(Grid(Interval(2.0 * I.a() - I.b(), I.b()), 2 * m - 1), std::move(v));
}

}  // namespace snumbers
