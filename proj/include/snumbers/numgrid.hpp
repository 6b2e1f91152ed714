#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace snumbers {

/// Open interval (a, b) with a < b.
class Interval {
 public:
  Interval(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  double length() const { return b_ - a_; }
  double midpoint() const { return 0.5 * (a_ + b_); }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double a_;
  double b_;
};

/// Uniform grid over an interval, endpoints included.
///
/// The node count is always odd so that composite Simpson applies to the whole
/// grid and to any sub-range starting and ending on even node offsets.
class Grid {
 public:
  Grid(Interval interval, std::size_t nodes);

  /// Grid with roughly `nodes_per_unit` nodes per unit length, rounded up to
  /// an odd count (minimum 5).
  static Grid with_density(Interval interval, std::size_t nodes_per_unit);

  const Interval& interval() const { return interval_; }
  std::size_t size() const { return nodes_; }
  double spacing() const { return h_; }
  double node(std::size_t i) const;
  std::vector<double> nodes() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Interval interval_;
  std::size_t nodes_;
  double h_;
};

/// Default node density per unit length. Overridable through the
/// SNUMBERS_GRID_NODES environment variable.
std::size_t default_nodes_per_unit();
inline constexpr std::size_t kBuiltinNodesPerUnit = 2049;

/// Real function sampled on the nodes of a Grid.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> values);

  /// Samples `fn` at every node.
  template <class Fn>
  static GridFunction sample(const Grid& grid, Fn&& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.node(i));
    return GridFunction(grid, std::move(v));
  }

  static GridFunction zeros(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

  GridFunction operator*(double c) const;
  GridFunction operator+(const GridFunction& o) const;
  GridFunction operator-(const GridFunction& o) const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Composite Simpson weights for the grid (odd node count).
std::vector<double> simpson_weights(const Grid& grid);

/// Trapezoid weights for the grid.
std::vector<double> trapezoid_weights(const Grid& grid);

/// (∫_I |f|^p dx)^{1/p} by composite Simpson applied to |f|^p.
double lp_norm(const GridFunction& f, double p);

/// ∫_I |f|^p dx by composite Simpson.
double lp_norm_pow(const GridFunction& f, double p);

/// Simpson integral of |v|^p over contiguous node values with the given
/// spacing; the value count must be odd.
double lp_norm_pow(std::span<const double> values, double spacing, double p);

/// Values and first derivatives at the nodes of a twice integrated function.
struct HermiteSamples {
  GridFunction value;
  GridFunction slope;
};

/// Exact double integral of the piecewise-linear interpolant of g:
///   u(x) = c0 + c1 (x - a) + ∫_a^x (x - t) g(t) dt.
HermiteSamples double_integral(const GridFunction& g, double c0, double c1);

/// Node values of double_integral(g, c0, c1).
GridFunction second_antiderivative(const GridFunction& g, double c0, double c1);

/// Transpose of the linear map g ↦ second_antiderivative(g, 0, 0) with respect
/// to the Euclidean inner product on node values.
std::vector<double> second_antiderivative_adjoint(std::span<const double> y, double spacing);

/// Cumulative trapezoid ∫_a^x g, exact for piecewise-linear g.
GridFunction antiderivative(const GridFunction& g);

/// Transpose of g ↦ antiderivative(g) on node values.
std::vector<double> antiderivative_adjoint(std::span<const double> y, double spacing);

/// Second derivative of the piecewise cubic Hermite interpolant built from
/// values and slopes. Interior nodes take the mean of the two one-sided cell
/// values.
GridFunction hermite_curvature(const HermiteSamples& samples);

/// Finite-difference second derivative: central in the interior, 4-point
/// one-sided at the endpoints. Requires at least 5 nodes.
GridFunction second_derivative(const GridFunction& u);

/// Pulls f back to `target` through the increasing affine bijection between
/// the intervals. Node values are unchanged.
GridFunction rescale(const GridFunction& f, const Interval& target);

/// Affine function through (a, f(a)) and (b, f(b)).
GridFunction chord(const GridFunction& f);

/// f(a + b - x).
GridFunction reflect(const GridFunction& f);

/// Odd extension of f given on (0, L) to (-L, L) on 2m - 1 nodes. The value
/// at 0 is taken from f(0); callers pass functions vanishing there.
GridFunction odd_reflect(const GridFunction& f);

/// Throws std::invalid_argument unless 1 < p < inf.
void require_exponent(double p);

}  // namespace snumbers
