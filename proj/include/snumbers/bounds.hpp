#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "snumbers/extremal.hpp"
#include "snumbers/numgrid.hpp"

namespace snumbers {

/// Operators whose s-numbers are bracketed.
///   E_full  embedding of {u : u = u' = 0 at both ends} into L_p
///   E_a     embedding of {u : u(a) = u'(a) = 0} into L_p
///   T2      Volterra operator ∫_a^x (x - t) f(t) dt, bracketed through E_a
enum class TargetOperator { E_full, E_a, T2 };

std::string_view to_string(TargetOperator t);

enum class PartitionKind { UpperW0, UpperWa, LowerUniform };

/// Cells of the interpolation (upper) or glued-extremal (lower) construction.
/// Cell i is (breakpoints[i], breakpoints[i+1]].
struct PartitionScheme {
  TargetOperator target;
  PartitionKind kind;
  int n;
  Interval interval;
  std::vector<double> breakpoints;

  std::size_t cell_count() const { return breakpoints.size() - 1; }
  double cell_length(std::size_t i) const { return breakpoints[i + 1] - breakpoints[i]; }
};

/// Partition for the rank-n interpolation operator: half-length boundary
/// cell(s) and interior cells of length |I|/n (E_full) or |I|/(n - 1/2)
/// (E_a, T2).
PartitionScheme partition_upper(TargetOperator target, const Interval& interval, int n);

/// n cells of equal length.
PartitionScheme partition_lower(TargetOperator target, const Interval& interval, int n);

/// A grid whose nodes include every breakpoint, with an even number of
/// intervals in every cell so that Simpson applies cellwise.
Grid aligned_grid(const PartitionScheme& scheme, std::size_t nodes_per_unit);

/// Node index of every breakpoint on `grid`; throws if one is off-grid.
std::vector<std::size_t> breakpoint_nodes(const PartitionScheme& scheme, const Grid& grid);

/// The interpolation operator K: f(a) on the first cell, f(b) on the last
/// cell for E_full, and the chord through the cell endpoint values on every
/// interior cell. Nodes on a breakpoint follow the left cell.
GridFunction interpolation_K(const GridFunction& f, const PartitionScheme& scheme);

/// Σ over cells of ∫ |f - K f|^p, each cell integrated in closed form of its
/// own interpolant (no half-open ambiguity at breakpoints).
double interpolation_error_pow(const GridFunction& f, const PartitionScheme& scheme, double p);

/// Upper bound on a_{n+1}: |I|²/n²·B (E_full) or |I|²/(n - 1/2)²·B (E_a, T2).
double upper_bound_value(TargetOperator target, const Interval& interval, int n, double p, double b01);

/// Lower bound |I|²/n²·B on b_{n-1} (E_full) or b_n (E_a, T2).
double lower_bound_value(TargetOperator target, const Interval& interval, int n, double b01);

enum class BoundSide { Upper, Lower };

struct BoundCertificate {
  TargetOperator target;
  BoundSide side;
  int n;
  double p;
  double bound_value;
  int trials;
  std::uint64_t seed;
  double worst_ratio;
  double margin;  ///< relative slack of the worst trial against the bound
  double tolerance;
  bool passed;
};

struct CertifyOptions {
  double tolerance = 1e-3;
  std::size_t nodes_per_unit = 0;  ///< 0: default_nodes_per_unit()
  std::optional<double> b01;       ///< B(0,1) for this p; solved when absent
};

/// B(0,1) at exponent p on a grid of the given density.
double unit_b_constant(double p, std::size_t nodes_per_unit = 0);

/// Random admissible functions against the interpolation bound.
BoundCertificate certify_upper(TargetOperator target, const Interval& interval, int n, double p, int trials,
                               std::uint64_t seed, const CertifyOptions& opts = {});

/// Quotient ‖f - K f‖_p / ‖f''‖_p for the J0 extremal placed on one interior
/// cell and zero elsewhere (f'' taken cellwise). Equals the bound up to
/// discretization.
double upper_tightness_witness(TargetOperator target, const Interval& interval, int n, double p,
                               std::size_t nodes_per_unit = 0);

/// Span of glued, rescaled odd-extended Ja extremals on a uniform partition.
class BernsteinSubspace {
 public:
  BernsteinSubspace(TargetOperator target, const Interval& interval, int n, double p,
                    std::size_t nodes_per_unit = 0);

  const PartitionScheme& scheme() const { return scheme_; }
  const Grid& grid() const { return grid_; }
  double p() const { return p_; }

  /// Dimension of the subspace: n - 1 for E_full, n otherwise.
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<GridFunction>& basis() const { return basis_; }

  /// Per-cell profiles f_i and their curvatures, ‖f_i''‖_p = 1 on each cell.
  const std::vector<GridFunction>& cell_profiles() const { return profiles_; }
  const std::vector<GridFunction>& cell_curvatures() const { return curvatures_; }

  /// Maps free coordinates (length dimension()) to the n cell coefficients.
  std::vector<double> cell_coefficients(std::span<const double> free) const;

  /// h = ∫_a^x Σ α_i f_i' χ_i for cell coefficients α.
  GridFunction glue(std::span<const double> alpha) const;

  /// ‖h‖_p / ‖h''‖_p for cell coefficients α.
  double ratio(std::span<const double> alpha) const;

  /// Same quotient with each cell's best constant shift removed from h.
  double reduced_ratio(std::span<const double> alpha) const;

 private:
  double curvature_pow(std::span<const double> alpha) const;

  PartitionScheme scheme_;
  double p_;
  Grid grid_;
  std::vector<std::size_t> breaks_;
  std::vector<GridFunction> profiles_;
  std::vector<GridFunction> curvatures_;
  std::vector<GridFunction> basis_;
};

BernsteinSubspace bernstein_subspace(TargetOperator target, const Interval& interval, int n, double p,
                                     std::size_t nodes_per_unit = 0);

/// Random unit-sphere coefficients against the Bernstein bound.
BoundCertificate certify_lower(TargetOperator target, const Interval& interval, int n, double p, int trials,
                               std::uint64_t seed, const CertifyOptions& opts = {});

struct SNumberRow {
  int n;
  double lower;
  double upper;
  std::optional<double> oracle;
  std::optional<double> n2_oracle;
};

struct SNumberTable {
  TargetOperator target;
  double p;
  Interval interval;
  double b01;
  std::vector<SNumberRow> rows;
};

/// Two-sided bracket for a_n at every n in [n_min, n_max]; `oracle`, when
/// given, holds s_1, s_2, ... and is attached to the rows it covers.
SNumberTable snumber_table(TargetOperator target, const Interval& interval, double p, int n_min, int n_max,
                           double b01, std::span<const double> oracle = {});

}  // namespace snumbers
