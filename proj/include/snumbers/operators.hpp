#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "snumbers/numgrid.hpp"

namespace snumbers {

enum class VolterraOrder { T1 = 1, T2 = 2 };

/// Nyström discretization of T_m f(x) = ∫_a^x (x - t)^{m-1} f(t) dt.
///
/// The kernel is integrated exactly against the piecewise-linear interpolant
/// of f, so the unweighted map is the cumulative trapezoid (T1) or the exact
/// double integral (T2). The weighted form W^{1/2} A W^{-1/2}, W the
/// trapezoid weights, has singular values approximating those of T_m on L_2.
/// Application is matrix-free; dense() materializes the weighted matrix.
class DiscretizedOperator {
 public:
  DiscretizedOperator(VolterraOrder order, Grid grid, double p);

  VolterraOrder order() const { return order_; }
  const Grid& grid() const { return grid_; }
  double p() const { return p_; }

  /// (T_m f)(x_i) at every node.
  GridFunction apply(const GridFunction& f) const;

  Eigen::VectorXd weighted_apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd weighted_adjoint(const Eigen::VectorXd& y) const;

  /// Dense weighted matrix; O(m²) memory.
  Eigen::MatrixXd dense() const;

 private:
  std::vector<double> raw_apply(const std::vector<double>& f) const;
  std::vector<double> raw_adjoint(const std::vector<double>& y) const;

  VolterraOrder order_;
  Grid grid_;
  double p_;
  std::vector<double> sqrt_w_;
};

DiscretizedOperator volterra_matrix(VolterraOrder order, const Grid& grid, double p);

struct SingularSpectrum {
  std::vector<double> values;  ///< non-increasing
  std::size_t grid_size;
  std::size_t trusted;         ///< leading values within discretization accuracy
};

enum class SvdMethod { Auto, Dense, Lanczos };

/// Leading singular values of the weighted matrix (Hilbert case only).
/// `count` = 0 requests the trusted range, m / 10.
SingularSpectrum svd_snumbers(const DiscretizedOperator& op, std::size_t count = 0,
                              SvdMethod method = SvdMethod::Auto);

/// Singular values of T2 restricted to {f : (T2 f)(b) = (T2 f)'(b) = 0},
/// i.e. of the embedding with both ends clamped (Hilbert case only).
SingularSpectrum clamped_snumbers(const DiscretizedOperator& t2, std::size_t count = 0,
                                  SvdMethod method = SvdMethod::Auto);

/// γ_p |I| / (n - 1/2) with γ_p = (p')^{1/p} p^{1/p'} sin(π/p) / (2π).
double t1_reference(double p, const Interval& interval, int n);
double gamma_p(double p);

struct FactorizationReport {
  int trials;
  std::uint64_t seed;
  double max_curvature_error;   ///< max over trials of ‖D²(T2 f) - f‖_∞ / threshold
  double max_boundary_value;    ///< max |(T2 f)(a)|
  double max_boundary_slope;    ///< max |(T2 f)'(a)|
  double max_isometry_defect;   ///< max |‖(T2 f)''‖_p / ‖f‖_p - 1| over trials and exponents
  std::vector<double> exponents;
  bool curvature_ok;
  bool boundary_ok;
  bool isometry_ok;
  bool passed() const { return curvature_ok && boundary_ok && isometry_ok; }
};

/// Random checks of d²/dx² T2 f = f, membership of T2 f in {u(a) = u'(a) = 0}
/// and ‖(T2 f)''‖_p = ‖f‖_p.
FactorizationReport check_factorization(const Grid& grid, int trials, std::uint64_t seed,
                                        std::vector<double> exponents = {1.5, 2.0, 3.0});

}  // namespace snumbers
