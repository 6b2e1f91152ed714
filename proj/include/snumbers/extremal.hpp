#pragma once

#include <stdexcept>
#include <string_view>
#include <utility>

#include "snumbers/numgrid.hpp"

namespace snumbers {

/// The variational constants of the one-dimensional p-biharmonic problem.
///
/// Each kind is a supremum of ‖N(u)‖_p / ‖u''‖_p over an admissible class:
///   J0      u(a) = u(b) = 0                     N(u) = u
///   Ja      u(a) = 0,  u'(b) = 0                N(u) = u
///   Jb      u(b) = 0,  u'(a) = 0                N(u) = u
///   Aplus   u(b) = u'(b) = 0                    N(u) = u - u(a)
///   Aminus  u(a) = u'(a) = 0                    N(u) = u - u(b)
///   Bconst  unconstrained                       N(u) = u - chord(u)
enum class ExtremalKind { J0, Ja, Jb, Aplus, Aminus, Bconst };

std::string_view to_string(ExtremalKind kind);

struct SolverOptions {
  double tol = 1e-8;
  int max_iterations = 10000;
};

/// A solved extremal problem.
struct ExtremalSolution {
  ExtremalKind kind;
  double p;
  Interval interval;
  double value;       ///< the supremum (length² units)
  double eigenvalue;  ///< value^{-p}
  GridFunction extremal;   ///< maximizer u, with ‖u''‖_p = 1
  GridFunction curvature;  ///< u'' (exact for the discrete parametrization)
  double residual;    ///< relative change of value over the last iteration
  int iterations;
  bool converged;
};

/// Raised when the fixed-point iteration hits its cap; carries the last iterate.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(ExtremalSolution partial);
  const ExtremalSolution& partial() const { return partial_; }

 private:
  ExtremalSolution partial_;
};

/// Smallest and largest exponent accepted by the solvers.
inline constexpr double kMinSolverExponent = 1.05;
inline constexpr double kMaxSolverExponent = 50.0;

/// Solves the extremal problem of `kind` on `grid` (whose interval is the
/// problem interval) by monotone nonlinear power iteration.
ExtremalSolution solve(ExtremalKind kind, double p, const Grid& grid, SolverOptions opts = {});

ExtremalSolution solve_j0(double p, const Interval& interval, const Grid& grid, double tol = 1e-8);
ExtremalSolution solve_ja(double p, const Interval& interval, const Grid& grid, double tol = 1e-8);
ExtremalSolution solve_jb(double p, const Interval& interval, const Grid& grid, double tol = 1e-8);
ExtremalSolution solve_aplus(double p, const Interval& interval, const Grid& grid, double tol = 1e-8);
ExtremalSolution solve_aminus(double p, const Interval& interval, const Grid& grid, double tol = 1e-8);
ExtremalSolution b_constant(double p, const Interval& interval, const Grid& grid, double tol = 1e-8);

/// The function whose norm forms the numerator of `kind`'s quotient.
GridFunction ratio_numerator(ExtremalKind kind, const GridFunction& u);

/// ‖N(u)‖_p / ‖curvature‖_p for the quotient of `kind`.
double evaluate_ratio(ExtremalKind kind, double p, const GridFunction& u, const GridFunction& curvature);

struct ShiftResult {
  double lambda_star;
  double min_norm;
};

/// Minimizer of λ ↦ ‖f - λ‖_p over the reals and the attained minimum.
ShiftResult best_constant_shift(const GridFunction& f, double p);

/// Odd extension to (-1, 1) of the Ja extremal on (0, 1).
GridFunction odd_extension(const ExtremalSolution& sol);

}  // namespace snumbers
