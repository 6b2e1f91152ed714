#include "snumbers/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

namespace snumbers {
namespace {

using Vec = std::vector<double>;

// |s|^{q-2} s
inline double signed_pow(double s, double q) {
  return s == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(s), q - 1.0), s);
}

Vec reversed(const Vec& v) { return Vec(v.rbegin(), v.rend()); }

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

// The linear map from curvature g to the numerator function N(u(g)) of one
// extremal kind, together with its transpose and the recovered u.
class QuotientMap {
 public:
  QuotientMap(ExtremalKind kind, const Grid& grid)
      : kind_(kind), grid_(grid), h_(grid.spacing()), ell_(grid.size()), tau_(trapezoid_weights(grid)) {
    const std::size_t m = grid.size();
    for (std::size_t i = 0; i < m; ++i) ell_[i] = static_cast<double>(i) / static_cast<double>(m - 1);
    ell_.back() = 1.0;
  }

  Vec integrate(const Vec& g) const {
    const GridFunction u = second_antiderivative(GridFunction(grid_, g), 0.0, 0.0);
    return Vec(u.values().begin(), u.values().end());
  }
  Vec integrate_t(const Vec& z) const { return second_antiderivative_adjoint(z, h_); }

  // u(g) for the kind's admissible class.
  Vec extremal(const Vec& g) const {
    switch (kind_) {
      case ExtremalKind::J0:
      case ExtremalKind::Ja:
        return numerator(g);
      case ExtremalKind::Jb:
        return reversed(ja(reversed(g)));
      case ExtremalKind::Aplus:
        return reversed(integrate(reversed(g)));
      case ExtremalKind::Aminus:
      case ExtremalKind::Bconst:
        return integrate(g);
    }
    return {};
  }

  Vec numerator(const Vec& g) const {
    switch (kind_) {
      case ExtremalKind::J0: {
        Vec u = integrate(g);
        const double ub = u.back();
        for (std::size_t i = 0; i < u.size(); ++i) u[i] -= ell_[i] * ub;
        u.back() = 0.0;
        return u;
      }
      case ExtremalKind::Ja:
        return ja(g);
      case ExtremalKind::Jb:
        return reversed(ja(reversed(g)));
      case ExtremalKind::Aplus: {
        Vec u = reversed(integrate(reversed(g)));
        const double ua = u.front();
        for (double& v : u) v -= ua;
        return u;
      }
      case ExtremalKind::Aminus: {
        Vec u = integrate(g);
        const double ub = u.back();
        for (double& v : u) v -= ub;
        return u;
      }
      case ExtremalKind::Bconst: {
        Vec u = integrate(g);
        const double ua = u.front();
        const double ub = u.back();
        for (std::size_t i = 0; i < u.size(); ++i) u[i] -= (1.0 - ell_[i]) * ua + ell_[i] * ub;
        return u;
      }
    }
    return {};
  }

  Vec numerator_t(const Vec& z) const {
    switch (kind_) {
      case ExtremalKind::J0: {
        Vec y = z;
        y.back() -= dot(ell_, z);
        return integrate_t(y);
      }
      case ExtremalKind::Ja:
        return ja_t(z);
      case ExtremalKind::Jb:
        return reversed(ja_t(reversed(z)));
      case ExtremalKind::Aplus: {
        Vec y = z;
        y.front() -= std::accumulate(z.begin(), z.end(), 0.0);
        return reversed(integrate_t(reversed(y)));
      }
      case ExtremalKind::Aminus: {
        Vec y = z;
        y.back() -= std::accumulate(z.begin(), z.end(), 0.0);
        return integrate_t(y);
      }
      case ExtremalKind::Bconst: {
        Vec y = z;
        double left = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) left += (1.0 - ell_[i]) * z[i];
        y.front() -= left;
        y.back() -= dot(ell_, z);
        return integrate_t(y);
      }
    }
    return {};
  }

 private:
  // u(a) = 0, u'(b) = 0: u = S g - (x - a) ∫ g.
  Vec ja(const Vec& g) const {
    Vec u = integrate(g);
    const double slope = dot(tau_, g);
    const double L = grid_.interval().length();
    for (std::size_t i = 0; i < u.size(); ++i) u[i] -= L * ell_[i] * slope;
    return u;
  }
  Vec ja_t(const Vec& z) const {
    Vec out = integrate_t(z);
    const double c = grid_.interval().length() * dot(ell_, z);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= tau_[i] * c;
    return out;
  }

  ExtremalKind kind_;
  Grid grid_;
  double h_;
  Vec ell_;
  Vec tau_;
};

double weighted_pow_sum(const Vec& v, const Vec& w, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::pow(std::abs(v[i]), p);
  return s;
}

Vec initial_curvature(ExtremalKind kind, const Grid& grid) {
  const std::size_t m = grid.size();
  const double pi = std::numbers::pi;
  Vec g(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(m - 1);
    switch (kind) {
      case ExtremalKind::J0:
      case ExtremalKind::Bconst:
        g[i] = -std::sin(pi * s);
        break;
      case ExtremalKind::Ja:
        g[i] = -std::sin(0.5 * pi * s);
        break;
      case ExtremalKind::Jb:
        g[i] = -std::sin(0.5 * pi * (1.0 - s));
        break;
      case ExtremalKind::Aplus:
        g[i] = std::sin(0.5 * pi * s);
        break;
      case ExtremalKind::Aminus:
        g[i] = std::sin(0.5 * pi * (1.0 - s));
        break;
    }
  }
  return g;
}

void normalize(Vec& g, const Vec& w, double p) {
  const double n = std::pow(weighted_pow_sum(g, w, p), 1.0 / p);
  for (double& v : g) v /= n;
}

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::string_view to_string(ExtremalKind kind) {
  switch (kind) {
    case ExtremalKind::J0: return "J0";
    case ExtremalKind::Ja: return "Ja";
    case ExtremalKind::Jb: return "Jb";
    case ExtremalKind::Aplus: return "Aplus";
    case ExtremalKind::Aminus: return "Aminus";
    case ExtremalKind::Bconst: return "B";
  }
  return "?";
}

ConvergenceError::ConvergenceError(ExtremalSolution partial)
    : std::runtime_error("extremal iteration for " + std::string(to_string(partial.kind)) +
                         " did not converge: residual " + std::to_string(partial.residual) +
                         " after " + std::to_string(partial.iterations) + " iterations"),
      partial_(std::move(partial)) {}

GridFunction ratio_numerator(ExtremalKind kind, const GridFunction& u) {
  std::vector<double> v(u.values().begin(), u.values().end());
  switch (kind) {
    case ExtremalKind::J0:
    case ExtremalKind::Ja:
    case ExtremalKind::Jb:
      break;
    case ExtremalKind::Aplus: {
      const double ua = u.front();
      for (double& x : v) x -= ua;
      break;
    }
    case ExtremalKind::Aminus: {
      const double ub = u.back();
      for (double& x : v) x -= ub;
      break;
    }
    case ExtremalKind::Bconst:
      return u - chord(u);
  }
  return GridFunction(u.grid(), std::move(v));
}

double evaluate_ratio(ExtremalKind kind, double p, const GridFunction& u, const GridFunction& curvature) {
  const double den = lp_norm(curvature, p);
  if (!(den > 0.0)) throw std::invalid_argument("quotient undefined for vanishing curvature");
  return lp_norm(ratio_numerator(kind, u), p) / den;
}

// Nonlinear power iteration for max ‖F g‖_p / ‖g‖_p with F the kind's
// numerator map. Each step applies g <- φ_{p'}(W^{-1} F^T W φ_p(F g)) and
// renormalizes; the quotient is nondecreasing along the iterates (Hölder).
// The iteration norms use trapezoid weights: Simpson's alternating weights
// let sawtooth curvatures inflate the discrete quotient.
ExtremalSolution solve(ExtremalKind kind, double p, const Grid& grid, SolverOptions opts) {
  if (!(p >= kMinSolverExponent && p <= kMaxSolverExponent))
    throw std::invalid_argument("solver exponent must lie in [1.05, 50], got " + std::to_string(p));
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (grid.size() < 5) throw std::invalid_argument("grid too coarse for the extremal solver");

  const QuotientMap map(kind, grid);
  const Vec w = trapezoid_weights(grid);
  const double q = p / (p - 1.0);

  Vec g = initial_curvature(kind, grid);
  normalize(g, w, p);
  Vec y = map.numerator(g);
  double value = std::pow(weighted_pow_sum(y, w, p), 1.0 / p);
  double residual = 1.0;
  int it = 0;
  bool converged = false;

  Vec z(grid.size());
  while (it < opts.max_iterations) {
    ++it;
    const double ys = max_abs(y);
    for (std::size_t i = 0; i < y.size(); ++i) z[i] = w[i] * signed_pow(y[i] / ys, p);
    Vec t = map.numerator_t(z);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] /= w[i];
    const double ts = max_abs(t);
    for (std::size_t i = 0; i < t.size(); ++i) g[i] = signed_pow(t[i] / ts, q);
    normalize(g, w, p);
    y = map.numerator(g);
    const double next = std::pow(weighted_pow_sum(y, w, p), 1.0 / p);
    residual = std::abs(next - value) / next;
    value = next;
    if (residual < opts.tol && it >= 2) {
      converged = true;
      break;
    }
  }

  // Sign convention: the numerator function is positive where it peaks.
  std::size_t peak = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (std::abs(y[i]) > std::abs(y[peak])) peak = i;
  const double sign = y[peak] < 0.0 ? -1.0 : 1.0;

  GridFunction curvature(grid, g);
  curvature = curvature * (sign / lp_norm(curvature, p));
  Vec cv(curvature.values().begin(), curvature.values().end());
  GridFunction u(grid, map.extremal(cv));

  const double reported = evaluate_ratio(kind, p, u, curvature);
  ExtremalSolution sol{kind,      p,           grid.interval(), reported, std::pow(reported, -p),
                       std::move(u), std::move(curvature), residual, it, converged};
  if (!converged) throw ConvergenceError(std::move(sol));
  return sol;
}

namespace {
ExtremalSolution solve_on(ExtremalKind kind, double p, const Interval& interval, const Grid& grid, double tol) {
  if (!(grid.interval() == interval)) throw std::invalid_argument("grid does not cover the requested interval");
  return solve(kind, p, grid, SolverOptions{tol, 10000});
}
}  // namespace

ExtremalSolution solve_j0(double p, const Interval& I, const Grid& grid, double tol) {
  return solve_on(ExtremalKind::J0, p, I, grid, tol);
}
ExtremalSolution solve_ja(double p, const Interval& I, const Grid& grid, double tol) {
  return solve_on(ExtremalKind::Ja, p, I, grid, tol);
}
ExtremalSolution solve_jb(double p, const Interval& I, const Grid& grid, double tol) {
  return solve_on(ExtremalKind::Jb, p, I, grid, tol);
}
ExtremalSolution solve_aplus(double p, const Interval& I, const Grid& grid, double tol) {
  return solve_on(ExtremalKind::Aplus, p, I, grid, tol);
}
ExtremalSolution solve_aminus(double p, const Interval& I, const Grid& grid, double tol) {
  return solve_on(ExtremalKind::Aminus, p, I, grid, tol);
}
ExtremalSolution b_constant(double p, const Interval& I, const Grid& grid, double tol) {
  return solve_on(ExtremalKind::Bconst, p, I, grid, tol);
}

ShiftResult best_constant_shift(const GridFunction& f, double p) {
  require_exponent(p);
  const Vec w = simpson_weights(f.grid());
  const auto v = f.values();
  // ψ(λ) = Σ w φ_p(f - λ) is nonincreasing; its root minimizes ‖f - λ‖_p.
  auto psi = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * signed_pow(v[i] - lambda, p);
    return s;
  };
  double lo = *std::min_element(v.begin(), v.end());
  double hi = *std::max_element(v.begin(), v.end());
  const double width = hi - lo;
  if (width > 0.0) {
    for (int k = 0; k < 200 && hi - lo > 1e-15 * width; ++k) {
      const double mid = 0.5 * (lo + hi);
      const double s = psi(mid);
      if (s > 0.0)
        lo = mid;
      else if (s < 0.0)
        hi = mid;
      else
        lo = hi = mid;
    }
  }
  const double lambda = 0.5 * (lo + hi);
  Vec shifted(v.begin(), v.end());
  for (double& x : shifted) x -= lambda;
  return {lambda, lp_norm(GridFunction(f.grid(), std::move(shifted)), p)};
}

GridFunction odd_extension(const ExtremalSolution& sol) {
  if (sol.kind != ExtremalKind::Ja) throw std::invalid_argument("odd extension needs the Ja extremal");
  if (!(sol.interval == Interval(0.0, 1.0))) throw std::invalid_argument("odd extension needs the interval (0, 1)");
  return odd_reflect(sol.extremal);
}

}  // namespace snumbers
