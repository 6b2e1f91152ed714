#include "snumbers/operators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include "snumbers/random.hpp"

namespace snumbers {

DiscretizedOperator::DiscretizedOperator(VolterraOrder order, Grid grid, double p)
    : order_(order), grid_(grid), p_(p), sqrt_w_(trapezoid_weights(grid)) {
  require_exponent(p);
  for (double& w : sqrt_w_) w = std::sqrt(w);
}

std::vector<double> DiscretizedOperator::raw_apply(const std::vector<double>& f) const {
  const GridFunction g(grid_, f);
  const GridFunction r = order_ == VolterraOrder::T1 ? antiderivative(g) : second_antiderivative(g, 0.0, 0.0);
  return {r.values().begin(), r.values().end()};
}

std::vector<double> DiscretizedOperator::raw_adjoint(const std::vector<double>& y) const {
  return order_ == VolterraOrder::T1 ? antiderivative_adjoint(y, grid_.spacing())
                                     : second_antiderivative_adjoint(y, grid_.spacing());
}

GridFunction DiscretizedOperator::apply(const GridFunction& f) const {
  if (!(f.grid() == grid_)) throw std::invalid_argument("function grid differs from operator grid");
  return GridFunction(grid_, raw_apply({f.values().begin(), f.values().end()}));
}

Eigen::VectorXd DiscretizedOperator::weighted_apply(const Eigen::VectorXd& x) const {
  std::vector<double> f(grid_.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = x[static_cast<Eigen::Index>(i)] / sqrt_w_[i];
  const auto r = raw_apply(f);
  Eigen::VectorXd out(static_cast<Eigen::Index>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) out[static_cast<Eigen::Index>(i)] = sqrt_w_[i] * r[i];
  return out;
}

Eigen::VectorXd DiscretizedOperator::weighted_adjoint(const Eigen::VectorXd& y) const {
  std::vector<double> v(grid_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = sqrt_w_[i] * y[static_cast<Eigen::Index>(i)];
  const auto r = raw_adjoint(v);
  Eigen::VectorXd out(static_cast<Eigen::Index>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) out[static_cast<Eigen::Index>(i)] = r[i] / sqrt_w_[i];
  return out;
}

Eigen::MatrixXd DiscretizedOperator::dense() const {
  const auto m = static_cast<Eigen::Index>(grid_.size());
  Eigen::MatrixXd A(m, m);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    e[j] = 1.0;
    A.col(j) = weighted_apply(e);
    e[j] = 0.0;
  }
  return A;
}

DiscretizedOperator volterra_matrix(VolterraOrder order, const Grid& grid, double p) {
  return DiscretizedOperator(order, grid, p);
}

namespace {

void orthogonalize(Eigen::VectorXd& v, const Eigen::MatrixXd& basis, Eigen::Index cols) {
  // Two passes of classical Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass) {
    if (cols == 0) return;
    const auto B = basis.leftCols(cols);
    v -= B * (B.transpose() * v);
  }
}

struct LinearMap {
  Eigen::Index size;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> adjoint;
};

LinearMap as_map(const DiscretizedOperator& op) {
  return {static_cast<Eigen::Index>(op.grid().size()),
          [&op](const Eigen::VectorXd& x) { return op.weighted_apply(x); },
          [&op](const Eigen::VectorXd& y) { return op.weighted_adjoint(y); }};
}

// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization.
// Returns the leading `count` Ritz singular values once each residual
// β_k |u_k| falls below 1e-11·σ_1; grows the Krylov dimension otherwise.
std::vector<double> lanczos_singular_values(const LinearMap& op, std::size_t count) {
  const Eigen::Index m = op.size;
  const auto want = static_cast<Eigen::Index>(count);
  Eigen::Index steps = std::min<Eigen::Index>(m, 2 * want + 40);

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd start(m);
  for (Eigen::Index i = 0; i < m; ++i) start[i] = normal(rng);
  start.normalize();

  while (true) {
    Eigen::MatrixXd P(m, steps + 1);
    Eigen::MatrixXd Q(m, steps);
    std::vector<double> alpha, beta;
    P.col(0) = start;
    Eigen::Index k = 0;
    for (; k < steps; ++k) {
      Eigen::VectorXd q = op.apply(P.col(k));
      if (k > 0) q -= beta.back() * Q.col(k - 1);
      orthogonalize(q, Q, k);
      const double a = q.norm();
      if (a < 1e-300) break;
      Q.col(k) = q / a;
      alpha.push_back(a);
      Eigen::VectorXd r = op.adjoint(Q.col(k)) - a * P.col(k);
      orthogonalize(r, P, k + 1);
      const double b = r.norm();
      beta.push_back(b);
      if (b < 1e-300) {
        ++k;
        break;
      }
      P.col(k + 1) = r / b;
    }

    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      B(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < k) B(i, i + 1) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeFullU);
    const Eigen::VectorXd sigma = svd.singularValues();
    const double tail = beta.empty() ? 0.0 : beta.back();
    const Eigen::Index got = std::min(want, k);
    bool converged = true;
    for (Eigen::Index i = 0; i < got; ++i)
      if (tail * std::abs(svd.matrixU()(k - 1, i)) > 1e-11 * sigma[0]) converged = false;
    if (converged || k < steps || steps == m) {
      std::vector<double> out(static_cast<std::size_t>(got));
      for (Eigen::Index i = 0; i < got; ++i) out[static_cast<std::size_t>(i)] = sigma[i];
      return out;
    }
    steps = std::min<Eigen::Index>(m, 2 * steps);
  }
}

}  // namespace

SingularSpectrum svd_snumbers(const DiscretizedOperator& op, std::size_t count, SvdMethod method) {
  if (op.p() != 2.0)
    throw std::invalid_argument("singular values give s-numbers only in the Hilbert case p = 2");
  const std::size_t m = op.grid().size();
  const std::size_t trusted = std::max<std::size_t>(1, m / 10);
  if (count == 0) count = trusted;
  count = std::min(count, m);
  if (method == SvdMethod::Auto) method = (m <= 1025 || 2 * count > m) ? SvdMethod::Dense : SvdMethod::Lanczos;

  std::vector<double> values;
  if (method == SvdMethod::Dense) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(op.dense());
    const auto& s = svd.singularValues();
    values.assign(s.data(), s.data() + static_cast<std::ptrdiff_t>(count));
  } else {
    values = lanczos_singular_values(as_map(op), count);
  }
  return {std::move(values), m, trusted};
}

SingularSpectrum clamped_snumbers(const DiscretizedOperator& op, std::size_t count, SvdMethod method) {
  if (op.order() != VolterraOrder::T2) throw std::invalid_argument("clamped restriction applies to T2");
  if (op.p() != 2.0)
    throw std::invalid_argument("singular values give s-numbers only in the Hilbert case p = 2");
  const Grid& grid = op.grid();
  const auto m = static_cast<Eigen::Index>(grid.size());
  const std::size_t trusted = std::max<std::size_t>(1, grid.size() / 10);
  if (count == 0) count = trusted;
  count = std::min<std::size_t>(count, grid.size() - 2);

  // (T2 f)(b) and (T2 f)'(b) are linear functionals of the node values; in
  // weighted coordinates x = W^{1/2} f they become rows c / sqrt(w).
  const auto w = trapezoid_weights(grid);
  Eigen::MatrixXd C(m, 2);
  {
    std::vector<double> last(grid.size(), 0.0);
    last.back() = 1.0;
    const auto value_row = second_antiderivative_adjoint(last, grid.spacing());
    for (Eigen::Index j = 0; j < m; ++j) {
      const double sw = std::sqrt(w[static_cast<std::size_t>(j)]);
      C(j, 0) = value_row[static_cast<std::size_t>(j)] / sw;
      C(j, 1) = w[static_cast<std::size_t>(j)] / sw;
    }
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(C);
  const Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(m, 2);
  auto project = [basis](Eigen::VectorXd x) {
    x -= basis * (basis.transpose() * x);
    return x;
  };
  const LinearMap restricted{m, [&op, project](const Eigen::VectorXd& x) { return op.weighted_apply(project(x)); },
                             [&op, project](const Eigen::VectorXd& y) { return project(op.weighted_adjoint(y)); }};

  if (method == SvdMethod::Auto) method = (grid.size() <= 1025 || 2 * count > grid.size()) ? SvdMethod::Dense : SvdMethod::Lanczos;
  std::vector<double> values;
  if (method == SvdMethod::Dense) {
    const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(m, m) - basis * basis.transpose();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(op.dense() * P);
    const auto& s = svd.singularValues();
    values.assign(s.data(), s.data() + static_cast<std::ptrdiff_t>(count));
  } else {
    values = lanczos_singular_values(restricted, count);
  }
  return {std::move(values), grid.size(), trusted};
}

double gamma_p(double p) {
  require_exponent(p);
  const double q = p / (p - 1.0);
  return std::pow(q, 1.0 / p) * std::pow(p, 1.0 / q) * std::sin(std::numbers::pi / p) / (2.0 * std::numbers::pi);
}

double t1_reference(double p, const Interval& interval, int n) {
  if (n < 1) throw std::invalid_argument("s-number index starts at 1");
  return gamma_p(p) * interval.length() / (n - 0.5);
}

FactorizationReport check_factorization(const Grid& grid, int trials, std::uint64_t seed,
                                        std::vector<double> exponents) {
  if (trials < 1) throw std::invalid_argument("factorization check needs at least one trial");
  for (double p : exponents) require_exponent(p);
  const DiscretizedOperator t2(VolterraOrder::T2, grid, 2.0);
  const double L = grid.interval().length();
  const double h = grid.spacing();

  FactorizationReport rep{trials, seed, 0.0, 0.0, 0.0, 0.0, exponents, false, false, false};
  for (int t = 0; t < trials; ++t) {
    auto rng = trial_engine(seed, t);
    std::normal_distribution<double> normal;
    constexpr int kModes = 4;
    double c[kModes + 1], d[kModes + 1];
    double f2_bound = 0.0;  // bound on max |f''|
    for (int k = 0; k <= kModes; ++k) {
      c[k] = normal(rng);
      d[k] = normal(rng);
      const double w = k * std::numbers::pi / L;
      f2_bound += (std::abs(c[k]) + std::abs(d[k])) * w * w;
    }
    const GridFunction f = GridFunction::sample(grid, [&](double x) {
      const double s = (x - grid.interval().a()) / L;
      double v = 0.0;
      for (int k = 0; k <= kModes; ++k) v += c[k] * std::cos(k * std::numbers::pi * s) + d[k] * std::sin(k * std::numbers::pi * s);
      return v;
    });

    const HermiteSamples u = double_integral(f, 0.0, 0.0);
    // Same result through the operator surface.
    const GridFunction tf = t2.apply(f);

    // (i) One-sided endpoint stencils carry the largest constant, 11/12.
    const GridFunction d2 = second_derivative(tf);
    const double threshold = h * h * std::max(f2_bound, 1.0);
    double err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(d2[i] - f[i]));
    rep.max_curvature_error = std::max(rep.max_curvature_error, err / threshold);

    // (ii)
    rep.max_boundary_value = std::max(rep.max_boundary_value, std::abs(tf.front()));
    rep.max_boundary_slope = std::max(rep.max_boundary_slope, std::abs(u.slope.front()));

    // (iii) curvature recovered from the Hermite data of T2 f.
    const GridFunction curvature = hermite_curvature(u);
    for (double p : exponents)
      rep.max_isometry_defect =
          std::max(rep.max_isometry_defect, std::abs(lp_norm(curvature, p) / lp_norm(f, p) - 1.0));
  }
  rep.curvature_ok = rep.max_curvature_error <= 1.0;
  rep.boundary_ok = rep.max_boundary_value == 0.0 && rep.max_boundary_slope == 0.0;
  rep.isometry_ok = rep.max_isometry_defect <= 1e-6;
  return rep;
}

}  // namespace snumbers
