#include "snumbers/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "snumbers/random.hpp"

namespace snumbers {
namespace {

std::size_t resolve_density(std::size_t nodes_per_unit) {
  return nodes_per_unit == 0 ? default_nodes_per_unit() : nodes_per_unit;
}

TargetOperator scheme_target(TargetOperator t) { return t == TargetOperator::T2 ? TargetOperator::E_a : t; }

void require_n(int n, int minimum) {
  if (n < minimum) throw std::invalid_argument("partition index n must be at least " + std::to_string(minimum));
}

// Runs fn(t) for t in [0, trials) and returns the results in trial order.
template <class Fn>
std::vector<double> run_trials(int trials, Fn fn) {
  std::vector<double> out(static_cast<std::size_t>(trials));
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8u));
  if (workers == 1 || trials < 8) {
    for (int t = 0; t < trials; ++t) out[static_cast<std::size_t>(t)] = fn(t);
    return out;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int t = static_cast<int>(w); t < trials; t += static_cast<int>(workers))
        out[static_cast<std::size_t>(t)] = fn(t);
    });
  pool.clear();
  return out;
}

std::size_t round_up_even(double x) {
  auto k = static_cast<std::size_t>(std::ceil(x));
  return k + (k % 2);
}

}  // namespace

std::string_view to_string(TargetOperator t) {
  switch (t) {
    case TargetOperator::E_full: return "e";
    case TargetOperator::E_a: return "ea";
    case TargetOperator::T2: return "t2";
  }
  return "?";
}

PartitionScheme partition_upper(TargetOperator target, const Interval& I, int n) {
  require_n(n, 1);
  const double a = I.a();
  const double L = I.length();
  std::vector<double> bp{a};
  if (scheme_target(target) == TargetOperator::E_full) {
    const double first = a + L / (2.0 * n);
    bp.push_back(first);
    for (int i = 2; i <= n; ++i) bp.push_back(first + (i - 1) * L / n);
    bp.push_back(I.b());
    return {target, PartitionKind::UpperW0, n, I, std::move(bp)};
  }
  // The interior cells of length |I|/(n - 1/2) fill the interval exactly, so
  // a_n = b and the trailing cell is empty.
  const double first = a + L / (2.0 * n - 1.0);
  if (n == 1) {
    bp.push_back(I.b());
  } else {
    bp.push_back(first);
    for (int i = 2; i < n; ++i) bp.push_back(first + (i - 1) * L / (n - 0.5));
    bp.push_back(I.b());
  }
  return {target, PartitionKind::UpperWa, n, I, std::move(bp)};
}

PartitionScheme partition_lower(TargetOperator target, const Interval& I, int n) {
  require_n(n, scheme_target(target) == TargetOperator::E_full ? 2 : 1);
  std::vector<double> bp;
  for (int i = 0; i < n; ++i) bp.push_back(I.a() + i * I.length() / n);
  bp.push_back(I.b());
  return {target, PartitionKind::LowerUniform, n, I, std::move(bp)};
}

Grid aligned_grid(const PartitionScheme& s, std::size_t nodes_per_unit) {
  const double L = s.interval.length();
  std::size_t units = 0;
  switch (s.kind) {
    case PartitionKind::UpperW0: units = 2 * static_cast<std::size_t>(s.n); break;
    case PartitionKind::UpperWa: units = 2 * static_cast<std::size_t>(s.n) - 1; break;
    case PartitionKind::LowerUniform: units = static_cast<std::size_t>(s.n); break;
  }
  const double density = static_cast<double>(resolve_density(nodes_per_unit));
  const std::size_t per_unit = std::max<std::size_t>(4, round_up_even(density * L / static_cast<double>(units)));
  return Grid(s.interval, units * per_unit + 1);
}

std::vector<std::size_t> breakpoint_nodes(const PartitionScheme& s, const Grid& grid) {
  if (!(grid.interval() == s.interval)) throw std::invalid_argument("grid and partition intervals differ");
  std::vector<std::size_t> idx;
  const double h = grid.spacing();
  for (double x : s.breakpoints) {
    const double r = (x - s.interval.a()) / h;
    const auto k = static_cast<std::size_t>(std::llround(r));
    if (std::abs(r - static_cast<double>(k)) > 1e-6 || k >= grid.size())
      throw std::invalid_argument("partition breakpoint is not a grid node");
    idx.push_back(k);
  }
  return idx;
}

namespace {

// Value of the cell interpolant at node j of cell c (closed cell).
struct CellInterpolant {
  const GridFunction& f;
  const PartitionScheme& s;
  const std::vector<std::size_t>& nodes;

  double operator()(std::size_t c, std::size_t j) const {
    const std::size_t last = s.cell_count() - 1;
    if (c == 0) return f.front();
    if (c == last && s.kind == PartitionKind::UpperW0) return f.back();
    const std::size_t lo = nodes[c];
    const std::size_t hi = nodes[c + 1];
    const double t = static_cast<double>(j - lo) / static_cast<double>(hi - lo);
    return (1.0 - t) * f[lo] + t * f[hi];
  }
};

void require_upper(const PartitionScheme& s) {
  if (s.kind == PartitionKind::LowerUniform) throw std::invalid_argument("interpolation needs an upper partition");
}

}  // namespace

GridFunction interpolation_K(const GridFunction& f, const PartitionScheme& s) {
  require_upper(s);
  const auto nodes = breakpoint_nodes(s, f.grid());
  const CellInterpolant K{f, s, nodes};
  std::vector<double> v(f.size());
  v[0] = K(0, 0);
  for (std::size_t c = 0; c < s.cell_count(); ++c)
    for (std::size_t j = nodes[c] + 1; j <= nodes[c + 1]; ++j) v[j] = K(c, j);
  return GridFunction(f.grid(), std::move(v));
}

double interpolation_error_pow(const GridFunction& f, const PartitionScheme& s, double p) {
  require_upper(s);
  const auto nodes = breakpoint_nodes(s, f.grid());
  const CellInterpolant K{f, s, nodes};
  double total = 0.0;
  std::vector<double> err;
  for (std::size_t c = 0; c < s.cell_count(); ++c) {
    err.clear();
    for (std::size_t j = nodes[c]; j <= nodes[c + 1]; ++j) err.push_back(f[j] - K(c, j));
    total += lp_norm_pow(err, f.grid().spacing(), p);
  }
  return total;
}

double upper_bound_value(TargetOperator target, const Interval& I, int n, double p, double b01) {
  require_exponent(p);
  require_n(n, 1);
  const double L = I.length();
  const double d = scheme_target(target) == TargetOperator::E_full ? n : n - 0.5;
  return L * L / (d * d) * b01;
}

double lower_bound_value(TargetOperator target, const Interval& I, int n, double b01) {
  require_n(n, scheme_target(target) == TargetOperator::E_full ? 2 : 1);
  const double L = I.length();
  return L * L / (static_cast<double>(n) * n) * b01;
}

double unit_b_constant(double p, std::size_t nodes_per_unit) {
  static std::mutex mu;
  static std::map<std::pair<double, std::size_t>, double> cache;
  const std::size_t density = resolve_density(nodes_per_unit);
  const std::lock_guard lock(mu);
  const auto key = std::make_pair(p, density);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const Interval unit(0.0, 1.0);
  const double v = b_constant(p, unit, Grid::with_density(unit, density), 1e-10).value;
  cache.emplace(key, v);
  return v;
}

BoundCertificate certify_upper(TargetOperator target, const Interval& I, int n, double p, int trials,
                               std::uint64_t seed, const CertifyOptions& opts) {
  if (trials < 1) throw std::invalid_argument("certificate needs at least one trial");
  const double b01 = opts.b01 ? *opts.b01 : unit_b_constant(p, opts.nodes_per_unit);
  const double bound = upper_bound_value(target, I, n, p, b01);
  const PartitionScheme scheme = partition_upper(target, I, n);
  const Grid grid = aligned_grid(scheme, opts.nodes_per_unit);
  const bool clamp_both = scheme_target(target) == TargetOperator::E_full;
  const std::size_t m = grid.size();

  std::vector<double> s(m);
  for (std::size_t i = 0; i < m; ++i) s[i] = static_cast<double>(i) / static_cast<double>(m - 1);

  // Value and slope at b of the double integrals of 1 and s: the 2x2 system
  // that removes u(b) and u'(b) from a draw.
  const auto one = double_integral(GridFunction(grid, std::vector<double>(m, 1.0)), 0.0, 0.0);
  const auto lin = double_integral(GridFunction(grid, s), 0.0, 0.0);
  const double m00 = one.value.back(), m01 = lin.value.back();
  const double m10 = one.slope.back(), m11 = lin.slope.back();
  const double det = m00 * m11 - m01 * m10;

  constexpr double kPi = 3.14159265358979323846;
  auto trial = [&](int t) {
    auto rng = trial_engine(seed, t);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> modes_dist(1, 12);
    for (int attempt = 0; attempt < 100; ++attempt) {
      const int modes = modes_dist(rng);
      std::vector<double> a(static_cast<std::size_t>(modes) + 1), b(static_cast<std::size_t>(modes) + 1);
      for (int k = 0; k <= modes; ++k) {
        a[static_cast<std::size_t>(k)] = normal(rng);
        b[static_cast<std::size_t>(k)] = normal(rng);
      }
      std::vector<double> g(m);
      for (std::size_t i = 0; i < m; ++i) {
        double v = a[0];
        for (int k = 1; k <= modes; ++k)
          v += a[static_cast<std::size_t>(k)] * std::cos(k * kPi * s[i]) +
               b[static_cast<std::size_t>(k)] * std::sin(k * kPi * s[i]);
        g[i] = v;
      }
      if (clamp_both) {
        const auto raw = double_integral(GridFunction(grid, g), 0.0, 0.0);
        const double rv = raw.value.back(), rs = raw.slope.back();
        const double c0 = (rv * m11 - m01 * rs) / det;
        const double c1 = (m00 * rs - m10 * rv) / det;
        for (std::size_t i = 0; i < m; ++i) g[i] -= c0 + c1 * s[i];
      }
      const GridFunction curvature(grid, std::move(g));
      const double den = lp_norm(curvature, p);
      if (den < 1e-12) continue;
      const GridFunction f = second_antiderivative(curvature, 0.0, 0.0);
      return std::pow(interpolation_error_pow(f, scheme, p), 1.0 / p) / den;
    }
    throw std::runtime_error("upper certificate: repeated degenerate draws");
  };

  const auto ratios = run_trials(trials, trial);
  const double worst = *std::max_element(ratios.begin(), ratios.end());
  return {target, BoundSide::Upper, n, p, bound, trials, seed, worst, (bound - worst) / bound, opts.tolerance,
          worst <= bound * (1.0 + opts.tolerance)};
}

double upper_tightness_witness(TargetOperator target, const Interval& I, int n, double p,
                               std::size_t nodes_per_unit) {
  const PartitionScheme scheme = partition_upper(target, I, n);
  if (scheme.cell_count() < (scheme.kind == PartitionKind::UpperW0 ? 3u : 2u))
    throw std::invalid_argument("tightness witness needs an interior cell");
  const Grid grid = aligned_grid(scheme, nodes_per_unit);
  const auto nodes = breakpoint_nodes(scheme, grid);
  const std::size_t lo = nodes[1];
  const std::size_t hi = nodes[2];
  const Grid cell(Interval(grid.node(lo), grid.node(hi)), hi - lo + 1);
  const ExtremalSolution sol = solve(ExtremalKind::J0, p, cell, SolverOptions{1e-10, 10000});

  std::vector<double> f(grid.size(), 0.0);
  for (std::size_t j = lo; j <= hi; ++j) f[j] = sol.extremal[j - lo];
  const double err = std::pow(interpolation_error_pow(GridFunction(grid, std::move(f)), scheme, p), 1.0 / p);
  return err / lp_norm(sol.curvature, p);
}

BernsteinSubspace::BernsteinSubspace(TargetOperator target, const Interval& I, int n, double p,
                                     std::size_t nodes_per_unit)
    : scheme_(partition_lower(target, I, n)), p_(p), grid_(I, 5) {
  const double L = I.length();
  const double ell = L / n;
  const double density = static_cast<double>(resolve_density(nodes_per_unit));
  // Half-cell node count of the odd-extended profile; at least 257.
  auto half = static_cast<std::size_t>(std::ceil(0.5 * density * ell)) + 1;
  half = std::max<std::size_t>(half, 257);
  if (half % 2 == 0) ++half;

  const Interval unit(0.0, 1.0);
  const ExtremalSolution ja = solve(ExtremalKind::Ja, p, Grid(unit, half), SolverOptions{1e-10, 10000});
  const GridFunction shape = odd_extension(ja);
  const GridFunction shape_curv = odd_reflect(ja.curvature);
  const double curv_scale = 4.0 / (ell * ell);

  const std::size_t per_cell = shape.size() - 1;
  grid_ = Grid(I, static_cast<std::size_t>(n) * per_cell + 1);
  for (int i = 0; i <= n; ++i) breaks_.push_back(static_cast<std::size_t>(i) * per_cell);

  double norm_scale = 0.0;
  for (int i = 0; i < n; ++i) {
    const Interval cell(scheme_.breakpoints[static_cast<std::size_t>(i)],
                        scheme_.breakpoints[static_cast<std::size_t>(i) + 1]);
    GridFunction curv = rescale(shape_curv, cell) * curv_scale;
    if (i == 0) norm_scale = 1.0 / lp_norm(curv, p);
    curvatures_.push_back(curv * norm_scale);
    profiles_.push_back(rescale(shape, cell) * norm_scale);
  }

  const std::size_t nn = static_cast<std::size_t>(n);
  const bool pinned = scheme_target(target) == TargetOperator::E_full;
  const std::size_t dim = pinned ? nn - 1 : nn;
  for (std::size_t j = 0; j < dim; ++j) {
    std::vector<double> e(dim, 0.0);
    e[j] = 1.0;
    basis_.push_back(glue(cell_coefficients(e)));
  }
}

std::vector<double> BernsteinSubspace::cell_coefficients(std::span<const double> free) const {
  const std::size_t n = profiles_.size();
  const bool pinned = scheme_target(scheme_.target) == TargetOperator::E_full;
  if (free.size() != (pinned ? n - 1 : n)) throw std::invalid_argument("wrong coefficient count for the subspace");
  std::vector<double> alpha(free.begin(), free.end());
  if (pinned) {
    // Every cell contributes the same increment, so h(b) = 0 forces α_n = -Σ α_i.
    double s = 0.0;
    for (double x : free) s += x;
    alpha.push_back(-s);
  }
  return alpha;
}

GridFunction BernsteinSubspace::glue(std::span<const double> alpha) const {
  if (alpha.size() != profiles_.size()) throw std::invalid_argument("one coefficient per cell expected");
  std::vector<double> h(grid_.size());
  double start = 0.0;
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    const GridFunction& f = profiles_[i];
    for (std::size_t k = 0; k < f.size(); ++k) h[breaks_[i] + k] = start + alpha[i] * (f[k] - f.front());
    start += alpha[i] * (f.back() - f.front());
  }
  return GridFunction(grid_, std::move(h));
}

double BernsteinSubspace::curvature_pow(std::span<const double> alpha) const {
  double den = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    den += std::pow(std::abs(alpha[i]), p_) * lp_norm_pow(curvatures_[i], p_);
  if (!(den > 0.0)) throw std::invalid_argument("zero coefficient vector");
  return den;
}

double BernsteinSubspace::ratio(std::span<const double> alpha) const {
  const GridFunction h = glue(alpha);
  const auto v = h.values();
  double num = 0.0;
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
    num += lp_norm_pow(v.subspan(breaks_[i], breaks_[i + 1] - breaks_[i] + 1), grid_.spacing(), p_);
  return std::pow(num / curvature_pow(alpha), 1.0 / p_);
}

double BernsteinSubspace::reduced_ratio(std::span<const double> alpha) const {
  const GridFunction h = glue(alpha);
  const auto v = h.values();
  double num = 0.0;
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    const auto part = v.subspan(breaks_[i], breaks_[i + 1] - breaks_[i] + 1);
    const GridFunction local(profiles_[i].grid(), std::vector<double>(part.begin(), part.end()));
    num += std::pow(best_constant_shift(local, p_).min_norm, p_);
  }
  return std::pow(num / curvature_pow(alpha), 1.0 / p_);
}

BernsteinSubspace bernstein_subspace(TargetOperator target, const Interval& I, int n, double p,
                                     std::size_t nodes_per_unit) {
  return BernsteinSubspace(target, I, n, p, nodes_per_unit);
}

BoundCertificate certify_lower(TargetOperator target, const Interval& I, int n, double p, int trials,
                               std::uint64_t seed, const CertifyOptions& opts) {
  if (trials < 1) throw std::invalid_argument("certificate needs at least one trial");
  const double b01 = opts.b01 ? *opts.b01 : unit_b_constant(p, opts.nodes_per_unit);
  const double bound = lower_bound_value(target, I, n, b01);
  const BernsteinSubspace H(target, I, n, p, opts.nodes_per_unit);

  auto trial = [&](int t) {
    auto rng = trial_engine(seed, t);
    std::normal_distribution<double> normal;
    std::vector<double> free(H.dimension());
    double norm = 0.0;
    while (!(norm > 0.0)) {
      norm = 0.0;
      for (double& x : free) {
        x = normal(rng);
        norm += x * x;
      }
    }
    norm = std::sqrt(norm);
    for (double& x : free) x /= norm;
    return H.ratio(H.cell_coefficients(free));
  };

  const auto ratios = run_trials(trials, trial);
  const double worst = *std::min_element(ratios.begin(), ratios.end());
  return {target, BoundSide::Lower, n, p, bound, trials, seed, worst, (worst - bound) / bound, opts.tolerance,
          worst >= bound * (1.0 - opts.tolerance)};
}

SNumberTable snumber_table(TargetOperator target, const Interval& I, double p, int n_min, int n_max, double b01,
                           std::span<const double> oracle) {
  require_exponent(p);
  if (n_min < 2) throw std::invalid_argument("table rows start at n = 2");
  if (n_max < n_min) throw std::invalid_argument("empty n range");
  const double L = I.length();
  const bool full = scheme_target(target) == TargetOperator::E_full;
  SNumberTable table{target, p, I, b01, {}};
  for (int n = n_min; n <= n_max; ++n) {
    const double lo = full ? n + 1.0 : n;
    const double hi = full ? n - 1.0 : n - 1.5;
    SNumberRow row{n, L * L / (lo * lo) * b01, L * L / (hi * hi) * b01, std::nullopt, std::nullopt};
    if (static_cast<std::size_t>(n) <= oracle.size()) {
      row.oracle = oracle[static_cast<std::size_t>(n) - 1];
      row.n2_oracle = static_cast<double>(n) * n * *row.oracle;
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace snumbers
