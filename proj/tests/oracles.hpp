#pragma once

// Independent reference values for the tests. Nothing here calls into the
// library's solvers.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Beam frequencies β_n on (0, 1). Clamped-free: cos β cosh β = -1, root n
/// near (n - 1/2)π. Clamped-clamped: cos β cosh β = 1, root n near (n + 1/2)π.
/// Eigenvalues of u'''' = β⁴ u, so the s-numbers of the embeddings are 1/β².
inline std::vector<double> beam_roots(bool clamped_both, int count) {
  const double pi = std::numbers::pi;
  const double sign = clamped_both ? 1.0 : -1.0;
  // cos β + sign / cosh β avoids overflow of cosh.
  auto f = [sign](double b) { return std::cos(b) - sign / std::cosh(b); };
  std::vector<double> out;
  for (int n = 1; n <= count; ++n) {
    const double c = clamped_both ? (n + 0.5) * pi : (n - 0.5) * pi;
    out.push_back(bisect(f, c - 0.45 * pi, c + 0.45 * pi));
  }
  return out;
}

/// Smallest eigenvalue of u'''' = λu with u = u'' = 0 at 0 and 1, from the
/// square of the second-difference matrix on `m` nodes.
inline double navier_fd_eigenvalue(int m) {
  const int k = m - 2;
  const double h = 1.0 / (m - 1);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    D(i, i) = -2.0 / (h * h);
    if (i + 1 < k) D(i, i + 1) = D(i + 1, i) = 1.0 / (h * h);
  }
  const Eigen::MatrixXd A = D * D;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// J0(0, 1) at p = 2 as λ^{-1/2}; Richardson in h² over two resolutions
/// removes the leading discretization error.
inline double navier_j0_reference() {
  const double coarse = navier_fd_eigenvalue(201), fine = navier_fd_eigenvalue(401);
  const double hc = 1.0 / 200, hf = 1.0 / 400;
  const double lambda = (fine * hc * hc - coarse * hf * hf) / (hc * hc - hf * hf);
  return 1.0 / std::sqrt(lambda);
}

}  // namespace oracle
