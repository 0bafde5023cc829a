#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

namespace exeplan::testing {

/// Brute-force minimum of the soft-margin dual
///   min 1/2 a'Qa - 1'a   s.t. 0 <= a <= C, y'a = 0,   Q_ij = y_i y_j x_i.x_j
/// by visiting every face of the box: each multiplier is pinned at 0, pinned
/// at C, or free. On a face the stationarity conditions with the equality
/// multiplier form a linear system; faces whose system has an exact solution
/// inside the box are candidates, and the best candidate is the optimum.
/// Feasible for n <= 10 (3^10 faces).
inline double brute_force_svm_dual(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double c) {
  const auto n = static_cast<int>(x.rows());
  const Eigen::MatrixXd k = x * x.transpose();
  const Eigen::MatrixXd q = (y * y.transpose()).cwiseProduct(k);
  auto objective = [&](const Eigen::VectorXd& a) { return 0.5 * a.dot(q * a) - a.sum(); };

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> state(static_cast<std::size_t>(n), 0);  // 0 = at zero, 1 = at C, 2 = free
  long total = 1;
  for (int i = 0; i < n; ++i) total *= 3;

  for (long code = 0; code < total; ++code) {
    long rest = code;
    std::vector<int> free_idx;
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      state[static_cast<std::size_t>(i)] = static_cast<int>(rest % 3);
      rest /= 3;
      if (state[static_cast<std::size_t>(i)] == 1) a[i] = c;
      if (state[static_cast<std::size_t>(i)] == 2) free_idx.push_back(i);
    }
    const auto m = static_cast<int>(free_idx.size());
    if (m == 0) {
      if (std::abs(y.dot(a)) < 1e-12) best = std::min(best, objective(a));
      continue;
    }
    // unknowns: a_F (m) and nu; rows: Q_FF a_F + nu y_F = 1 - Q_FX a_X, y_F' a_F = -y_X' a_X
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    const Eigen::VectorXd qa_fixed = q * a;
    for (int r = 0; r < m; ++r) {
      const int i = free_idx[static_cast<std::size_t>(r)];
      for (int s = 0; s < m; ++s) lhs(r, s) = q(i, free_idx[static_cast<std::size_t>(s)]);
      lhs(r, m) = y[i];
      lhs(m, r) = y[i];
      rhs[r] = 1.0 - qa_fixed[i];
    }
    rhs[m] = -y.dot(a);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(lhs);
    const Eigen::VectorXd sol = cod.solve(rhs);
    if ((lhs * sol - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) continue;
    bool inside = true;
    for (int r = 0; r < m; ++r) {
      const double v = sol[r];
      if (v < -1e-12 || v > c + 1e-12) {
        inside = false;
        break;
      }
      a[free_idx[static_cast<std::size_t>(r)]] = std::clamp(v, 0.0, c);
    }
    if (inside) best = std::min(best, objective(a));
  }
  return best;
}

}  // namespace exeplan::testing
