#pragma once

// Independent reference computations shared by the tests. Nothing here calls
// into the library's solver or derivative code.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Symmetric 2x2 cost [[0,1],[1,0]] with uniform marginals.
inline double diag_2x2(double eps) { return 0.5 * sigmoid(1.0 / eps); }

// Plain (non-log) scaling iterations, usable while exp(-C/eps) stays normal.
inline Matrix plain_sinkhorn(const Matrix& C, double eps, int iterations) {
  const auto n = C.rows();
  const Matrix K = (-C / eps).array().exp().matrix();
  Vector u = Vector::Ones(n), v = Vector::Ones(n);
  const double m = 1.0 / static_cast<double>(n);
  for (int it = 0; it < iterations; ++it) {
    u = (m / (K * v).array()).matrix();
    v = (m / (K.transpose() * u).array()).matrix();
  }
  return u.asDiagonal() * K * v.asDiagonal();
}

inline std::vector<int> brute_force_assignment(const Matrix& W) {
  const int n = static_cast<int>(W.rows());
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<int> best = p;
  double best_w = -1e300;
  do {
    double w = 0;
    for (int i = 0; i < n; ++i) w += W(i, p[static_cast<std::size_t>(i)]);
    if (w > best_w) {
      best_w = w;
      best = p;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t k = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace oracle
