#include "annealot/assignment.hpp"

#include <limits>

#include "annealot/error.hpp"

namespace annealot {

namespace {

constexpr double kTieTolerance = 1e-12;

// best[mask] = max weight assigning rows popcount(mask).. n-1 to the columns
// outside mask. Reconstruction walks rows in order and takes the lowest column
// that still attains the optimum.
std::vector<int> exact_assignment(const Matrix& W) {
  const int n = static_cast<int>(W.rows());
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<double> best(full + 1, -std::numeric_limits<double>::infinity());
  best[full] = 0.0;
  for (std::size_t mask = full; mask-- > 0;) {
    const int row = __builtin_popcountll(mask);
    double v = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (mask & (std::size_t{1} << j)) continue;
      v = std::max(v, W(row, j) + best[mask | (std::size_t{1} << j)]);
    }
    best[mask] = v;
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::size_t mask = 0;
  for (int row = 0; row < n; ++row) {
    for (int j = 0; j < n; ++j) {
      if (mask & (std::size_t{1} << j)) continue;
      const double v = W(row, j) + best[mask | (std::size_t{1} << j)];
      if (v >= best[mask] - kTieTolerance) {
        perm[static_cast<std::size_t>(row)] = j;
        mask |= std::size_t{1} << j;
        break;
      }
    }
  }
  return perm;
}

std::vector<int> greedy_assignment(const Matrix& W) {
  const int n = static_cast<int>(W.rows());
  std::vector<int> perm(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    int arg = -1;
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      if (arg < 0 || W(i, j) > W(i, arg)) arg = j;
    }
    perm[static_cast<std::size_t>(i)] = arg;
    used[static_cast<std::size_t>(arg)] = true;
  }
  return perm;
}

}  // namespace

Assignment round_to_assignment(const Matrix& plan) {
  if (plan.rows() != plan.cols() || plan.rows() < 1) throw InvalidInput("plan must be square and non-empty");
  Assignment out;
  if (plan.rows() <= kExactAssignmentLimit) {
    out.permutation = exact_assignment(plan);
    out.exact_match = true;
  } else {
    out.permutation = greedy_assignment(plan);
  }
  return out;
}

double assignment_weight(const Matrix& plan, const std::vector<int>& permutation) {
  double w = 0.0;
  for (std::size_t i = 0; i < permutation.size(); ++i) w += plan(static_cast<Eigen::Index>(i), permutation[i]);
  return w;
}

double assignment_accuracy(const std::vector<int>& got, const std::vector<int>& reference) {
  if (got.size() != reference.size() || got.empty()) throw InvalidInput("assignment sizes differ");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < got.size(); ++i) hits += got[i] == reference[i];
  return static_cast<double>(hits) / static_cast<double>(got.size());
}

}  // namespace annealot
