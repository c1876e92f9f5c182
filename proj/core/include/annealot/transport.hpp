#pragma once

#include <Eigen/Dense>
#include <optional>

namespace annealot {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct CostMatrix {
  Matrix entries;
  Vector row_marginal;
  Vector col_marginal;

  int n() const { return static_cast<int>(entries.rows()); }

  // Uniform marginals 1/n.
  static CostMatrix uniform(Matrix entries);
};

// Throws InvalidInput naming the first offending index.
void validate(const CostMatrix& C);

struct SolveConfig {
  double tolerance = 1e-9;
  int max_iterations = 10000;
  double epsilon_floor = 1e-4;
};

struct TransportSolution {
  Matrix plan;
  Vector f;  // cost units, sum(f) = 0
  Vector g;
  double epsilon = 0.0;
  int iterations = 0;
  double marginal_residual = 0.0;
  bool converged = false;

  int n() const { return static_cast<int>(plan.rows()); }
};

Matrix log_kernel(const CostMatrix& C, double epsilon, double epsilon_floor = SolveConfig{}.epsilon_floor);

// Log-domain Sinkhorn. A non-converged solve returns the last iterate with
// converged = false; NaN potentials throw NumericalFailure.
TransportSolution sinkhorn_solve(const CostMatrix& C, double epsilon, const SolveConfig& cfg = {},
                                 const TransportSolution* warm_start = nullptr);

double plan_entropy(const Matrix& plan);
inline double plan_entropy(const TransportSolution& sol) { return plan_entropy(sol.plan); }

double marginal_residual(const Matrix& plan, const CostMatrix& C);

// Row LSE of M + 1 b^T and column LSE of a 1^T + M, max-shifted.
Vector row_logsumexp(const Matrix& M, const Vector& b);
Vector col_logsumexp(const Matrix& M, const Vector& a);

}  // namespace annealot
