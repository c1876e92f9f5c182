#include "annealot/transport.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "annealot/error.hpp"

namespace annealot {

namespace {

std::string idx(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

void check_marginal(const Vector& m, int n, const char* name) {
  if (m.size() != n) throw InvalidInput(std::string(name) + " has length " + std::to_string(m.size()) +
                                        ", expected " + std::to_string(n));
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(m[i]) || m[i] <= 0.0)
      throw InvalidInput(std::string(name) + "[" + std::to_string(i) + "] must be positive and finite");
  }
  if (std::abs(m.sum() - 1.0) > 1e-12) throw InvalidInput(std::string(name) + " does not sum to 1");
}

}  // namespace

CostMatrix CostMatrix::uniform(Matrix entries) {
  const auto n = entries.rows();
  CostMatrix C;
  C.entries = std::move(entries);
  C.row_marginal = Vector::Constant(n, 1.0 / static_cast<double>(n));
  C.col_marginal = C.row_marginal;
  return C;
}

void validate(const CostMatrix& C) {
  const int n = C.n();
  if (n < 2) throw InvalidInput("cost matrix needs n >= 2");
  if (C.entries.cols() != n) throw InvalidInput("cost matrix is not square");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!std::isfinite(C.entries(i, j))) throw InvalidInput("non-finite cost entry at " + idx(i, j));
  check_marginal(C.row_marginal, n, "row_marginal");
  check_marginal(C.col_marginal, n, "col_marginal");
}

Matrix log_kernel(const CostMatrix& C, double epsilon, double epsilon_floor) {
  if (!(epsilon >= epsilon_floor) || !std::isfinite(epsilon))
    throw InvalidInput("epsilon " + std::to_string(epsilon) + " is below the floor " + std::to_string(epsilon_floor));
  for (int i = 0; i < C.entries.rows(); ++i)
    for (int j = 0; j < C.entries.cols(); ++j)
      if (!std::isfinite(C.entries(i, j))) throw InvalidInput("non-finite cost entry at " + idx(i, j));
  return -C.entries / epsilon;
}

Vector row_logsumexp(const Matrix& M, const Vector& b) {
  const auto n = M.rows();
  const auto m = M.cols();
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < m; ++j) mx = std::max(mx, M(i, j) + b[j]);
    double s = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) s += std::exp(M(i, j) + b[j] - mx);
    out[i] = mx + std::log(s);
  }
  return out;
}

Vector col_logsumexp(const Matrix& M, const Vector& a) {
  const auto n = M.rows();
  const auto m = M.cols();
  Vector mx = Vector::Constant(m, -std::numeric_limits<double>::infinity());
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i) mx[j] = std::max(mx[j], a[i] + M(i, j));
  Vector s = Vector::Zero(m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i) s[j] += std::exp(a[i] + M(i, j) - mx[j]);
  return mx.array() + s.array().log();
}

double marginal_residual(const Matrix& plan, const CostMatrix& C) {
  if (plan.rows() != C.n() || plan.cols() != C.n()) throw InvalidInput("plan shape does not match cost");
  return (plan.rowwise().sum() - C.row_marginal).lpNorm<1>() +
         (plan.colwise().sum().transpose() - C.col_marginal).lpNorm<1>();
}

double plan_entropy(const Matrix& plan) {
  double h = 0.0;
  for (Eigen::Index k = 0; k < plan.size(); ++k) {
    const double p = plan.data()[k];
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

TransportSolution sinkhorn_solve(const CostMatrix& C, double epsilon, const SolveConfig& cfg,
                                 const TransportSolution* warm_start) {
  validate(C);
  if (!(cfg.tolerance > 0.0) || !(cfg.epsilon_floor > 0.0) || cfg.max_iterations <= 0)
    throw InvalidInput("invalid solve configuration");
  const Matrix L = log_kernel(C, epsilon, cfg.epsilon_floor);
  const int n = C.n();
  const Vector log_r = C.row_marginal.array().log();
  const Vector log_c = C.col_marginal.array().log();

  // scaled potentials a = f/eps, b = g/eps
  Vector a = Vector::Zero(n);
  Vector b = Vector::Zero(n);
  if (warm_start != nullptr) {
    if (warm_start->n() != n) throw InvalidInput("warm start size does not match cost");
    a = warm_start->f / epsilon;
    b = warm_start->g / epsilon;
  }

  TransportSolution sol;
  sol.epsilon = epsilon;
  Matrix P(n, n);
  auto form_plan = [&] {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) P(i, j) = std::exp(a[i] + L(i, j) + b[j]);
  };

  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  // Check the starting point first so an already balanced warm start costs nothing.
  form_plan();
  residual = marginal_residual(P, C);
  while (!(residual <= cfg.tolerance) && it < cfg.max_iterations) {
    a = log_r - row_logsumexp(L, b);
    b = log_c - col_logsumexp(L, a);
    ++it;
    if (!a.allFinite() || !b.allFinite())
      throw NumericalFailure("non-finite potentials at iteration " + std::to_string(it));
    form_plan();
    residual = marginal_residual(P, C);
  }
  if (std::isnan(residual)) throw NumericalFailure("NaN marginal residual");

  const double s = a.mean();
  a.array() -= s;
  b.array() += s;
  sol.plan = std::move(P);
  sol.f = epsilon * a;
  sol.g = epsilon * b;
  sol.iterations = it;
  sol.marginal_residual = residual;
  sol.converged = residual <= cfg.tolerance;
  return sol;
}

}  // namespace annealot
