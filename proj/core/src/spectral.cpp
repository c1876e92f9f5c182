#include "annealot/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <string>

#include "annealot/cost_io.hpp"
#include "annealot/error.hpp"
#include "annealot/random.hpp"

namespace annealot {

namespace {

using CMatrix = Eigen::MatrixXcd;

constexpr double kSingularEigenvalue = 1e-12;

Vector scaled_a(const TransportSolution& sol) { return sol.f / sol.epsilon; }
Vector scaled_b(const TransportSolution& sol) { return sol.g / sol.epsilon; }

Matrix form_plan(const Vector& a, const Matrix& L, const Vector& b) {
  const auto n = L.rows();
  Matrix P(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) P(i, j) = std::exp(a[i] + L(i, j) + b[j]);
  return P;
}

// Conditionals of one balancing round evaluated at (a, b).
void conditionals(const CostMatrix& C, double epsilon, const Vector& b, Matrix& R, Matrix& Q) {
  const Matrix L = -C.entries / epsilon;
  const auto n = L.rows();
  const Vector row_lse = row_logsumexp(L, b);
  const Vector a1 = C.row_marginal.array().log().matrix() - row_lse;
  const Vector col_lse = col_logsumexp(L, a1);
  R.resize(n, n);
  Q.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      R(i, j) = std::exp(L(i, j) + b[j] - row_lse[i]);
      Q(i, j) = std::exp(a1[i] + L(i, j) - col_lse[j]);
    }
}

Matrix jacobian_from_conditionals(const Matrix& R, const Matrix& Q) {
  const auto n = R.rows();
  const Matrix U = sum_zero_basis(static_cast<int>(n));
  Matrix J = Matrix::Zero(2 * n - 1, 2 * n - 1);
  J.block(0, n - 1, n - 1, n) = -U.transpose() * R;
  const Eigen::RowVectorXd colsum_R = R.colwise().sum() / static_cast<double>(n);
  Matrix M = Q.transpose() * R;
  M.rowwise() -= colsum_R;
  J.block(n - 1, n - 1, n, n) = M;
  return J;
}

// (A + v v^T) with v = (1, -1)/sqrt(2n) removes the gauge null direction.
Vector solve_block_system(const Matrix& plan, const Vector& rhs) {
  const auto n = plan.rows();
  Matrix A = block_matrix(plan);
  Vector v(2 * n);
  v.head(n).setOnes();
  v.tail(n).setConstant(-1.0);
  v /= std::sqrt(2.0 * static_cast<double>(n));
  A += v * v.transpose();
  Eigen::LDLT<Matrix> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw SingularSystem("block system factorization failed");
  Vector x = ldlt.solve(rhs);
  if (!x.allFinite()) throw NumericalFailure("block system solve produced non-finite values");
  return x;
}

Vector gauge_project(const Vector& a, const Vector& b) {
  const auto n = a.size();
  const double s = a.mean();
  const Matrix U = sum_zero_basis(static_cast<int>(n));
  Vector z(2 * n - 1);
  z.head(n - 1) = U.transpose() * (a.array() - s).matrix();
  z.tail(n) = (b.array() + s).matrix();
  return z;
}

double sigma_max(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  if (M.rows() <= M.cols()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(M * M.transpose(), Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(M.transpose() * M, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

ActiveSupport detect_active_support(const TransportSolution& sol, double eta) {
  if (!(eta > 0.0)) throw InvalidInput("eta must be positive");
  const int n = sol.n();
  ActiveSupport s;
  s.eta = eta;
  std::set<int> rows, cols;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double p = sol.plan(i, j);
      if (p >= eta) {
        s.indices.emplace_back(i, j);
        rows.insert(i);
        cols.insert(j);
      } else {
        s.tau = std::max(s.tau, p);
      }
    }
  if (s.indices.empty()) throw NoSeparation("no plan entry reaches eta = " + format_real(eta));
  if (eta <= 2.0 * s.tau)
    throw NoSeparation("eta = " + format_real(eta) + " is not separated from off-support mass " + format_real(s.tau));
  s.active_rows.assign(rows.begin(), rows.end());
  s.active_cols.assign(cols.begin(), cols.end());
  return s;
}

ActiveSupport detect_active_support(const TransportSolution& sol) {
  return detect_active_support(sol, default_eta(sol.n()));
}

ActiveSupport full_support(int n) {
  ActiveSupport s;
  for (int i = 0; i < n; ++i) {
    s.active_rows.push_back(i);
    s.active_cols.push_back(i);
    for (int j = 0; j < n; ++j) s.indices.emplace_back(i, j);
  }
  return s;
}

Matrix block_matrix(const Matrix& plan) {
  const auto n = plan.rows();
  Matrix A = Matrix::Zero(2 * n, 2 * n);
  A.topLeftCorner(n, n) = plan.rowwise().sum().asDiagonal();
  A.bottomRightCorner(n, n) = plan.colwise().sum().transpose().asDiagonal();
  A.topRightCorner(n, n) = plan;
  A.bottomLeftCorner(n, n) = plan.transpose();
  return A;
}

Matrix sum_zero_basis(int n) {
  Matrix U = Matrix::Zero(n, std::max(0, n - 1));
  for (int k = 1; k < n; ++k) {
    const double s = std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) U(i, k - 1) = 1.0 / s;
    U(k, k - 1) = -static_cast<double>(k) / s;
  }
  return U;
}

BlockOperator build_block_operator(const TransportSolution& sol, const ActiveSupport& support) {
  BlockOperator op;
  op.matrix = block_matrix(sol.plan);
  const Vector r = sol.plan.rowwise().sum();
  const Vector c = sol.plan.colwise().sum().transpose();
  const auto ni = static_cast<Eigen::Index>(support.active_rows.size());
  const auto nj = static_cast<Eigen::Index>(support.active_cols.size());
  Matrix sub = Matrix::Zero(ni + nj, ni + nj);
  for (Eigen::Index p = 0; p < ni; ++p) {
    const int i = support.active_rows[static_cast<std::size_t>(p)];
    sub(p, p) = r[i];
    for (Eigen::Index q = 0; q < nj; ++q) {
      const int j = support.active_cols[static_cast<std::size_t>(q)];
      sub(p, ni + q) = sol.plan(i, j);
      sub(ni + q, p) = sol.plan(i, j);
    }
  }
  for (Eigen::Index q = 0; q < nj; ++q) sub(ni + q, ni + q) = c[support.active_cols[static_cast<std::size_t>(q)]];

  Matrix B = Matrix::Zero(ni + nj, std::max<Eigen::Index>(0, ni - 1) + std::max<Eigen::Index>(0, nj - 1));
  if (ni > 1) B.block(0, 0, ni, ni - 1) = sum_zero_basis(static_cast<int>(ni));
  if (nj > 1) B.block(ni, std::max<Eigen::Index>(0, ni - 1), nj, nj - 1) = sum_zero_basis(static_cast<int>(nj));
  op.reduced = B.transpose() * sub * B;
  if (op.reduced.rows() == 0) throw SingularSystem("reduced block operator is empty");
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.reduced, Eigen::EigenvaluesOnly);
  op.min_eigenvalue = es.eigenvalues().minCoeff();
  if (op.min_eigenvalue <= kSingularEigenvalue)
    throw SingularSystem("reduced block operator has minimum eigenvalue " + format_real(op.min_eigenvalue));
  return op;
}

std::pair<Vector, Vector> balance_round(const CostMatrix& C, double epsilon, const Vector& a, const Vector& b) {
  (void)a;  // the row update overwrites a
  const Matrix L = -C.entries / epsilon;
  Vector a1 = C.row_marginal.array().log().matrix() - row_logsumexp(L, b);
  Vector b1 = C.col_marginal.array().log().matrix() - col_logsumexp(L, a1);
  const double s = a1.mean();
  a1.array() -= s;
  b1.array() += s;
  return {a1, b1};
}

Matrix analytic_jacobian(const Matrix& plan) {
  const Vector r = plan.rowwise().sum();
  const Vector c = plan.colwise().sum().transpose();
  const Matrix R = r.cwiseInverse().asDiagonal() * plan;
  const Matrix Q = plan * c.cwiseInverse().asDiagonal();
  return jacobian_from_conditionals(R, Q);
}

Matrix analytic_jacobian(const TransportSolution& sol, const CostMatrix& C) {
  Matrix R, Q;
  conditionals(C, sol.epsilon, scaled_b(sol), R, Q);
  return jacobian_from_conditionals(R, Q);
}

Matrix finite_difference_jacobian(const TransportSolution& sol, const CostMatrix& C, double h) {
  const int n = sol.n();
  const Matrix U = sum_zero_basis(n);
  const Vector a = scaled_a(sol);
  const Vector b = scaled_b(sol);
  const int dim = 2 * n - 1;
  Matrix J(dim, dim);
  for (int k = 0; k < dim; ++k) {
    Vector da = Vector::Zero(n);
    Vector db = Vector::Zero(n);
    if (k < n - 1)
      da = U.col(k);
    else
      db[k - (n - 1)] = 1.0;
    const auto [ap, bp] = balance_round(C, sol.epsilon, a + h * da, b + h * db);
    const auto [am, bm] = balance_round(C, sol.epsilon, a - h * da, b - h * db);
    J.col(k) = (gauge_project(ap, bp) - gauge_project(am, bm)) / (2.0 * h);
  }
  return J;
}

double jacobian_relative_error(const Matrix& analytic, const Matrix& fd) {
  return (analytic - fd).norm() / std::max(analytic.norm(), 1.0);
}

Matrix sinkhorn_jacobian(const TransportSolution& sol, const CostMatrix& C) {
  Matrix J = analytic_jacobian(sol, C);
  const Matrix fd = finite_difference_jacobian(sol, C);
  const double err = jacobian_relative_error(J, fd);
  if (!(err <= kJacobianCrossCheckTolerance))
    throw InconsistentJacobian("analytic and finite-difference Jacobians differ by " + format_real(err));
  return J;
}

SpectrumSummary summarize_spectrum(const Matrix& J) {
  SpectrumSummary s;
  const auto d = J.rows();
  Eigen::EigenSolver<Matrix> es(J, true);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  const Eigen::VectorXcd lambda = es.eigenvalues();
  s.eigenvalues.assign(lambda.data(), lambda.data() + lambda.size());
  s.dist_one_spectrum = std::numeric_limits<double>::infinity();
  for (const auto& l : s.eigenvalues) {
    s.spectral_radius = std::max(s.spectral_radius, std::abs(l));
    s.dist_one_spectrum = std::min(s.dist_one_spectrum, std::abs(1.0 - l));
  }
  s.spectral_gap = 1.0 - s.spectral_radius;

  Eigen::JacobiSVD<Matrix> svd(Matrix::Identity(d, d) - J);
  const double smin = svd.singularValues()(d - 1);
  s.resolvent_norm = smin > 0.0 ? 1.0 / smin : std::numeric_limits<double>::infinity();

  CMatrix V = es.eigenvectors();
  for (Eigen::Index k = 0; k < V.cols(); ++k) {
    const double nk = V.col(k).norm();
    if (nk > 0.0) V.col(k) /= nk;
  }
  Eigen::JacobiSVD<CMatrix> vsvd(V);
  const auto& sv = vsvd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  s.modal_condition = cond > kModalConditionCap ? std::numeric_limits<double>::infinity() : cond;
  return s;
}

Matrix plan_eps_derivative(const TransportSolution& sol, const CostMatrix& C) {
  const int n = sol.n();
  const double eps = sol.epsilon;
  const Matrix& P = sol.plan;
  const Vector a = scaled_a(sol);
  const Vector b = scaled_b(sol);
  Matrix logP(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) logP(i, j) = a[i] + b[j] - C.entries(i, j) / eps;
  const Matrix PlogP = P.cwiseProduct(logP);
  Vector rhs(2 * n);
  rhs.head(n) = PlogP.rowwise().sum();
  rhs.tail(n) = PlogP.colwise().sum().transpose();
  const Vector x = solve_block_system(P, rhs);
  Matrix dP(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dP(i, j) = P(i, j) / eps * (x[i] + x[n + j] - logP(i, j));
  return dP;
}

Vector potential_cost_response(const TransportSolution& sol, const CostMatrix& C, const Matrix& E) {
  const int n = sol.n();
  if (E.rows() != n || E.cols() != n || C.n() != n) throw InvalidInput("direction shape does not match the plan");
  const Matrix PE = sol.plan.cwiseProduct(E) / sol.epsilon;
  Vector rhs(2 * n);
  rhs.head(n) = PE.rowwise().sum();
  rhs.tail(n) = PE.colwise().sum().transpose();
  const Vector x = solve_block_system(sol.plan, rhs);
  return gauge_project(x.head(n), x.tail(n));
}

Matrix partial_cost_jacobian(const TransportSolution& sol, const CostMatrix& C) {
  const int n = sol.n();
  const double eps = sol.epsilon;
  Matrix R, Q;
  conditionals(C, eps, scaled_b(sol), R, Q);
  const int m = n * n;
  Matrix Da = Matrix::Zero(n, m);
  Matrix Dcol = Matrix::Zero(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Da(i, i * n + j) = R(i, j) / eps;
      Dcol(j, i * n + j) = Q(i, j) / eps;
    }
  const Matrix Db = Dcol - Q.transpose() * Da;
  const Matrix U = sum_zero_basis(n);
  const Eigen::RowVectorXd mean_a = Da.colwise().sum() / static_cast<double>(n);
  Matrix D(2 * n - 1, m);
  D.topRows(n - 1) = U.transpose() * Da;
  D.bottomRows(n) = Db.rowwise() + mean_a;
  return D;
}

TransportSolution precise_solve(const CostMatrix& C, double epsilon, const SolveConfig& cfg, double tolerance,
                                const TransportSolution* warm_start) {
  TransportSolution sol = sinkhorn_solve(C, epsilon, cfg, warm_start);
  if (sol.marginal_residual <= tolerance) return sol;

  // Newton on the dual: the marginal map has Jacobian block_matrix(P) in (a, b).
  const int n = C.n();
  const Matrix L = -C.entries / epsilon;
  Vector a = scaled_a(sol);
  Vector b = scaled_b(sol);
  Matrix P = sol.plan;
  double res = sol.marginal_residual;
  for (int k = 0; k < 50 && res > tolerance; ++k) {
    Vector F(2 * n);
    F.head(n) = P.rowwise().sum() - C.row_marginal;
    F.tail(n) = P.colwise().sum().transpose() - C.col_marginal;
    const Vector d = solve_block_system(P, -F);
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
      const Vector a1 = a + step * d.head(n);
      const Vector b1 = b + step * d.tail(n);
      const Matrix P1 = form_plan(a1, L, b1);
      const double r1 = marginal_residual(P1, C);
      if (r1 < res) {
        a = a1;
        b = b1;
        P = P1;
        res = r1;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  const double s = a.mean();
  a.array() -= s;
  b.array() += s;
  sol.plan = form_plan(a, L, b);
  sol.f = epsilon * a;
  sol.g = epsilon * b;
  sol.marginal_residual = marginal_residual(sol.plan, C);
  sol.converged = sol.marginal_residual <= cfg.tolerance;
  return sol;
}

double hessian_scale(const CostMatrix& C, const TransportSolution& sol, const SolveConfig& cfg, double relative_step,
                     double tolerance) {
  const double eps = sol.epsilon;
  const double h = eps * relative_step;
  SolveConfig local = cfg;
  local.epsilon_floor = std::min(cfg.epsilon_floor, eps - h);
  const TransportSolution p = precise_solve(C, eps + h, local, tolerance, &sol);
  const TransportSolution m = precise_solve(C, eps - h, local, tolerance, &sol);
  return (p.plan - 2.0 * sol.plan + m.plan).norm() / (h * h);
}

SpectralReport spectral_report(const CostMatrix& C, double epsilon, const SolveConfig& cfg, const ReportOptions& opts) {
  const TransportSolution sol = precise_solve(C, epsilon, cfg, opts.refine_tolerance);
  if (!sol.converged)
    throw NumericalFailure("solve at eps = " + format_real(epsilon) + " did not converge (residual " +
                           format_real(sol.marginal_residual) + ")");
  const int n = C.n();
  SpectralReport rep;
  rep.epsilon = epsilon;

  const Matrix J = opts.cross_check_jacobian ? sinkhorn_jacobian(sol, C) : analytic_jacobian(sol, C);
  const SpectrumSummary spectrum = summarize_spectrum(J);
  rep.spectral_radius = spectrum.spectral_radius;
  rep.spectral_gap = spectrum.spectral_gap;
  rep.resolvent_norm = spectrum.resolvent_norm;
  rep.dist_one_spectrum = spectrum.dist_one_spectrum;
  rep.modal_condition = spectrum.modal_condition;

  rep.sensitivity_eps_norm = plan_eps_derivative(sol, C).norm();

  ActiveSupport support;
  try {
    support = detect_active_support(sol, opts.eta > 0.0 ? opts.eta : default_eta(n));
    rep.separated = true;
  } catch (const NoSeparation&) {
    support = full_support(n);
  }
  rep.support_size = static_cast<int>(support.indices.size());
  double ds = 0.0;
  for (const auto& [i, j] : support.indices) {
    Matrix E = Matrix::Zero(n, n);
    E(i, j) = 1.0;
    ds = std::max(ds, potential_cost_response(sol, C, E).norm());
  }
  Rng rng(mix_seed(opts.direction_seed, 0xd15ULL));
  for (int k = 0; k < opts.random_directions; ++k) {
    Matrix E(n, n);
    for (Eigen::Index t = 0; t < E.size(); ++t) E.data()[t] = rng.normal();
    E /= E.norm();
    ds = std::max(ds, potential_cost_response(sol, C, E).norm());
  }
  rep.sensitivity_cost_norm = ds;
  rep.partialC_norm = sigma_max(partial_cost_jacobian(sol, C));
  rep.hessian_scale = hessian_scale(C, sol, cfg, opts.hessian_relative_step, opts.refine_tolerance);
  return rep;
}

DualityResult duality_check(const SpectralReport& report) {
  if (!(report.sensitivity_cost_norm > 0.0)) throw InvalidInput("duality check needs a positive cost sensitivity");
  if (!(report.partialC_norm > 0.0)) throw InvalidInput("duality check needs a positive partial cost norm");
  DualityResult r;
  r.slack = report.dist_one_spectrum * report.sensitivity_cost_norm / report.partialC_norm - 1.0;
  r.pass = r.slack <= kDualitySlack;
  return r;
}

double sigma_min_shifted(const Matrix& J, std::complex<double> z) {
  const auto d = J.rows();
  CMatrix M = -J.cast<std::complex<double>>();
  M.diagonal().array() += z;
  Eigen::JacobiSVD<CMatrix> svd(M);
  return svd.singularValues()(d - 1);
}

PseudospectrumGrid pseudospectrum_grid(const Matrix& J, std::pair<double, double> re_range,
                                       std::pair<double, double> im_range, int resolution) {
  if (resolution < 2) throw InvalidInput("pseudospectrum resolution must be at least 2");
  if (J.rows() != J.cols() || J.rows() == 0) throw InvalidInput("pseudospectrum needs a square matrix");
  PseudospectrumGrid g;
  auto axis = [resolution](std::pair<double, double> r) {
    std::vector<double> v(static_cast<std::size_t>(resolution));
    for (int k = 0; k < resolution; ++k)
      v[static_cast<std::size_t>(k)] = r.first + (r.second - r.first) * k / (resolution - 1);
    return v;
  };
  g.re = axis(re_range);
  g.im = axis(im_range);
  g.sigma_min.resize(resolution, resolution);
  for (int k = 0; k < resolution; ++k)
    for (int l = 0; l < resolution; ++l)
      g.sigma_min(k, l) = sigma_min_shifted(J, {g.re[static_cast<std::size_t>(l)], g.im[static_cast<std::size_t>(k)]});
  return g;
}

void write_pseudospectrum_csv(std::ostream& out, const PseudospectrumGrid& grid) {
  out << "re,im,sigma_min\n";
  for (std::size_t k = 0; k < grid.im.size(); ++k)
    for (std::size_t l = 0; l < grid.re.size(); ++l)
      out << format_real(grid.re[l]) << ',' << format_real(grid.im[k]) << ','
          << format_real(grid.sigma_min(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l))) << '\n';
}

std::vector<CostMatrix> jittered_instances(const CostMatrix& C, int seeds, std::uint64_t jitter_seed) {
  if (seeds < 1) throw InvalidInput("seeds must be positive");
  std::vector<CostMatrix> out{C};
  for (int k = 1; k < seeds; ++k) {
    Rng rng(mix_seed(jitter_seed, static_cast<std::uint64_t>(k)));
    CostMatrix Ck = C;
    for (Eigen::Index i = 0; i < Ck.entries.rows(); ++i)
      for (Eigen::Index j = 0; j < Ck.entries.cols(); ++j) Ck.entries(i, j) += 1e-3 * rng.uniform();
    out.push_back(std::move(Ck));
  }
  return out;
}

std::vector<ConstantRow> estimate_constants(const CostMatrix& C, std::span<const double> eps_list, int seeds,
                                            const SolveConfig& cfg, std::uint64_t jitter_seed) {
  const auto inst = jittered_instances(C, seeds, jitter_seed);
  return estimate_constants(std::span<const CostMatrix>(inst), eps_list, cfg);
}

std::vector<ConstantRow> estimate_constants(std::span<const CostMatrix> instances, std::span<const double> eps_list,
                                            const SolveConfig& cfg) {
  if (instances.empty()) throw InvalidInput("estimate_constants needs at least one instance");
  constexpr double kTight = 1e-13;
  std::vector<ConstantRow> rows;
  for (const double eps : eps_list) {
    const CostMatrix& C = instances[0];
    const TransportSolution sol = precise_solve(C, eps, cfg, kTight);
    if (!sol.converged) throw NumericalFailure("solve at eps = " + format_real(eps) + " did not converge");
    ConstantRow row;
    row.eps = eps;
    row.op_norm = sigma_max(sol.plan);
    ActiveSupport support;
    try {
      support = detect_active_support(sol);
    } catch (const NoSeparation&) {
      support = full_support(C.n());
    }
    row.C0_est = 1.0 / build_block_operator(sol, support).min_eigenvalue;
    row.dS_de_norm = plan_eps_derivative(sol, C).norm();
    row.K1_est = eps * row.dS_de_norm;
    row.K2_est = eps * eps * hessian_scale(C, sol, cfg, 1e-3, kTight);

    std::vector<double> rho;
    for (std::size_t k = 0; k < instances.size(); ++k) {
      const TransportSolution sk = k == 0 ? sol : precise_solve(instances[k], eps, cfg, kTight);
      rho.push_back(summarize_spectrum(analytic_jacobian(sk, instances[k])).spectral_radius);
    }
    double mean = 0.0;
    for (double v : rho) mean += v;
    mean /= static_cast<double>(rho.size());
    double var = 0.0;
    for (double v : rho) var += (v - mean) * (v - mean);
    var /= static_cast<double>(rho.size());
    row.rho_mean = mean;
    row.rho_std = std::sqrt(var);
    rows.push_back(row);
  }
  return rows;
}

void write_constants_csv(std::ostream& out, std::span<const ConstantRow> rows) {
  out << kConstantsHeader << '\n';
  for (const auto& r : rows) {
    out << format_real(r.eps) << ',' << format_real(r.op_norm) << ',' << format_real(r.C0_est) << ','
        << format_real(r.dS_de_norm) << ',' << format_real(r.K1_est) << ',' << format_real(r.K2_est) << ','
        << format_real(r.rho_mean) << ',' << format_real(r.rho_std) << '\n';
  }
}

}  // namespace annealot
