#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "annealot/transport.hpp"

namespace annealot {

struct ActiveSupport {
  std::vector<std::pair<int, int>> indices;
  double eta = 0.0;
  double tau = 0.0;
  std::vector<int> active_rows;
  std::vector<int> active_cols;
};

inline double default_eta(int n) { return 0.5 / n; }

// S = {P_ij >= eta}; throws NoSeparation when S is empty or eta <= 2 tau.
ActiveSupport detect_active_support(const TransportSolution& sol, double eta);
ActiveSupport detect_active_support(const TransportSolution& sol);
// Every entry, used where the plan is too diffuse to separate.
ActiveSupport full_support(int n);

struct BlockOperator {
  Matrix matrix;   // 2n x 2n
  Matrix reduced;  // restricted to (I_S, J_S), centred in each block
  double min_eigenvalue = 0.0;
};

// [[diag(P1), P], [P^T, diag(P^T 1)]]
Matrix block_matrix(const Matrix& plan);
// Throws SingularSystem when the reduced minimum eigenvalue is <= 1e-12.
BlockOperator build_block_operator(const TransportSolution& sol, const ActiveSupport& support);

// n x (n-1) orthonormal basis of the sum-zero subspace (Helmert columns).
Matrix sum_zero_basis(int n);

// One row-then-column balancing round in scaled potentials (a, b) = (f, g)/eps,
// followed by the gauge fix sum(a) = 0.
std::pair<Vector, Vector> balance_round(const CostMatrix& C, double epsilon, const Vector& a, const Vector& b);

// Jacobian of the balancing round on the gauge-fixed (2n-1)-dim space, from the
// row- and column-conditional matrices of the plan.
Matrix analytic_jacobian(const Matrix& plan);
// Same, with the conditionals evaluated from the potentials and kernel.
Matrix analytic_jacobian(const TransportSolution& sol, const CostMatrix& C);
Matrix finite_difference_jacobian(const TransportSolution& sol, const CostMatrix& C, double h = 1e-6);

inline constexpr double kJacobianCrossCheckTolerance = 1e-4;
double jacobian_relative_error(const Matrix& analytic, const Matrix& fd);
// Analytic Jacobian, cross-checked against central differences of balance_round.
Matrix sinkhorn_jacobian(const TransportSolution& sol, const CostMatrix& C);

inline constexpr double kModalConditionCap = 1e12;

struct SpectrumSummary {
  std::vector<std::complex<double>> eigenvalues;
  double spectral_radius = 0.0;
  double spectral_gap = 0.0;
  double resolvent_norm = 0.0;      // 1 / sigma_min(I - J)
  double dist_one_spectrum = 0.0;   // min |1 - lambda|
  double modal_condition = 0.0;     // +inf past kModalConditionCap
};

SpectrumSummary summarize_spectrum(const Matrix& J);

// dP/deps through the implicit-differentiation system.
Matrix plan_eps_derivative(const TransportSolution& sol, const CostMatrix& C);
// Gauge-fixed potential response z = (da, db) in (2n-1) coordinates to a cost direction E.
Vector potential_cost_response(const TransportSolution& sol, const CostMatrix& C, const Matrix& E);
// d(balance_round)/dC on the gauge-fixed space, (2n-1) x n^2, column index i*n + j.
Matrix partial_cost_jacobian(const TransportSolution& sol, const CostMatrix& C);

struct ReportOptions {
  bool cross_check_jacobian = true;
  int random_directions = 8;
  std::uint64_t direction_seed = 0;
  double eta = 0.0;                  // 0 selects 0.5/n
  double hessian_relative_step = 1e-3;
  double refine_tolerance = 1e-13;   // solves used for finite differences
};

struct SpectralReport {
  double epsilon = 0.0;
  double spectral_radius = 0.0;
  double spectral_gap = 0.0;
  double resolvent_norm = 0.0;
  double dist_one_spectrum = 0.0;
  double modal_condition = 0.0;
  double sensitivity_eps_norm = 0.0;
  double sensitivity_cost_norm = 0.0;
  double hessian_scale = 0.0;
  double partialC_norm = 0.0;
  bool separated = false;  // support detection succeeded at the chosen eta
  int support_size = 0;
};

// Solve tightly (warm start optional) for use in finite differences.
TransportSolution precise_solve(const CostMatrix& C, double epsilon, const SolveConfig& cfg, double tolerance,
                                const TransportSolution* warm_start = nullptr);

double hessian_scale(const CostMatrix& C, const TransportSolution& sol, const SolveConfig& cfg,
                     double relative_step = 1e-3, double tolerance = 1e-13);

SpectralReport spectral_report(const CostMatrix& C, double epsilon, const SolveConfig& cfg = {},
                               const ReportOptions& opts = {});

struct DualityResult {
  bool pass = false;
  double slack = 0.0;  // dist * ||DS|| / ||d_C Phi|| - 1
};
inline constexpr double kDualitySlack = 0.05;
DualityResult duality_check(const SpectralReport& report);

struct PseudospectrumGrid {
  std::vector<double> re;
  std::vector<double> im;
  Matrix sigma_min;  // sigma_min(k, l) at z = re[l] + i im[k]
};

PseudospectrumGrid pseudospectrum_grid(const Matrix& J, std::pair<double, double> re_range,
                                       std::pair<double, double> im_range, int resolution);
double sigma_min_shifted(const Matrix& J, std::complex<double> z);
void write_pseudospectrum_csv(std::ostream& out, const PseudospectrumGrid& grid);

struct ConstantRow {
  double eps = 0.0;
  double op_norm = 0.0;
  double C0_est = 0.0;
  double dS_de_norm = 0.0;
  double K1_est = 0.0;
  double K2_est = 0.0;
  double rho_mean = 0.0;
  double rho_std = 0.0;
};

inline constexpr const char* kConstantsHeader = "eps,op_norm,C0_est,dS_de_norm,K1_est,K2_est,rho_mean,rho_std";

// Instance 0 is C; instances 1..seeds-1 add a fresh U(0, 1e-3) jitter drawn from
// mix_seed(jitter_seed, k).
std::vector<CostMatrix> jittered_instances(const CostMatrix& C, int seeds, std::uint64_t jitter_seed = 0);

std::vector<ConstantRow> estimate_constants(const CostMatrix& C, std::span<const double> eps_list, int seeds,
                                            const SolveConfig& cfg = {}, std::uint64_t jitter_seed = 0);
// rho statistics over the given instances; the other columns come from instances[0].
std::vector<ConstantRow> estimate_constants(std::span<const CostMatrix> instances, std::span<const double> eps_list,
                                            const SolveConfig& cfg = {});

void write_constants_csv(std::ostream& out, std::span<const ConstantRow> rows);

}  // namespace annealot
