#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "annealot/spectral.hpp"
#include "annealot/transport.hpp"

namespace annealot {

struct Exponential {
  double alpha = 0.95;
};
struct Quadratic {
  double c = 0.5;
};
// Exponential temperatures; Gumbel(0, noise_scale) noise is added to the cost.
struct GumbelExponential {
  double alpha = 0.95;
  double noise_scale = 0.1;
  std::uint64_t seed = 0;
};
using Schedule = std::variant<Exponential, Quadratic, GumbelExponential>;

enum class Decision { Cool, Pause };
const char* to_string(Decision d);

struct ControllerConfig {
  std::string name = "EPH-ASC";
  bool controller_enabled = true;  // false: every step cools
  double k_safe = 0.5;
  Schedule schedule = Exponential{};
  double epsilon_start = 1.0;
  double epsilon_target = 0.05;
  int max_steps = 1000;
  int max_consecutive_pauses = 100;
};

void validate(const ControllerConfig& cfg, double epsilon_floor);

struct AnnealState {
  int step = 0;
  double epsilon = 0.0;
  std::optional<Matrix> previous_plan;
  double drift = 0.0;
  Decision decision = Decision::Cool;
  int pause_count = 0;  // consecutive pauses up to and including this step
};

double schedule_next(const Schedule& schedule, double epsilon, double epsilon_floor);
inline double schedule_step(const AnnealState& state, const ControllerConfig& cfg, double epsilon_floor = 1e-4) {
  return schedule_next(cfg.schedule, state.epsilon, epsilon_floor);
}

// Cool iff drift <= k_safe * epsilon.
Decision controller_decide(double drift, double epsilon, double k_safe);

double measure_drift(const Matrix& prev_plan, const Matrix& curr_plan);

CostMatrix perturb_cost(const CostMatrix& C, double noise_scale, std::uint64_t rng_seed);

// Pure in the step index.
struct CostProcess {
  std::function<CostMatrix(int)> cost_at;
  std::vector<int> reference;
};

CostProcess static_process(CostMatrix C, std::vector<int> reference);

enum class RunStatus { ReachedTarget, MaxSteps, Stalled, SolverFailure };
const char* to_string(RunStatus s);

struct StepRecord {
  int step = 0;
  double epsilon = 0.0;
  double drift = 0.0;
  Decision decision = Decision::Cool;
  int pause_count = 0;
  double entropy = 0.0;
  std::vector<int> assignment;
  bool assignment_correct = false;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  std::optional<SpectralReport> report;
};

struct RunOptions {
  bool diagnostics = false;  // attach a SpectralReport to every step
  ReportOptions report_options{.cross_check_jacobian = false};
};

struct AnnealResult {
  RunStatus status = RunStatus::MaxSteps;
  std::string message;
  std::vector<StepRecord> history;
  std::optional<TransportSolution> final_solution;
  double total_seconds = 0.0;
  double controller_seconds = 0.0;  // drift measurement and decisions
};

AnnealResult run_annealing(const CostProcess& process, const ControllerConfig& cfg, const SolveConfig& solve_cfg = {},
                           const RunOptions& opts = {});

struct CalibrationTrial {
  int proxy = 0;
  bool collapsed = false;
  int step = -1;
  double epsilon = 0.0;
  double drift = 0.0;
};

struct CalibrationOptions {
  double epsilon_start = 1.0;
  double epsilon_target = 1e-2;
  int max_steps = 1000;
  int lookahead = 5;
  double safety_factor = 0.8;
};

struct CalibrationResult {
  double k_safe_estimate = 0.0;
  double collapse_epsilon = 0.0;
  double collapse_drift = 0.0;
  double safety_factor = 0.8;
  std::vector<CalibrationTrial> trials;
};

// First step t >= 1 whose assignment is wrong, differs from step t-1, and stays
// wrong for the next `lookahead` steps (or until the run ends). -1 if none.
int detect_collapse(std::span<const StepRecord> history, int lookahead = 5);

CalibrationResult calibrate_k_safe(std::span<const CostProcess> proxies, double aggressive_alpha,
                                   const SolveConfig& solve_cfg = {}, const CalibrationOptions& opts = {});

}  // namespace annealot
