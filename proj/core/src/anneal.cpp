#include "annealot/anneal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "annealot/assignment.hpp"
#include "annealot/cost_io.hpp"
#include "annealot/error.hpp"
#include "annealot/random.hpp"

namespace annealot {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

const char* to_string(Decision d) { return d == Decision::Cool ? "cool" : "pause"; }

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ReachedTarget: return "reached_target";
    case RunStatus::MaxSteps: return "max_steps";
    case RunStatus::Stalled: return "stalled";
    case RunStatus::SolverFailure: return "solver_failure";
  }
  return "unknown";
}

void validate(const ControllerConfig& cfg, double epsilon_floor) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          if (!(s.c > 0.0)) throw InvalidInput("quadratic schedule needs c > 0");
        } else {
          if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw InvalidInput("schedule alpha must lie in (0, 1)");
          if constexpr (std::is_same_v<T, GumbelExponential>)
            if (!(s.noise_scale >= 0.0)) throw InvalidInput("noise_scale must be nonnegative");
        }
      },
      cfg.schedule);
  if (!(cfg.k_safe > 0.0)) throw InvalidInput("k_safe must be positive");
  if (!(cfg.epsilon_target < cfg.epsilon_start)) throw InvalidInput("epsilon_target must be below epsilon_start");
  if (!(cfg.epsilon_target >= epsilon_floor)) throw InvalidInput("epsilon_target is below the epsilon floor");
  if (cfg.max_steps <= 0) throw InvalidInput("max_steps must be positive");
  if (cfg.max_consecutive_pauses <= 0) throw InvalidInput("max_consecutive_pauses must be positive");
}

double schedule_next(const Schedule& schedule, double epsilon, double epsilon_floor) {
  const double next = std::visit(
      [epsilon](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Quadratic>)
          return epsilon - s.c * epsilon * epsilon;
        else
          return s.alpha * epsilon;
      },
      schedule);
  return std::max(next, epsilon_floor);
}

Decision controller_decide(double drift, double epsilon, double k_safe) {
  return drift <= k_safe * epsilon ? Decision::Cool : Decision::Pause;
}

double measure_drift(const Matrix& prev_plan, const Matrix& curr_plan) {
  if (prev_plan.rows() != curr_plan.rows() || prev_plan.cols() != curr_plan.cols())
    throw InvalidInput("drift between plans of different shapes");
  return (curr_plan - prev_plan).norm();
}

CostMatrix perturb_cost(const CostMatrix& C, double noise_scale, std::uint64_t rng_seed) {
  if (!(noise_scale >= 0.0)) throw InvalidInput("noise_scale must be nonnegative");
  CostMatrix out = C;
  if (noise_scale == 0.0) return out;
  Rng rng(rng_seed);
  for (Eigen::Index i = 0; i < out.entries.rows(); ++i)
    for (Eigen::Index j = 0; j < out.entries.cols(); ++j) out.entries(i, j) += rng.gumbel(noise_scale);
  return out;
}

CostProcess static_process(CostMatrix C, std::vector<int> reference) {
  CostProcess p;
  p.cost_at = [C = std::move(C)](int) { return C; };
  p.reference = std::move(reference);
  return p;
}

AnnealResult run_annealing(const CostProcess& process, const ControllerConfig& cfg, const SolveConfig& solve_cfg,
                           const RunOptions& opts) {
  validate(cfg, solve_cfg.epsilon_floor);
  if (!process.cost_at) throw InvalidInput("cost process has no cost function");
  const auto t_start = Clock::now();
  AnnealResult result;
  const GumbelExponential* gumbel = std::get_if<GumbelExponential>(&cfg.schedule);

  double eps = cfg.epsilon_start;
  std::optional<TransportSolution> prev;
  int consecutive = 0;
  bool done = false;
  for (int t = 0; t < cfg.max_steps && !done; ++t) {
    CostMatrix C = process.cost_at(t);
    if (gumbel != nullptr && gumbel->noise_scale > 0.0)
      C = perturb_cost(C, gumbel->noise_scale, mix_seed(gumbel->seed, static_cast<std::uint64_t>(t)));

    TransportSolution sol;
    try {
      sol = sinkhorn_solve(C, eps, solve_cfg, prev ? &*prev : nullptr);
    } catch (const Error& e) {
      result.status = RunStatus::SolverFailure;
      result.message = e.what();
      break;
    }

    const auto t_ctrl = Clock::now();
    StepRecord rec;
    rec.step = t;
    rec.epsilon = eps;
    rec.drift = prev ? measure_drift(prev->plan, sol.plan) : 0.0;
    rec.decision = cfg.controller_enabled ? controller_decide(rec.drift, eps, cfg.k_safe) : Decision::Cool;
    consecutive = rec.decision == Decision::Pause ? consecutive + 1 : 0;
    rec.pause_count = consecutive;
    result.controller_seconds += seconds_since(t_ctrl);

    rec.entropy = plan_entropy(sol);
    rec.assignment = round_to_assignment(sol).permutation;
    rec.assignment_correct = !process.reference.empty() && rec.assignment == process.reference;
    rec.converged = sol.converged;
    rec.iterations = sol.iterations;
    rec.residual = sol.marginal_residual;
    if (opts.diagnostics) {
      try {
        rec.report = spectral_report(C, eps, solve_cfg, opts.report_options);
      } catch (const NumericalFailure&) {
        // diagnostics are advisory; the step stands without them
      }
    }
    result.history.push_back(std::move(rec));
    const Decision decision = result.history.back().decision;
    prev = std::move(sol);

    if (consecutive > cfg.max_consecutive_pauses) {
      result.status = RunStatus::Stalled;
      result.message = "controller paused for " + std::to_string(consecutive) + " consecutive steps";
      done = true;
    } else if (decision == Decision::Cool && eps == cfg.epsilon_target) {
      result.status = RunStatus::ReachedTarget;
      done = true;
    } else if (decision == Decision::Cool) {
      eps = std::max(schedule_next(cfg.schedule, eps, solve_cfg.epsilon_floor), cfg.epsilon_target);
    }
  }
  if (!done && result.status != RunStatus::SolverFailure) result.status = RunStatus::MaxSteps;
  result.final_solution = std::move(prev);
  result.total_seconds = seconds_since(t_start);
  return result;
}

int detect_collapse(std::span<const StepRecord> history, int lookahead) {
  const auto n = static_cast<int>(history.size());
  for (int t = 1; t < n; ++t) {
    const auto& r = history[static_cast<std::size_t>(t)];
    if (r.assignment_correct) continue;
    if (r.assignment == history[static_cast<std::size_t>(t - 1)].assignment) continue;
    bool stays = true;
    for (int k = t + 1; k <= std::min(n - 1, t + lookahead); ++k)
      if (history[static_cast<std::size_t>(k)].assignment_correct) stays = false;
    if (stays) return t;
  }
  return -1;
}

CalibrationResult calibrate_k_safe(std::span<const CostProcess> proxies, double aggressive_alpha,
                                   const SolveConfig& solve_cfg, const CalibrationOptions& opts) {
  if (proxies.size() < 3) throw InvalidInput("calibration needs at least 3 proxy instances");
  if (!(opts.safety_factor > 0.0)) throw InvalidInput("safety factor must be positive");
  ControllerConfig cfg;
  cfg.name = "QSA";
  cfg.controller_enabled = false;
  cfg.schedule = Exponential{aggressive_alpha};
  cfg.epsilon_start = opts.epsilon_start;
  cfg.epsilon_target = opts.epsilon_target;
  cfg.max_steps = opts.max_steps;

  CalibrationResult out;
  out.safety_factor = opts.safety_factor;
  double best_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < proxies.size(); ++k) {
    const AnnealResult run = run_annealing(proxies[k], cfg, solve_cfg);
    if (run.status == RunStatus::SolverFailure) throw NumericalFailure("calibration run failed: " + run.message);
    CalibrationTrial trial;
    trial.proxy = static_cast<int>(k);
    const int t = detect_collapse(run.history, opts.lookahead);
    if (t >= 0) {
      const auto& r = run.history[static_cast<std::size_t>(t)];
      trial.collapsed = true;
      trial.step = t;
      trial.epsilon = r.epsilon;
      trial.drift = r.drift;
      const double ratio = r.drift / r.epsilon;
      if (ratio > 0.0 && ratio < best_ratio) {
        best_ratio = ratio;
        out.collapse_epsilon = r.epsilon;
        out.collapse_drift = r.drift;
      }
    }
    out.trials.push_back(trial);
  }
  if (!std::isfinite(best_ratio)) throw CalibrationInconclusive("no proxy collapsed under the aggressive schedule");
  out.k_safe_estimate = opts.safety_factor * best_ratio;
  return out;
}

}  // namespace annealot
