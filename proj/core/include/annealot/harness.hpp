#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "annealot/anneal.hpp"
#include "annealot/spectral.hpp"

namespace annealot {

struct NoiseSchedule {
  double a = 0.0;
  double b = 0.0;
  double at(int step) const { return a / (1.0 + b * step); }
};

struct SyntheticTask {
  int n = 0;
  std::vector<int> planted;
  CostMatrix base_cost;
  double margin = 0.0;
  NoiseSchedule noise;
  std::uint64_t seed = 0;
};

inline constexpr double kTaskJitter = 1e-3;

// 0 on the planted permutation, margin + U(0, 1e-3) elsewhere.
SyntheticTask generate_task(int n, double margin, NoiseSchedule noise, std::uint64_t seed);

// C_t = base + noise.at(t) * Z_t, Z_t standard normal drawn from mix_seed(seed, t).
CostProcess task_process(const SyntheticTask& task);

std::string task_to_json(const SyntheticTask& task);
SyntheticTask parse_task_json(const std::string& text);

inline constexpr int kSustainedSteps = 10;

struct RunSummary {
  std::string method;
  std::optional<int> steps_to_target;  // steps until 10 consecutive correct rounds
  double final_accuracy = 0.0;
  int pause_steps = 0;
  bool collapse_detected = false;      // reached target with a wrong assignment
  double wall_time = 0.0;
  RunStatus status = RunStatus::MaxSteps;
  int steps = 0;
  double final_epsilon = 0.0;
};

RunSummary summarize_run(const std::string& method, const AnnealResult& result, const std::vector<int>& planted);

struct MethodRun {
  RunSummary summary;
  AnnealResult result;
  std::string error;  // set when the method threw
};

std::vector<MethodRun> run_comparison(const SyntheticTask& task, std::span<const ControllerConfig> methods,
                                      const SolveConfig& solve_cfg = {});

// Standard exponential, Gumbel-perturbed exponential and EPH-ASC with the given k_safe.
std::vector<ControllerConfig> standard_methods(double k_safe, double alpha, double epsilon_start,
                                               double epsilon_target, int max_steps, double gumbel_scale,
                                               std::uint64_t gumbel_seed);

// Deterministic outputs only; wall times are left out.
void write_step_log_jsonl(std::ostream& out, const AnnealResult& result);
void write_summary_csv(std::ostream& out, std::span<const RunSummary> rows);
std::string report_to_json(const SpectralReport& r);

struct DiagnosticsSweep {
  std::vector<ConstantRow> constants;
  std::vector<SpectralReport> reports;
};

DiagnosticsSweep diagnostics_sweep(const SyntheticTask& task, std::span<const double> eps_list, int seeds,
                                   const SolveConfig& cfg = {});

}  // namespace annealot
