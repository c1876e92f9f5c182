#include "annealot/harness.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "annealot/assignment.hpp"
#include "annealot/cost_io.hpp"
#include "annealot/error.hpp"
#include "annealot/random.hpp"
#include "json.hpp"

namespace annealot {

namespace {

using nlohmann::json;

void write_int_array(std::ostream& o, const std::vector<int>& v) {
  o << '[';
  for (std::size_t i = 0; i < v.size(); ++i) o << (i ? "," : "") << v[i];
  o << ']';
}

}  // namespace

SyntheticTask generate_task(int n, double margin, NoiseSchedule noise, std::uint64_t seed) {
  if (n < 2) throw InvalidInput("task size must be at least 2");
  if (!(margin > 0.0)) throw InvalidInput("margin must be positive");
  if (!(noise.a >= 0.0) || !(noise.b >= 0.0)) throw InvalidInput("noise parameters must be nonnegative");
  SyntheticTask task;
  task.n = n;
  task.margin = margin;
  task.noise = noise;
  task.seed = seed;
  Rng rng(mix_seed(seed, 0));
  task.planted = random_permutation(n, rng);
  Matrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double jitter = kTaskJitter * rng.uniform();
      M(i, j) = task.planted[static_cast<std::size_t>(i)] == j ? 0.0 : margin + jitter;
    }
  task.base_cost = CostMatrix::uniform(std::move(M));
  return task;
}

CostProcess task_process(const SyntheticTask& task) {
  CostProcess p;
  p.reference = task.planted;
  p.cost_at = [base = task.base_cost, noise = task.noise, seed = task.seed](int t) {
    CostMatrix C = base;
    const double sigma = noise.at(t);
    if (sigma == 0.0) return C;
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t) + 1));
    for (Eigen::Index i = 0; i < C.entries.rows(); ++i)
      for (Eigen::Index j = 0; j < C.entries.cols(); ++j) C.entries(i, j) += sigma * rng.normal();
    return C;
  };
  return p;
}

std::string task_to_json(const SyntheticTask& task) {
  std::ostringstream o;
  const std::string cost = cost_to_json(task.base_cost);
  // splice the task fields into the cost document
  o << cost.substr(0, cost.size() - 1) << ",\"planted\":";
  write_int_array(o, task.planted);
  o << ",\"margin\":" << format_real(task.margin) << ",\"noise\":{\"a\":" << format_real(task.noise.a)
    << ",\"b\":" << format_real(task.noise.b) << "},\"seed\":" << task.seed << '}';
  return o.str();
}

SyntheticTask parse_task_json(const std::string& text) {
  SyntheticTask task;
  task.base_cost = parse_cost_json(text);
  task.n = task.base_cost.n();
  json doc = json::parse(text);
  try {
    task.planted = doc.at("planted").get<std::vector<int>>();
    task.margin = doc.value("margin", 0.0);
    if (doc.contains("noise")) {
      task.noise.a = doc["noise"].value("a", 0.0);
      task.noise.b = doc["noise"].value("b", 0.0);
    }
    task.seed = doc.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("task JSON: ") + e.what());
  }
  if (static_cast<int>(task.planted.size()) != task.n) throw InvalidInput("planted permutation has the wrong length");
  std::vector<bool> seen(static_cast<std::size_t>(task.n), false);
  for (int j : task.planted) {
    if (j < 0 || j >= task.n || seen[static_cast<std::size_t>(j)]) throw InvalidInput("planted is not a permutation");
    seen[static_cast<std::size_t>(j)] = true;
  }
  return task;
}

RunSummary summarize_run(const std::string& method, const AnnealResult& result, const std::vector<int>& planted) {
  RunSummary s;
  s.method = method;
  s.status = result.status;
  s.steps = static_cast<int>(result.history.size());
  s.wall_time = result.total_seconds;
  int streak = 0;
  for (const auto& r : result.history) {
    if (r.decision == Decision::Pause) ++s.pause_steps;
    streak = r.assignment_correct ? streak + 1 : 0;
    if (streak == kSustainedSteps && !s.steps_to_target) s.steps_to_target = r.step + 1;
  }
  if (!result.history.empty()) {
    const auto& last = result.history.back();
    s.final_accuracy = assignment_accuracy(last.assignment, planted);
    s.final_epsilon = last.epsilon;
    s.collapse_detected = result.status == RunStatus::ReachedTarget && last.assignment != planted;
  }
  return s;
}

std::vector<MethodRun> run_comparison(const SyntheticTask& task, std::span<const ControllerConfig> methods,
                                      const SolveConfig& solve_cfg) {
  if (methods.empty()) throw InvalidInput("run_comparison needs at least one method");
  const CostProcess process = task_process(task);
  std::vector<MethodRun> out;
  for (const auto& m : methods) {
    MethodRun run;
    try {
      run.result = run_annealing(process, m, solve_cfg);
      run.summary = summarize_run(m.name, run.result, task.planted);
    } catch (const Error& e) {
      run.error = e.what();
      run.summary.method = m.name;
      run.summary.status = RunStatus::SolverFailure;
    }
    out.push_back(std::move(run));
  }
  return out;
}

std::vector<ControllerConfig> standard_methods(double k_safe, double alpha, double epsilon_start,
                                               double epsilon_target, int max_steps, double gumbel_scale,
                                               std::uint64_t gumbel_seed) {
  ControllerConfig base;
  base.k_safe = k_safe;
  base.epsilon_start = epsilon_start;
  base.epsilon_target = epsilon_target;
  base.max_steps = max_steps;
  base.max_consecutive_pauses = max_steps;

  ControllerConfig standard = base;
  standard.name = "Standard";
  standard.controller_enabled = false;
  standard.schedule = Exponential{alpha};

  ControllerConfig gumbel = base;
  gumbel.name = "Gumbel";
  gumbel.controller_enabled = false;
  gumbel.schedule = GumbelExponential{alpha, gumbel_scale, gumbel_seed};

  ControllerConfig eph = base;
  eph.name = "EPH-ASC";
  eph.controller_enabled = true;
  eph.schedule = Exponential{alpha};
  return {standard, gumbel, eph};
}

std::string report_to_json(const SpectralReport& r) {
  std::ostringstream o;
  o << "{\"epsilon\":" << format_real(r.epsilon) << ",\"spectral_radius\":" << format_real(r.spectral_radius)
    << ",\"spectral_gap\":" << format_real(r.spectral_gap) << ",\"resolvent_norm\":" << format_real(r.resolvent_norm)
    << ",\"dist_one_spectrum\":" << format_real(r.dist_one_spectrum) << ",\"modal_condition\":";
  if (std::isinf(r.modal_condition))
    o << "\"inf\"";
  else
    o << format_real(r.modal_condition);
  o << ",\"sensitivity_eps_norm\":" << format_real(r.sensitivity_eps_norm)
    << ",\"sensitivity_cost_norm\":" << format_real(r.sensitivity_cost_norm)
    << ",\"hessian_scale\":" << format_real(r.hessian_scale) << ",\"partialC_norm\":" << format_real(r.partialC_norm)
    << ",\"separated\":" << (r.separated ? "true" : "false") << '}';
  return o.str();
}

void write_step_log_jsonl(std::ostream& out, const AnnealResult& result) {
  for (const auto& r : result.history) {
    out << "{\"step\":" << r.step << ",\"epsilon\":" << format_real(r.epsilon) << ",\"drift\":" << format_real(r.drift)
        << ",\"decision\":\"" << to_string(r.decision) << "\",\"entropy\":" << format_real(r.entropy)
        << ",\"assignment_correct\":" << (r.assignment_correct ? "true" : "false")
        << ",\"pause_count\":" << r.pause_count << ",\"assignment\":";
    write_int_array(out, r.assignment);
    out << ",\"converged\":" << (r.converged ? "true" : "false") << ",\"iterations\":" << r.iterations
        << ",\"residual\":" << format_real(r.residual);
    if (r.report) out << ",\"report\":" << report_to_json(*r.report);
    out << "}\n";
  }
}

void write_summary_csv(std::ostream& out, std::span<const RunSummary> rows) {
  out << "method,steps_to_target,final_accuracy,pause_steps,collapse_detected,status,steps,final_epsilon\n";
  for (const auto& s : rows) {
    out << s.method << ',' << (s.steps_to_target ? std::to_string(*s.steps_to_target) : std::string("failed")) << ','
        << format_real(s.final_accuracy) << ',' << s.pause_steps << ',' << (s.collapse_detected ? 1 : 0) << ','
        << to_string(s.status) << ',' << s.steps << ',' << format_real(s.final_epsilon) << '\n';
  }
}

DiagnosticsSweep diagnostics_sweep(const SyntheticTask& task, std::span<const double> eps_list, int seeds,
                                   const SolveConfig& cfg) {
  DiagnosticsSweep out;
  out.constants = estimate_constants(task.base_cost, eps_list, seeds, cfg, task.seed);
  ReportOptions opts;
  opts.direction_seed = task.seed;
  for (const double eps : eps_list) out.reports.push_back(spectral_report(task.base_cost, eps, cfg, opts));
  return out;
}

}  // namespace annealot
