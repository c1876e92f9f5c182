#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "annealot/anneal.hpp"
#include "annealot/cost_io.hpp"
#include "annealot/error.hpp"
#include "annealot/harness.hpp"
#include "annealot/random.hpp"
#include "annealot/spectral.hpp"
#include "annealot/tracking.hpp"
#include "annealot/transport.hpp"
#include "json.hpp"

namespace annealot::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Params {
  std::string config;
  std::uint64_t seed = 0;
  std::string output_dir;

  int n = 8;
  double margin = 1.0;
  double noise_a = 3.0;
  double noise_b = 0.03;
  std::string task;
  std::string cost = "task";

  std::optional<double> eps;
  std::vector<double> eps_list;
  int seeds = 5;
  double tol = 1e-9;
  int max_iter = 10000;
  double eps_floor = 1e-4;

  std::string method = "eph-asc";
  std::optional<double> k_safe;
  double alpha = 0.95;
  double eps_start = 1.0;
  double eps_target = 0.05;
  int max_steps = 3000;
  std::optional<int> max_pauses;
  double gumbel_scale = 0.1;
  bool diagnostics = false;

  int runs = 1;
  int jobs = 1;
  bool calibrate = false;
  std::uint64_t calibration_seed = 1000;
  int proxies = 5;
  double aggressive_alpha = 0.8;
  double calibration_target = 1e-2;
  int calibration_steps = 1000;
  int lookahead = 5;
  double safety_factor = 0.8;

  double gamma = 1.0;
  double s = 1.0;
  double kappa = 1.0;
  double basin_radius = 1.0;
  std::string basin = "linear";
  std::string schedule = "exponential";
  double c = 0.5;
  int steps = 10000;
  double initial_error = 0.0;

  double re_min = -1.5;
  double re_max = 1.5;
  double im_min = -1.5;
  double im_max = 1.5;
  int resolution = 41;
};

template <class T>
void set_from(const json& v, T& target) {
  target = v.get<T>();
}
template <class T>
void set_from(const json& v, std::optional<T>& target) {
  target = v.get<T>();
}

void apply_config(const json& doc, Params& p) {
  if (!doc.is_object()) throw InvalidInput("config must be a JSON object");
  const std::map<std::string, std::function<void(const json&)>> keys = {
      {"seed", [&](const json& v) { set_from(v, p.seed); }},
      {"output-dir", [&](const json& v) { set_from(v, p.output_dir); }},
      {"n", [&](const json& v) { set_from(v, p.n); }},
      {"margin", [&](const json& v) { set_from(v, p.margin); }},
      {"noise-a", [&](const json& v) { set_from(v, p.noise_a); }},
      {"noise-b", [&](const json& v) { set_from(v, p.noise_b); }},
      {"task", [&](const json& v) { set_from(v, p.task); }},
      {"cost", [&](const json& v) { set_from(v, p.cost); }},
      {"eps", [&](const json& v) { set_from(v, p.eps); }},
      {"eps-list", [&](const json& v) { set_from(v, p.eps_list); }},
      {"seeds", [&](const json& v) { set_from(v, p.seeds); }},
      {"tol", [&](const json& v) { set_from(v, p.tol); }},
      {"max-iter", [&](const json& v) { set_from(v, p.max_iter); }},
      {"eps-floor", [&](const json& v) { set_from(v, p.eps_floor); }},
      {"method", [&](const json& v) { set_from(v, p.method); }},
      {"k-safe", [&](const json& v) { set_from(v, p.k_safe); }},
      {"alpha", [&](const json& v) { set_from(v, p.alpha); }},
      {"eps-start", [&](const json& v) { set_from(v, p.eps_start); }},
      {"eps-target", [&](const json& v) { set_from(v, p.eps_target); }},
      {"max-steps", [&](const json& v) { set_from(v, p.max_steps); }},
      {"max-pauses", [&](const json& v) { set_from(v, p.max_pauses); }},
      {"gumbel-scale", [&](const json& v) { set_from(v, p.gumbel_scale); }},
      {"diagnostics", [&](const json& v) { set_from(v, p.diagnostics); }},
      {"runs", [&](const json& v) { set_from(v, p.runs); }},
      {"jobs", [&](const json& v) { set_from(v, p.jobs); }},
      {"calibrate", [&](const json& v) { set_from(v, p.calibrate); }},
      {"calibration-seed", [&](const json& v) { set_from(v, p.calibration_seed); }},
      {"proxies", [&](const json& v) { set_from(v, p.proxies); }},
      {"aggressive-alpha", [&](const json& v) { set_from(v, p.aggressive_alpha); }},
      {"calibration-target", [&](const json& v) { set_from(v, p.calibration_target); }},
      {"calibration-steps", [&](const json& v) { set_from(v, p.calibration_steps); }},
      {"lookahead", [&](const json& v) { set_from(v, p.lookahead); }},
      {"safety-factor", [&](const json& v) { set_from(v, p.safety_factor); }},
      {"gamma", [&](const json& v) { set_from(v, p.gamma); }},
      {"s", [&](const json& v) { set_from(v, p.s); }},
      {"kappa", [&](const json& v) { set_from(v, p.kappa); }},
      {"basin-radius", [&](const json& v) { set_from(v, p.basin_radius); }},
      {"basin", [&](const json& v) { set_from(v, p.basin); }},
      {"schedule", [&](const json& v) { set_from(v, p.schedule); }},
      {"c", [&](const json& v) { set_from(v, p.c); }},
      {"steps", [&](const json& v) { set_from(v, p.steps); }},
      {"initial-error", [&](const json& v) { set_from(v, p.initial_error); }},
      {"re-min", [&](const json& v) { set_from(v, p.re_min); }},
      {"re-max", [&](const json& v) { set_from(v, p.re_max); }},
      {"im-min", [&](const json& v) { set_from(v, p.im_min); }},
      {"im-max", [&](const json& v) { set_from(v, p.im_max); }},
      {"resolution", [&](const json& v) { set_from(v, p.resolution); }},
  };
  for (const auto& [key, value] : doc.items()) {
    const auto it = keys.find(key);
    if (it == keys.end()) throw InvalidInput("unknown config key: " + key);
    try {
      it->second(value);
    } catch (const json::exception&) {
      throw InvalidInput("config key has the wrong type: " + key);
    }
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::optional<std::string> find_config_path(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return std::nullopt;
}

// Writes to output_dir/name, or to out when no directory was given.
class Sink {
 public:
  Sink(const std::string& dir, std::ostream& out) : dir_(dir), out_(out) {
    if (!dir_.empty()) fs::create_directories(dir_);
  }
  bool to_files() const { return !dir_.empty(); }
  void emit(const std::string& name, const std::string& content) const {
    if (dir_.empty()) {
      out_ << content;
      return;
    }
    const fs::path path = fs::path(dir_) / name;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidInput("cannot write " + path.string());
    f << content;
  }

 private:
  std::string dir_;
  std::ostream& out_;
};

SolveConfig solve_config(const Params& p) {
  SolveConfig cfg;
  cfg.tolerance = p.tol;
  cfg.max_iterations = p.max_iter;
  cfg.epsilon_floor = p.eps_floor;
  return cfg;
}

SyntheticTask load_task(const Params& p) {
  if (!p.task.empty()) return parse_task_json(read_text(p.task));
  return generate_task(p.n, p.margin, NoiseSchedule{p.noise_a, p.noise_b}, p.seed);
}

CostMatrix load_cost_arg(const Params& p) {
  if (p.cost == "task") return load_task(p).base_cost;
  if (p.cost == "zero") {
    if (p.n < 1) throw InvalidInput("n must be positive");
    return CostMatrix::uniform(Matrix::Zero(p.n, p.n));
  }
  if (p.cost == "random") {
    if (p.n < 1) throw InvalidInput("n must be positive");
    Rng rng(p.seed);
    Matrix M(p.n, p.n);
    for (int i = 0; i < p.n; ++i)
      for (int j = 0; j < p.n; ++j) M(i, j) = rng.uniform();
    return CostMatrix::uniform(std::move(M));
  }
  return load_cost(p.cost);
}

double require_eps(const Params& p) {
  if (!p.eps) throw InvalidInput("--eps is required");
  return *p.eps;
}

ControllerConfig method_config(const Params& p, std::uint64_t gumbel_seed) {
  const auto methods = standard_methods(p.k_safe.value_or(ControllerConfig{}.k_safe), p.alpha, p.eps_start,
                                        p.eps_target, p.max_steps, p.gumbel_scale, gumbel_seed);
  ControllerConfig cfg;
  if (p.method == "standard")
    cfg = methods[0];
  else if (p.method == "gumbel")
    cfg = methods[1];
  else if (p.method == "eph-asc")
    cfg = methods[2];
  else
    throw InvalidInput("unknown method: " + p.method + " (standard, gumbel, eph-asc)");
  if (p.max_pauses) cfg.max_consecutive_pauses = *p.max_pauses;
  return cfg;
}

std::string run_summary_csv(const RunSummary& s) {
  std::ostringstream o;
  write_summary_csv(o, std::span<const RunSummary>(&s, 1));
  return o.str();
}

CalibrationResult calibrate(const Params& p, std::uint64_t first_seed) {
  if (p.proxies < 1) throw InvalidInput("proxies must be positive");
  std::vector<CostProcess> proxies;
  for (int k = 0; k < p.proxies; ++k)
    proxies.push_back(task_process(
        generate_task(p.n, p.margin, NoiseSchedule{p.noise_a, p.noise_b}, first_seed + static_cast<std::uint64_t>(k))));
  CalibrationOptions opts;
  opts.epsilon_start = p.eps_start;
  opts.epsilon_target = p.calibration_target;
  opts.max_steps = p.calibration_steps;
  opts.lookahead = p.lookahead;
  opts.safety_factor = p.safety_factor;
  return calibrate_k_safe(proxies, p.aggressive_alpha, solve_config(p), opts);
}

int cmd_gen(const Params& p, std::ostream& out) {
  const SyntheticTask task = generate_task(p.n, p.margin, NoiseSchedule{p.noise_a, p.noise_b}, p.seed);
  Sink(p.output_dir, out).emit("task.json", task_to_json(task) + "\n");
  return kOk;
}

int cmd_solve(const Params& p, std::ostream& out) {
  const CostMatrix C = load_cost_arg(p);
  const TransportSolution sol = sinkhorn_solve(C, require_eps(p), solve_config(p));
  std::ostringstream plan;
  for (int i = 0; i < sol.n(); ++i) {
    for (int j = 0; j < sol.n(); ++j) plan << (j ? "," : "") << format_real(sol.plan(i, j));
    plan << '\n';
  }
  const Sink sink(p.output_dir, out);
  if (sink.to_files()) sink.emit("plan.csv", plan.str());
  out << "plan\n" << plan.str();
  out << "entropy " << format_real(plan_entropy(sol)) << '\n';
  out << "residual " << format_real(sol.marginal_residual) << '\n';
  out << "iterations " << sol.iterations << '\n';
  out << "converged " << (sol.converged ? "true" : "false") << '\n';
  return sol.converged ? kOk : kNumerical;
}

int cmd_diagnose(const Params& p, std::ostream& out) {
  const SyntheticTask task = load_task(p);
  const SolveConfig cfg = solve_config(p);
  const Sink sink(p.output_dir, out);
  if (!p.eps_list.empty()) {
    const DiagnosticsSweep sweep = diagnostics_sweep(task, p.eps_list, p.seeds, cfg);
    std::ostringstream csv, jsonl;
    write_constants_csv(csv, sweep.constants);
    for (const auto& r : sweep.reports) jsonl << report_to_json(r) << '\n';
    if (sink.to_files()) {
      sink.emit("constants.csv", csv.str());
      sink.emit("reports.jsonl", jsonl.str());
    }
    out << csv.str();
    return kOk;
  }
  ReportOptions opts;
  opts.direction_seed = task.seed;
  const SpectralReport report = spectral_report(task.base_cost, require_eps(p), cfg, opts);
  const std::string line = report_to_json(report) + "\n";
  if (sink.to_files()) sink.emit("report.json", line);
  out << line;
  if (report.separated) {
    const DualityResult d = duality_check(report);
    out << "duality_check " << (d.pass ? "pass" : "fail") << " slack " << format_real(d.slack) << '\n';
  } else {
    out << "duality_check skipped (support not separated)\n";
  }
  return kOk;
}

int cmd_pseudospectrum(const Params& p, std::ostream& out) {
  if (p.resolution < 2) throw InvalidInput("resolution must be at least 2");
  const CostMatrix C = load_cost_arg(p);
  const SolveConfig cfg = solve_config(p);
  const TransportSolution sol = precise_solve(C, require_eps(p), cfg, ReportOptions{}.refine_tolerance, nullptr);
  const Matrix J = sinkhorn_jacobian(sol, C);
  const PseudospectrumGrid grid = pseudospectrum_grid(J, {p.re_min, p.re_max}, {p.im_min, p.im_max}, p.resolution);
  std::ostringstream csv;
  write_pseudospectrum_csv(csv, grid);
  Sink(p.output_dir, out).emit("pseudospectrum.csv", csv.str());
  return kOk;
}

int cmd_calibrate(const Params& p, std::ostream& out) {
  const CalibrationResult r = calibrate(p, p.seed);
  std::ostringstream csv;
  csv << "proxy,collapsed,step,epsilon,drift\n";
  for (const auto& t : r.trials)
    csv << t.proxy << ',' << (t.collapsed ? 1 : 0) << ',' << t.step << ',' << format_real(t.epsilon) << ','
        << format_real(t.drift) << '\n';
  const Sink sink(p.output_dir, out);
  out << "k_safe " << format_real(r.k_safe_estimate) << '\n';
  out << "collapse_epsilon " << format_real(r.collapse_epsilon) << '\n';
  out << "collapse_drift " << format_real(r.collapse_drift) << '\n';
  out << "safety_factor " << format_real(r.safety_factor) << '\n';
  sink.emit("calibration.csv", csv.str());
  return kOk;
}

int cmd_run(const Params& p, std::ostream& out, std::ostream& err) {
  const SyntheticTask task = load_task(p);
  const ControllerConfig cfg = method_config(p, task.seed);
  RunOptions opts;
  opts.diagnostics = p.diagnostics;
  const AnnealResult result = run_annealing(task_process(task), cfg, solve_config(p), opts);
  const RunSummary summary = summarize_run(cfg.name, result, task.planted);
  const Sink sink(p.output_dir, out);
  if (sink.to_files()) {
    std::ostringstream log;
    write_step_log_jsonl(log, result);
    sink.emit("steps.jsonl", log.str());
    sink.emit("summary.csv", run_summary_csv(summary));
  }
  out << run_summary_csv(summary);
  if (!result.message.empty()) err << result.message << '\n';
  err << "wall_time " << result.total_seconds << " s, controller share "
      << (result.total_seconds > 0 ? 100.0 * result.controller_seconds / result.total_seconds : 0.0) << " %\n";
  switch (result.status) {
    case RunStatus::Stalled:
      return kStall;
    case RunStatus::SolverFailure:
      return kNumerical;
    default:
      return kOk;
  }
}

std::string median_steps(std::vector<std::optional<int>> steps) {
  if (steps.empty()) return "failed";
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> v;
  for (const auto& s : steps) v.push_back(s ? static_cast<double>(*s) : inf);
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  const double med = v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  return std::isfinite(med) ? format_real(med) : std::string("failed");
}

int cmd_compare(const Params& p, std::ostream& out, std::ostream& err) {
  if (p.runs < 1) throw InvalidInput("runs must be positive");
  if (!p.task.empty() && p.runs != 1) throw InvalidInput("--task takes a single run");
  if (p.jobs < 1) throw InvalidInput("jobs must be positive");
  const auto started = std::chrono::steady_clock::now();

  double k_safe = p.k_safe.value_or(ControllerConfig{}.k_safe);
  if (p.calibrate) {
    k_safe = calibrate(p, p.calibration_seed).k_safe_estimate;
    out << "k_safe " << format_real(k_safe) << '\n';
  }

  struct SeedRun {
    SyntheticTask task;
    std::vector<MethodRun> runs;
  };
  std::vector<SeedRun> results(static_cast<std::size_t>(p.runs));
  Params local = p;
  local.k_safe = k_safe;
  for (int r = 0; r < p.runs; ++r) {
    local.seed = p.seed + static_cast<std::uint64_t>(r);
    results[static_cast<std::size_t>(r)].task = load_task(local);
  }
  const SolveConfig cfg = solve_config(p);
  auto work = [&](std::size_t r) {
    SeedRun& sr = results[r];
    auto methods = standard_methods(k_safe, p.alpha, p.eps_start, p.eps_target, p.max_steps, p.gumbel_scale,
                                    sr.task.seed);
    if (p.max_pauses)
      for (auto& m : methods) m.max_consecutive_pauses = *p.max_pauses;
    sr.runs = run_comparison(sr.task, methods, cfg);
  };
  if (p.jobs == 1) {
    for (std::size_t r = 0; r < results.size(); ++r) work(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int j = 0; j < std::min(p.jobs, p.runs); ++j)
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < results.size(); r = next++) work(r);
      });
    for (auto& t : pool) t.join();
  }

  const Sink sink(p.output_dir, out);
  std::ostringstream table;
  table << "seed,method,steps_to_target,final_accuracy,pause_steps,collapse_detected,status,steps,final_epsilon\n";
  std::map<std::string, std::vector<const RunSummary*>> by_method;
  std::vector<std::string> order;
  double total = 0.0, controller = 0.0;
  for (const auto& sr : results) {
    std::vector<RunSummary> rows;
    for (const auto& mr : sr.runs) {
      const RunSummary& s = mr.summary;
      rows.push_back(s);
      const std::string row = run_summary_csv(s);
      table << sr.task.seed << ',' << row.substr(row.find('\n') + 1);
      if (!by_method.count(s.method)) order.push_back(s.method);
      by_method[s.method].push_back(&s);
      total += mr.result.total_seconds;
      controller += mr.result.controller_seconds;
      if (!mr.error.empty()) err << "seed " << sr.task.seed << ' ' << s.method << ": " << mr.error << '\n';
      if (sink.to_files()) {
        std::ostringstream log;
        write_step_log_jsonl(log, mr.result);
        sink.emit("seed_" + std::to_string(sr.task.seed) + "/" + s.method + ".jsonl", log.str());
      }
    }
    if (sink.to_files()) {
      std::ostringstream csv;
      write_summary_csv(csv, rows);
      sink.emit("seed_" + std::to_string(sr.task.seed) + "/summary.csv", csv.str());
    }
  }

  std::ostringstream agg;
  agg << "method,runs,collapses,successes,median_steps_to_target,mean_final_accuracy,pause_steps\n";
  for (const auto& name : order) {
    const auto& rows = by_method[name];
    int collapses = 0, successes = 0;
    long pauses = 0;
    double acc = 0.0;
    std::vector<std::optional<int>> steps;
    for (const RunSummary* s : rows) {
      collapses += s->collapse_detected ? 1 : 0;
      successes += s->steps_to_target ? 1 : 0;
      pauses += s->pause_steps;
      acc += s->final_accuracy;
      steps.push_back(s->steps_to_target);
    }
    agg << name << ',' << rows.size() << ',' << collapses << ',' << successes << ',' << median_steps(steps) << ','
        << format_real(acc / static_cast<double>(rows.size())) << ',' << pauses << '\n';
  }

  if (sink.to_files()) {
    sink.emit("summary.csv", table.str());
    sink.emit("aggregate.csv", agg.str());
  }
  out << table.str() << '\n' << agg.str();
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  err << "wall_time " << wall << " s, controller share " << (total > 0 ? 100.0 * controller / total : 0.0) << " %\n";
  return kOk;
}

TrackingParams tracking_params(const Params& p) {
  TrackingParams t;
  t.gamma = p.gamma;
  t.sensitivity_const = p.s;
  t.kappa = p.kappa;
  t.basin_radius = p.basin_radius;
  if (p.basin == "linear")
    t.basin = BasinMode::Linear;
  else if (p.basin == "constant")
    t.basin = BasinMode::Constant;
  else
    throw InvalidInput("unknown basin: " + p.basin + " (linear, constant)");
  t.epsilon_start = p.eps_start;
  if (p.schedule == "exponential")
    t.schedule = Exponential{p.alpha};
  else if (p.schedule == "quadratic")
    t.schedule = Quadratic{p.c};
  else if (p.schedule == "frozen")
    t.schedule = Frozen{};
  else
    throw InvalidInput("unknown schedule: " + p.schedule + " (exponential, quadratic, frozen)");
  t.initial_error = p.initial_error;
  t.k_safe = p.k_safe;
  return t;
}

int cmd_track(const Params& p, std::ostream& out) {
  const TrackingParams params = tracking_params(p);
  const TrackingTrace trace = simulate_tracking(params, p.steps);
  std::ostringstream csv;
  write_tracking_csv(csv, trace);
  const Sink sink(p.output_dir, out);
  sink.emit("track.csv", csv.str());
  if (!sink.to_files()) return kOk;
  out << "escape_step " << (trace.escape_step ? std::to_string(*trace.escape_step) : std::string("none")) << '\n';
  out << "escape_epsilon " << (trace.escape_epsilon ? format_real(*trace.escape_epsilon) : std::string("none"))
      << '\n';
  out << "pauses " << trace.pauses << '\n';
  if (!std::holds_alternative<Frozen>(params.schedule)) {
    const CriticalEpsilon ce = critical_epsilon(params, p.alpha, p.steps);
    out << "critical_epsilon " << format_real(ce.analytic) << " collapse " << (ce.collapse ? "true" : "false") << '\n';
  }
  return kOk;
}

void add_common(CLI::App* sub, Params& p) {
  sub->add_option("--config", p.config, "JSON file whose keys are long option names");
  sub->add_option("--seed", p.seed, "Seed for task generation and noise");
  sub->add_option("--output-dir", p.output_dir, "Directory for artifacts (default: stdout)");
}

void add_task(CLI::App* sub, Params& p) {
  sub->add_option("--task", p.task, "Task JSON written by gen");
  sub->add_option("--n", p.n, "Task size");
  sub->add_option("--margin", p.margin, "Off-permutation cost margin");
  sub->add_option("--noise-a", p.noise_a, "Noise scale a in a/(1+b t)");
  sub->add_option("--noise-b", p.noise_b, "Noise decay b in a/(1+b t)");
}

void add_solver(CLI::App* sub, Params& p) {
  sub->add_option("--tol", p.tol, "Marginal residual tolerance");
  sub->add_option("--max-iter", p.max_iter, "Sinkhorn iteration cap");
  sub->add_option("--eps-floor", p.eps_floor, "Smallest admissible epsilon");
}

void add_schedule(CLI::App* sub, Params& p, std::optional<double>& k_safe_cli) {
  sub->add_option("--k-safe", k_safe_cli, "Controller slope");
  sub->add_option("--alpha", p.alpha, "Exponential cooling factor");
  sub->add_option("--eps-start", p.eps_start, "Initial epsilon");
  sub->add_option("--eps-target", p.eps_target, "Target epsilon");
  sub->add_option("--max-steps", p.max_steps, "Step budget");
  sub->add_option("--max-pauses", p.max_pauses, "Consecutive pauses before a stall");
  sub->add_option("--gumbel-scale", p.gumbel_scale, "Gumbel noise scale");
}

void add_calibration(CLI::App* sub, Params& p) {
  sub->add_option("--proxies", p.proxies, "Number of proxy tasks");
  sub->add_option("--aggressive-alpha", p.aggressive_alpha, "Cooling factor of the probing runs");
  sub->add_option("--calibration-target", p.calibration_target, "Target epsilon of the probing runs");
  sub->add_option("--calibration-steps", p.calibration_steps, "Step budget of the probing runs");
  sub->add_option("--lookahead", p.lookahead, "Steps a wrong assignment must persist");
  sub->add_option("--safety-factor", p.safety_factor, "Multiplier on the collapse ratio");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Params p;
  try {
    if (const auto path = find_config_path(argc, argv)) apply_config(json::parse(read_text(*path)), p);
  } catch (const json::exception& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalid;
  } catch (const Error& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalid;
  }

  CLI::App app{"Annealed entropic transport: solver, diagnostics, controller and tracking model", "annealot"};
  app.require_subcommand(1, 1);
  std::optional<double> eps_cli, k_safe_cli;

  auto* gen = app.add_subcommand("gen", "Generate a planted-permutation task");
  add_common(gen, p);
  add_task(gen, p);

  auto* solve = app.add_subcommand("solve", "Solve one instance at one epsilon");
  add_common(solve, p);
  add_task(solve, p);
  add_solver(solve, p);
  solve->add_option("--cost", p.cost, "task, zero, random, or a .csv/.json cost file");
  solve->add_option("--eps", eps_cli, "Temperature");

  auto* diagnose = app.add_subcommand("diagnose", "Spectral report at one epsilon, or a constants sweep");
  add_common(diagnose, p);
  add_task(diagnose, p);
  add_solver(diagnose, p);
  diagnose->add_option("--eps", eps_cli, "Temperature of a single report");
  diagnose->add_option("--eps-list", p.eps_list, "Temperatures of a sweep")->delimiter(',');
  diagnose->add_option("--seeds", p.seeds, "Jittered instances per sweep temperature");

  auto* pseudo = app.add_subcommand("pseudospectrum", "sigma_min(zI - J) on a grid");
  add_common(pseudo, p);
  add_task(pseudo, p);
  add_solver(pseudo, p);
  pseudo->add_option("--cost", p.cost, "task, zero, random, or a .csv/.json cost file");
  pseudo->add_option("--eps", eps_cli, "Temperature");
  pseudo->add_option("--re-min", p.re_min);
  pseudo->add_option("--re-max", p.re_max);
  pseudo->add_option("--im-min", p.im_min);
  pseudo->add_option("--im-max", p.im_max);
  pseudo->add_option("--resolution", p.resolution, "Grid points per axis");

  auto* calib = app.add_subcommand("calibrate", "Estimate k_safe from proxy tasks seeded seed, seed+1, ...");
  add_common(calib, p);
  add_task(calib, p);
  add_solver(calib, p);
  add_calibration(calib, p);
  calib->add_option("--eps-start", p.eps_start, "Initial epsilon");

  auto* run = app.add_subcommand("run", "Anneal one task with one method");
  add_common(run, p);
  add_task(run, p);
  add_solver(run, p);
  add_schedule(run, p, k_safe_cli);
  run->add_option("--method", p.method, "standard, gumbel or eph-asc");
  run->add_flag("--diagnostics", p.diagnostics, "Attach a spectral report to every step");

  auto* compare = app.add_subcommand("compare", "Run Standard, Gumbel and EPH-ASC on seeds seed..seed+runs-1");
  add_common(compare, p);
  add_task(compare, p);
  add_solver(compare, p);
  add_schedule(compare, p, k_safe_cli);
  add_calibration(compare, p);
  compare->add_option("--runs", p.runs, "Number of seeded tasks");
  compare->add_option("--jobs", p.jobs, "Worker threads");
  compare->add_flag("--calibrate", p.calibrate, "Calibrate k_safe first");
  compare->add_option("--calibration-seed", p.calibration_seed, "First proxy seed");

  auto* track = app.add_subcommand("track", "Scalar tracking-error model");
  add_common(track, p);
  track->add_option("--gamma", p.gamma, "Spectral gap slope");
  track->add_option("--s", p.s, "Sensitivity constant");
  track->add_option("--kappa", p.kappa, "Modal condition number");
  track->add_option("--basin-radius", p.basin_radius, "Basin radius R");
  track->add_option("--basin", p.basin, "linear (R eps) or constant (R)");
  track->add_option("--schedule", p.schedule, "exponential, quadratic or frozen");
  track->add_option("--alpha", p.alpha, "Exponential cooling factor");
  track->add_option("--c", p.c, "Quadratic step constant");
  track->add_option("--eps-start", p.eps_start, "Initial epsilon");
  track->add_option("--steps", p.steps, "Steps to simulate");
  track->add_option("--initial-error", p.initial_error, "Initial tracking error");
  track->add_option("--k-safe", k_safe_cli, "Pause whenever drift exceeds k_safe * eps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kInvalid;
  }
  if (eps_cli) p.eps = eps_cli;
  if (k_safe_cli) p.k_safe = k_safe_cli;

  try {
    if (gen->parsed()) return cmd_gen(p, out);
    if (solve->parsed()) return cmd_solve(p, out);
    if (diagnose->parsed()) return cmd_diagnose(p, out);
    if (pseudo->parsed()) return cmd_pseudospectrum(p, out);
    if (calib->parsed()) return cmd_calibrate(p, out);
    if (run->parsed()) return cmd_run(p, out, err);
    if (compare->parsed()) return cmd_compare(p, out, err);
    if (track->parsed()) return cmd_track(p, out);
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const json::exception& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const fs::filesystem_error& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    err << "failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kInvalid;
}

}  // namespace annealot::cli
