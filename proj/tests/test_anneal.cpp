#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "annealot/anneal.hpp"
#include "annealot/cost_io.hpp"
#include "annealot/error.hpp"
#include "annealot/harness.hpp"

using namespace annealot;

namespace {

CostMatrix permutation_cost(int n, const std::vector<int>& perm, double margin) {
  Matrix M = Matrix::Constant(n, n, margin);
  for (int i = 0; i < n; ++i) M(i, perm[static_cast<std::size_t>(i)]) = 0.0;
  return CostMatrix::uniform(M);
}

std::vector<int> identity(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  return p;
}

std::vector<int> shifted(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = (i + 1) % n;
  return p;
}

void expect_controller_semantics(const AnnealResult& r, const ControllerConfig& cfg) {
  for (std::size_t t = 0; t < r.history.size(); ++t) {
    const auto& s = r.history[t];
    if (cfg.controller_enabled) EXPECT_EQ(s.decision, controller_decide(s.drift, s.epsilon, cfg.k_safe));
    if (t + 1 < r.history.size()) {
      const auto& nx = r.history[t + 1];
      EXPECT_LE(nx.epsilon, s.epsilon);
      if (s.decision == Decision::Pause) EXPECT_EQ(nx.epsilon, s.epsilon);
      if (s.decision == Decision::Cool) EXPECT_LT(nx.epsilon, s.epsilon);
    }
  }
}

}  // namespace

TEST(ScheduleStep, Examples) {
  AnnealState st;
  st.epsilon = 1.0;
  ControllerConfig cfg;
  cfg.schedule = Exponential{0.95};
  EXPECT_DOUBLE_EQ(schedule_step(st, cfg), 0.95);
  cfg.schedule = Quadratic{0.5};
  st.epsilon = 0.1;
  EXPECT_NEAR(schedule_step(st, cfg), 0.095, 1e-17);
  st.epsilon = 1e-4;
  EXPECT_EQ(schedule_step(st, cfg, 1e-4), 1e-4);
  cfg.schedule = GumbelExponential{0.9, 0.1, 0};
  st.epsilon = 0.5;
  EXPECT_DOUBLE_EQ(schedule_step(st, cfg), 0.45);
}

TEST(ControllerDecide, Examples) {
  EXPECT_EQ(controller_decide(0.04, 0.1, 0.5), Decision::Cool);
  EXPECT_EQ(controller_decide(0.06, 0.1, 0.5), Decision::Pause);
  EXPECT_EQ(controller_decide(0.05, 0.1, 0.5), Decision::Cool);
}

TEST(MeasureDrift, Examples) {
  const Matrix A = Matrix::Constant(3, 3, 1.0 / 9);
  EXPECT_EQ(measure_drift(A, A), 0.0);
  Matrix B = A;
  B(0, 0) += 0.1;
  B(2, 1) -= 0.1;
  EXPECT_NEAR(measure_drift(A, B), std::sqrt(0.02), 1e-15);
  EXPECT_NEAR(std::sqrt(0.02), 0.14142, 1e-5);
  EXPECT_THROW(measure_drift(A, Matrix::Zero(2, 2)), InvalidInput);
}

TEST(MeasureDrift, MatchesRecomputationOnDriftingProcess) {
  const auto task = generate_task(6, 1.0, {0.5, 0.1}, 4);
  ControllerConfig cfg;
  cfg.controller_enabled = false;
  cfg.epsilon_target = 0.2;
  const auto r = run_annealing(task_process(task), cfg);
  const CostProcess p = task_process(task);
  TransportSolution prev;
  for (std::size_t t = 0; t < r.history.size(); ++t) {
    const auto sol = sinkhorn_solve(p.cost_at(static_cast<int>(t)), r.history[t].epsilon, {}, t ? &prev : nullptr);
    if (t > 0) {
      double s = 0;
      for (Eigen::Index k = 0; k < sol.plan.size(); ++k) {
        const double d = sol.plan.data()[k] - prev.plan.data()[k];
        s += d * d;
      }
      EXPECT_NEAR(r.history[t].drift, std::sqrt(s), 1e-12);
    }
    prev = sol;
  }
}

TEST(PerturbCost, ZeroScaleIsIdentity) {
  const auto task = generate_task(4, 1.0, {}, 1);
  EXPECT_EQ(perturb_cost(task.base_cost, 0.0, 9).entries, task.base_cost.entries);
  EXPECT_THROW(perturb_cost(task.base_cost, -1.0, 9), InvalidInput);
}

TEST(PerturbCost, MatchesGoldenFile) {
  const auto task = generate_task(4, 1.0, {}, 1);
  const CostMatrix out = perturb_cost(task.base_cost, 0.1, 20240601);
  std::ostringstream o;
  write_cost_csv(o, out);
  std::ifstream in(std::string(ANNEALOT_GOLDEN_DIR) + "/perturb_cost_seed20240601.csv");
  ASSERT_TRUE(in.good());
  std::stringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(o.str(), golden.str());
}

TEST(PerturbCost, DifferentSeedsDiffer) {
  const auto task = generate_task(4, 1.0, {}, 1);
  EXPECT_NE(perturb_cost(task.base_cost, 0.1, 1).entries, perturb_cost(task.base_cost, 0.1, 2).entries);
  EXPECT_EQ(perturb_cost(task.base_cost, 0.1, 1).entries, perturb_cost(task.base_cost, 0.1, 1).entries);
}

TEST(RunAnnealing, StaticCostNeverPauses) {
  const auto task = generate_task(6, 1.0, {}, 2);
  ControllerConfig cfg;
  cfg.k_safe = 0.5;
  cfg.schedule = Exponential{0.9};
  cfg.epsilon_target = 0.05;
  const auto r = run_annealing(static_process(task.base_cost, task.planted), cfg);
  EXPECT_EQ(r.status, RunStatus::ReachedTarget);
  int raw = 1;
  for (double e = cfg.epsilon_start; e != cfg.epsilon_target; ++raw) e = std::max(0.9 * e, cfg.epsilon_target);
  EXPECT_EQ(static_cast<int>(r.history.size()), raw);
  for (const auto& s : r.history) EXPECT_EQ(s.decision, Decision::Cool);
  EXPECT_TRUE(r.history.back().assignment_correct);
  expect_controller_semantics(r, cfg);
}

TEST(RunAnnealing, PausesOnlyWhileNoiseIsHigh) {
  // Noise switches off at step 40; afterwards drift comes from cooling alone.
  const auto task = generate_task(6, 1.0, {}, 3);
  const int quiet_from = 40;
  CostProcess p = task_process(generate_task(6, 1.0, {2.0, 0.0}, 3));
  const auto noisy = p.cost_at;
  p.cost_at = [noisy, base = task.base_cost, quiet_from](int t) { return t < quiet_from ? noisy(t) : base; };
  ControllerConfig cfg;
  cfg.k_safe = 0.3;
  cfg.epsilon_target = 0.05;
  cfg.max_steps = 500;
  const auto r = run_annealing(p, cfg);
  EXPECT_EQ(r.status, RunStatus::ReachedTarget);
  int early = 0, late = 0;
  for (const auto& s : r.history) (s.step < quiet_from ? early : late) += s.decision == Decision::Pause;
  EXPECT_GE(early, 1);
  // step quiet_from compares against a noisy plan; later steps must cool
  for (const auto& s : r.history)
    if (s.step > quiet_from) EXPECT_EQ(s.decision, Decision::Cool) << s.step;
  expect_controller_semantics(r, cfg);
}

TEST(RunAnnealing, StallCarriesHistory) {
  CostProcess p = task_process(generate_task(6, 1.0, {5.0, 0.0}, 7));
  ControllerConfig cfg;
  cfg.k_safe = 1e-6;
  cfg.max_consecutive_pauses = 3;
  const auto r = run_annealing(p, cfg);
  EXPECT_EQ(r.status, RunStatus::Stalled);
  EXPECT_EQ(static_cast<int>(r.history.size()), 5);  // step 0 cools, then 4 pauses
  EXPECT_EQ(r.history.back().pause_count, 4);
}

TEST(RunAnnealing, SolverFailureCarriesHistory) {
  CostProcess p;
  const auto task = generate_task(4, 1.0, {}, 1);
  p.cost_at = [base = task.base_cost](int t) {
    CostMatrix C = base;
    if (t == 3) C.entries(0, 0) = std::nan("");
    return C;
  };
  ControllerConfig cfg;
  const auto r = run_annealing(p, cfg);
  EXPECT_EQ(r.status, RunStatus::SolverFailure);
  EXPECT_EQ(r.history.size(), 3u);
}

TEST(RunAnnealing, RejectsInvalidConfig) {
  const auto task = generate_task(4, 1.0, {}, 1);
  ControllerConfig cfg;
  cfg.epsilon_target = 2.0;
  EXPECT_THROW(run_annealing(static_process(task.base_cost, task.planted), cfg), InvalidInput);
  cfg = ControllerConfig{};
  cfg.schedule = Exponential{1.5};
  EXPECT_THROW(run_annealing(static_process(task.base_cost, task.planted), cfg), InvalidInput);
}

TEST(RunAnnealing, QuadraticStepsRespectSpeedLimit) {
  const auto task = generate_task(6, 1.0, {}, 2);
  ControllerConfig cfg;
  cfg.controller_enabled = false;
  cfg.schedule = Quadratic{0.5};
  cfg.epsilon_target = 0.05;
  cfg.max_steps = 2000;
  const auto r = run_annealing(static_process(task.base_cost, task.planted), cfg);
  ASSERT_EQ(r.status, RunStatus::ReachedTarget);
  for (std::size_t t = 0; t + 2 < r.history.size(); ++t) {  // last step may clamp to the target
    const double e = r.history[t].epsilon, d = e - r.history[t + 1].epsilon;
    EXPECT_NEAR(d / (e * e), 0.5, 1e-9);
  }
}

TEST(RunAnnealing, ExponentialStepsBreakSpeedLimit) {
  const auto task = generate_task(6, 1.0, {}, 2);
  ControllerConfig cfg;
  cfg.controller_enabled = false;
  cfg.schedule = Exponential{0.9};
  cfg.epsilon_target = 0.01;
  const auto r = run_annealing(static_process(task.base_cost, task.planted), cfg);
  ASSERT_EQ(r.status, RunStatus::ReachedTarget);
  const std::size_t last = r.history.size() - 3;  // final step clamps
  auto ratio = [&](std::size_t t) {
    const double e = r.history[t].epsilon;
    return (e - r.history[t + 1].epsilon) / (e * e);
  };
  const double predicted = r.history[0].epsilon / r.history[last].epsilon;
  EXPECT_NEAR(ratio(last) / ratio(0) / predicted, 1.0, 1e-9);
}

TEST(RunAnnealing, Deterministic) {
  const auto task = generate_task(6, 1.0, {2.0, 0.05}, 11);
  ControllerConfig cfg;
  cfg.k_safe = 0.3;
  cfg.schedule = GumbelExponential{0.95, 0.1, 5};
  cfg.controller_enabled = true;
  const auto a = run_annealing(task_process(task), cfg);
  const auto b = run_annealing(task_process(task), cfg);
  std::ostringstream oa, ob;
  write_step_log_jsonl(oa, a);
  write_step_log_jsonl(ob, b);
  EXPECT_EQ(oa.str(), ob.str());
  expect_controller_semantics(a, cfg);
}

TEST(DetectCollapse, LookaheadRule) {
  auto rec = [](bool ok, int tag) {
    StepRecord r;
    r.assignment_correct = ok;
    r.assignment = {tag};
    return r;
  };
  std::vector<StepRecord> h{rec(true, 0), rec(false, 1), rec(true, 0), rec(false, 2), rec(false, 2),
                            rec(false, 2), rec(false, 2), rec(false, 2), rec(false, 2)};
  EXPECT_EQ(detect_collapse(h, 5), 3);
  std::vector<StepRecord> ok{rec(true, 0), rec(true, 0)};
  EXPECT_EQ(detect_collapse(ok, 5), -1);
}

TEST(Calibration, ConstructedCollapseEpsilon) {
  const int n = 6, t_star = 7;
  std::vector<CostProcess> proxies;
  for (int k = 0; k < 3; ++k) {
    CostProcess p;
    p.reference = identity(n);
    p.cost_at = [n, k](int t) {
      return t < t_star + k ? permutation_cost(n, identity(n), 1.0) : permutation_cost(n, shifted(n), 1.0);
    };
    proxies.push_back(p);
  }
  CalibrationOptions opts;
  opts.epsilon_target = 1e-3;
  const auto cal = calibrate_k_safe(proxies, 0.8, {}, opts);
  ASSERT_EQ(cal.trials.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    const auto& tr = cal.trials[static_cast<std::size_t>(k)];
    EXPECT_TRUE(tr.collapsed);
    const double constructed = std::pow(0.8, t_star + k);
    EXPECT_LE(std::abs(std::log(tr.epsilon / constructed)), std::abs(std::log(0.8)) + 1e-12);
  }
  double best = 1e300;
  for (const auto& tr : cal.trials) best = std::min(best, tr.drift / tr.epsilon);
  EXPECT_DOUBLE_EQ(cal.k_safe_estimate, 0.8 * best);
  EXPECT_DOUBLE_EQ(cal.safety_factor, 0.8);
}

TEST(Calibration, StaticProxiesAreInconclusive) {
  const auto task = generate_task(5, 1.0, {}, 1);
  std::vector<CostProcess> proxies(3, static_process(task.base_cost, task.planted));
  EXPECT_THROW(calibrate_k_safe(proxies, 0.8), CalibrationInconclusive);
  proxies.pop_back();
  EXPECT_THROW(calibrate_k_safe(proxies, 0.8), InvalidInput);
}
