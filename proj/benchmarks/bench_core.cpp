#include <benchmark/benchmark.h>

#include "annealot/anneal.hpp"
#include "annealot/harness.hpp"
#include "annealot/spectral.hpp"
#include "annealot/tracking.hpp"
#include "annealot/transport.hpp"

namespace {

using namespace annealot;

void BM_SinkhornSolve(benchmark::State& state) {
  const auto task = generate_task(static_cast<int>(state.range(0)), 1.0, {}, 1);
  const double eps = static_cast<double>(state.range(1)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(sinkhorn_solve(task.base_cost, eps).plan.data());
}
BENCHMARK(BM_SinkhornSolve)->ArgsProduct({{8, 32, 128}, {100, 10, 5}})->Unit(benchmark::kMicrosecond);

void BM_WarmStartedSolve(benchmark::State& state) {
  const auto task = generate_task(static_cast<int>(state.range(0)), 1.0, {}, 1);
  const TransportSolution prev = sinkhorn_solve(task.base_cost, 0.105);
  for (auto _ : state) benchmark::DoNotOptimize(sinkhorn_solve(task.base_cost, 0.1, {}, &prev).plan.data());
}
BENCHMARK(BM_WarmStartedSolve)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_AnalyticJacobian(benchmark::State& state) {
  const auto task = generate_task(static_cast<int>(state.range(0)), 0.1, {}, 1);
  const TransportSolution sol = sinkhorn_solve(task.base_cost, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(analytic_jacobian(sol.plan).data());
}
BENCHMARK(BM_AnalyticJacobian)->Arg(8)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_SpectralReport(benchmark::State& state) {
  const auto task = generate_task(static_cast<int>(state.range(0)), 0.1, {}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_report(task.base_cost, 0.05).resolvent_norm);
}
BENCHMARK(BM_SpectralReport)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ControlledRun(benchmark::State& state) {
  const auto task = generate_task(8, 1.0, {3.0, 0.03}, 0);
  ControllerConfig cfg;
  cfg.k_safe = 0.3;
  cfg.max_steps = 3000;
  cfg.max_consecutive_pauses = 3000;
  for (auto _ : state) benchmark::DoNotOptimize(run_annealing(task_process(task), cfg).history.size());
}
BENCHMARK(BM_ControlledRun)->Unit(benchmark::kMillisecond);

void BM_TrackingSimulation(benchmark::State& state) {
  TrackingParams p;
  p.gamma = 0.5;
  p.sensitivity_const = 0.1;
  p.basin = BasinMode::Constant;
  p.schedule = Quadratic{0.5};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_tracking(p, 10000).records.size());
}
BENCHMARK(BM_TrackingSimulation)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
