#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "annealot/error.hpp"
#include "annealot/tracking.hpp"

using namespace annealot;

namespace {

TrackingParams unit_params() {
  TrackingParams p;
  p.gamma = 1.0;
  p.sensitivity_const = 1.0;
  p.kappa = 1.0;
  p.basin_radius = 1.0;
  p.epsilon_start = 1.0;
  return p;
}

}  // namespace

TEST(SimulateTracking, FrozenScheduleContracts) {
  TrackingParams p = unit_params();
  p.epsilon_start = 0.2;
  p.schedule = Frozen{};
  p.initial_error = 1e-3;
  const auto tr = simulate_tracking(p, 50);
  ASSERT_EQ(tr.records.size(), 51u);
  for (std::size_t t = 1; t < tr.records.size(); ++t) {
    EXPECT_EQ(tr.records[t].delta, 0.0);
    EXPECT_NEAR(tr.records[t].error / tr.records[t - 1].error, 1.0 - 0.2, 1e-12);
  }
  EXPECT_FALSE(tr.escape_step);
}

TEST(NeumannRecurrence, GeometricLimit) {
  EXPECT_NEAR(neumann_recurrence(0.9, 0.01, 200), 0.1, 1e-6);
}

TEST(NeumannRecurrence, LimitWithinOnePercentAfterTenTimeConstants) {
  for (double rho : {0.5, 0.9, 0.99}) {
    const double u = 0.003;
    const int steps = static_cast<int>(std::ceil(10.0 / (1.0 - rho)));
    const double e = neumann_recurrence(rho, u, steps);
    EXPECT_NEAR(e / (u / (1.0 - rho)), 1.0, 0.01) << rho;
  }
}

TEST(SimulateTracking, ExponentialEscapesBeforeOneHundredth) {
  TrackingParams p = unit_params();
  p.schedule = Exponential{0.95};
  const auto tr = simulate_tracking(p, 10000);
  ASSERT_TRUE(tr.escape_step);
  EXPECT_GT(*tr.escape_epsilon, 0.01);
  // Frozen from the first run of the recurrence.
  EXPECT_EQ(*tr.escape_step, 34);
  EXPECT_DOUBLE_EQ(*tr.escape_epsilon, 0.17482461472379698);
  for (std::size_t t = 0; t < tr.records.size(); ++t)
    EXPECT_EQ(tr.records[t].escaped, static_cast<int>(t) >= *tr.escape_step);
}

TEST(SimulateTracking, RecordsFollowTheRecurrence) {
  TrackingParams p = unit_params();
  p.gamma = 0.5;
  p.sensitivity_const = 0.3;
  p.kappa = 2.0;
  p.schedule = Exponential{0.9};
  p.initial_error = 0.01;
  const auto tr = simulate_tracking(p, 20);
  for (std::size_t t = 0; t + 1 < tr.records.size(); ++t) {
    const auto& a = tr.records[t];
    const auto& b = tr.records[t + 1];
    EXPECT_DOUBLE_EQ(b.epsilon, 0.9 * a.epsilon);
    EXPECT_DOUBLE_EQ(a.drift, 0.3 / a.epsilon * a.delta * 2.0);
    EXPECT_NEAR(b.error, (1 - 0.5 * b.epsilon) * (a.error + a.drift), 1e-15);
  }
}

TEST(SteadyStateBound, Examples) {
  TrackingParams p = unit_params();
  EXPECT_NEAR(steady_state_bound(p, 0.1, 0.01), 1.0, 1e-12);
  p.gamma = 0.7;
  p.sensitivity_const = 0.4;
  p.kappa = 1.5;
  for (double eps : {0.5, 0.1, 0.01}) EXPECT_NEAR(steady_state_bound(p, eps, eps * eps), 0.4 * 1.5 / 0.7, 1e-12);
  const double alpha = 0.95;
  const double b1 = steady_state_bound(p, 0.2, (1 - alpha) * 0.2);
  const double b2 = steady_state_bound(p, 0.1, (1 - alpha) * 0.1);
  EXPECT_NEAR(b2 / b1, 2.0, 1e-12);
}

TEST(CriticalEpsilon, LinearBasinUnitParameters) {
  TrackingParams p = unit_params();
  const auto c = critical_epsilon(p, 0.95);
  // (1 - alpha) s kappa / (gamma^2 eps^2) * eps = R eps at the crossing
  const double oracle = std::sqrt((1 - 0.95) * 1 * 1 / (1 * 1 * 1));
  EXPECT_NEAR(c.analytic, oracle, 1e-15);
  EXPECT_NEAR(c.analytic, 0.2236, 1e-4);
  EXPECT_TRUE(c.collapse);
  ASSERT_TRUE(c.simulated);
  EXPECT_LT(*c.simulated, c.analytic);
  EXPECT_GT(*c.simulated, c.analytic / 2);
}

TEST(CriticalEpsilon, SlowerCoolingLowersTheCrossing) {
  TrackingParams p = unit_params();
  double prev = 1e300;
  for (double alpha : {0.9, 0.99, 0.999, 0.99999}) {
    const double c = critical_epsilon(p, alpha).analytic;
    EXPECT_LT(c, prev);
    prev = c;
  }
  EXPECT_LT(prev, 0.01);
}

TEST(CriticalEpsilon, QuadraticHasNoCrossingUnderConstantBasin) {
  TrackingParams p = unit_params();
  p.basin = BasinMode::Constant;
  p.gamma = 0.5;
  p.sensitivity_const = 0.2;  // s kappa / gamma = 0.4 < R
  p.schedule = Quadratic{0.5};
  const auto c = critical_epsilon(p, 0.95);
  EXPECT_FALSE(c.collapse);
  EXPECT_EQ(c.analytic, 0.0);
  EXPECT_FALSE(c.simulated);
}

TEST(CriticalEpsilon, ConstantBasinFormula) {
  TrackingParams p = unit_params();
  p.basin = BasinMode::Constant;
  p.gamma = 0.5;
  p.sensitivity_const = 0.2;
  EXPECT_NEAR(critical_epsilon(p, 0.95).analytic, 0.2 * 0.05 / 0.5, 1e-15);
}

TEST(Controller, ClosesTheLoopUnderConstantBasin) {
  for (double g : {0.25, 0.9})
    for (double s : {0.05, 0.2}) {
      TrackingParams p = unit_params();
      p.basin = BasinMode::Constant;
      p.gamma = g;
      p.sensitivity_const = s;
      p.schedule = Exponential{0.95};
      ASSERT_TRUE(simulate_tracking(p, 10000).escape_step);
      p.k_safe = g * p.basin_radius / p.kappa;
      const auto tr = simulate_tracking(p, 10000);
      EXPECT_FALSE(tr.escape_step);
      EXPECT_GT(tr.pauses, 0);
    }
}

TEST(Tracking, ValidatesParameters) {
  TrackingParams p = unit_params();
  p.kappa = 0.5;
  EXPECT_THROW(simulate_tracking(p, 10), InvalidInput);
  p = unit_params();
  p.gamma = 2.0;
  EXPECT_THROW(simulate_tracking(p, 10), InvalidInput);
}

TEST(Tracking, CsvLayout) {
  TrackingParams p = unit_params();
  p.epsilon_start = 0.5;
  p.schedule = Exponential{0.5};
  const auto tr = simulate_tracking(p, 1);
  std::ostringstream o;
  write_tracking_csv(o, tr);
  EXPECT_EQ(o.str(),
            "step,epsilon,delta,drift,error,bound,escaped\n"
            "0,0.5,0.25,0.5,0,1,0\n"
            "1,0.25,0.125,0.5,0.375,2,1\n");
}
