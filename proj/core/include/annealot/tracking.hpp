#pragma once

#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "annealot/anneal.hpp"

namespace annealot {

struct Frozen {};
using TrackingSchedule = std::variant<Exponential, Quadratic, Frozen>;

enum class BasinMode { Linear, Constant };  // R * eps or R

struct TrackingParams {
  double gamma = 1.0;              // 1 - rho(J_eps) = gamma * eps
  double sensitivity_const = 1.0;  // ||dP*/deps|| = s / eps
  double kappa = 1.0;
  double basin_radius = 1.0;
  BasinMode basin = BasinMode::Linear;
  double epsilon_start = 1.0;
  TrackingSchedule schedule = Exponential{};
  double initial_error = 0.0;
  std::optional<double> k_safe;  // set: pause whenever drift > k_safe * eps
};

void validate(const TrackingParams& p);

double basin_at(const TrackingParams& p, double epsilon);

struct TrackingRecord {
  int step = 0;
  double epsilon = 0.0;  // eps_t
  double delta = 0.0;    // eps_t - eps_{t+1}
  double drift = 0.0;    // (s / eps_t) * delta * kappa
  double error = 0.0;    // e_t
  double bound = 0.0;    // steady_state_bound(eps_t, delta)
  bool escaped = false;  // sticky once e_t > basin(eps_t)
};

struct TrackingTrace {
  std::vector<TrackingRecord> records;
  std::optional<int> escape_step;
  std::optional<double> escape_epsilon;
  int pauses = 0;
};

// e_{t+1} = rho_t (e_t + drift_t), rho_t = 1 - gamma eps_{t+1}. Records steps+1 states
// (fewer if eps underflows).
TrackingTrace simulate_tracking(const TrackingParams& params, int steps);

double steady_state_bound(const TrackingParams& params, double epsilon, double delta);

// e_{t+1} = rho e_t + u from e_0.
double neumann_recurrence(double rho, double u, int steps, double e0 = 0.0);

struct CriticalEpsilon {
  double analytic = 0.0;          // 0 with collapse = false when no crossing exists
  std::optional<double> simulated;
  bool collapse = false;
};

// Exponential(alpha) crossing of the steady-state bound with the basin. A
// Quadratic params.schedule is analysed instead of alpha.
CriticalEpsilon critical_epsilon(const TrackingParams& params, double alpha, int steps = 10000);

void write_tracking_csv(std::ostream& out, const TrackingTrace& trace);

}  // namespace annealot
