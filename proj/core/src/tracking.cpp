#include "annealot/tracking.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "annealot/cost_io.hpp"
#include "annealot/error.hpp"

namespace annealot {

void validate(const TrackingParams& p) {
  if (!(p.gamma > 0.0) || !(p.sensitivity_const > 0.0) || !(p.basin_radius > 0.0) || !(p.epsilon_start > 0.0))
    throw InvalidInput("tracking parameters must be positive");
  if (!(p.kappa >= 1.0)) throw InvalidInput("kappa must be at least 1");
  if (!(p.gamma * p.epsilon_start <= 1.0)) throw InvalidInput("gamma * epsilon_start must not exceed 1");
  if (!(p.initial_error >= 0.0)) throw InvalidInput("initial_error must be nonnegative");
  if (p.k_safe && !(*p.k_safe > 0.0)) throw InvalidInput("k_safe must be positive");
  if (const auto* e = std::get_if<Exponential>(&p.schedule); e && !(e->alpha > 0.0 && e->alpha < 1.0))
    throw InvalidInput("alpha must lie in (0, 1)");
  if (const auto* q = std::get_if<Quadratic>(&p.schedule); q && !(q->c > 0.0))
    throw InvalidInput("quadratic c must be positive");
}

double basin_at(const TrackingParams& p, double epsilon) {
  return p.basin == BasinMode::Linear ? p.basin_radius * epsilon : p.basin_radius;
}

double steady_state_bound(const TrackingParams& params, double epsilon, double delta) {
  return (1.0 / (params.gamma * epsilon)) * (params.sensitivity_const / epsilon) * delta * params.kappa;
}

double neumann_recurrence(double rho, double u, int steps, double e0) {
  double e = e0;
  for (int t = 0; t < steps; ++t) e = rho * e + u;
  return e;
}

TrackingTrace simulate_tracking(const TrackingParams& params, int steps) {
  validate(params);
  TrackingTrace trace;
  double eps = params.epsilon_start;
  double e = params.initial_error;
  bool escaped = false;
  for (int t = 0; t <= steps; ++t) {
    TrackingRecord rec;
    rec.step = t;
    rec.epsilon = eps;
    rec.error = e;
    if (!escaped && e > basin_at(params, eps)) {
      escaped = true;
      trace.escape_step = t;
      trace.escape_epsilon = eps;
    }
    rec.escaped = escaped;

    double next = std::visit(
        [eps](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Exponential>)
            return s.alpha * eps;
          else if constexpr (std::is_same_v<T, Quadratic>)
            return std::max(eps - s.c * eps * eps, 0.0);
          else
            return eps;
        },
        params.schedule);
    double delta = eps - next;
    double drift = (params.sensitivity_const / eps) * delta * params.kappa;
    if (params.k_safe && controller_decide(drift, eps, *params.k_safe) == Decision::Pause) {
      next = eps;
      delta = 0.0;
      drift = 0.0;
      ++trace.pauses;
    }
    rec.delta = delta;
    rec.drift = drift;
    rec.bound = steady_state_bound(params, eps, delta);
    trace.records.push_back(rec);
    if (t == steps || !(next >= std::numeric_limits<double>::min())) break;

    e = (1.0 - params.gamma * next) * (e + drift);
    eps = next;
  }
  return trace;
}

CriticalEpsilon critical_epsilon(const TrackingParams& params, double alpha, int steps) {
  validate(params);
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  const double s = params.sensitivity_const;
  const double k = params.kappa;
  const double g = params.gamma;
  const double R = params.basin_radius;
  CriticalEpsilon out;
  TrackingParams sim = params;

  if (const auto* q = std::get_if<Quadratic>(&params.schedule)) {
    // delta = c eps^2 makes the bound the constant c s kappa / gamma
    const double bound = q->c * s * k / g;
    if (params.basin == BasinMode::Constant) {
      out.collapse = bound > R;
      out.analytic = out.collapse ? params.epsilon_start : 0.0;
    } else {
      out.collapse = true;
      out.analytic = bound / R;
    }
  } else {
    // bound with delta = (1 - alpha) eps is s kappa (1 - alpha) / (gamma eps)
    const double a = s * k * (1.0 - alpha) / g;
    out.collapse = true;
    out.analytic = params.basin == BasinMode::Linear ? std::sqrt(a / R) : a / R;
    sim.schedule = Exponential{alpha};
  }
  const TrackingTrace trace = simulate_tracking(sim, steps);
  out.simulated = trace.escape_epsilon;
  return out;
}

void write_tracking_csv(std::ostream& out, const TrackingTrace& trace) {
  out << "step,epsilon,delta,drift,error,bound,escaped\n";
  for (const auto& r : trace.records)
    out << r.step << ',' << format_real(r.epsilon) << ',' << format_real(r.delta) << ',' << format_real(r.drift) << ','
        << format_real(r.error) << ',' << format_real(r.bound) << ',' << (r.escaped ? 1 : 0) << '\n';
}

}  // namespace annealot
