#include "ctol/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ctol {

PidLoop::PidLoop(const PidGains& gains) : gains_(gains) {}

void PidLoop::reset() {
  integral_ = 0.0;
  previous_error_ = 0.0;
  has_previous_ = false;
}

double PidLoop::step(double reference, double measurement, double dt) {
  const double error = reference - measurement;
  const double derivative = has_previous_ ? (error - previous_error_) / dt : 0.0;
  previous_error_ = error;
  has_previous_ = true;

  const double candidate = integral_ + error * dt;
  const double raw = gains_.kp * error + gains_.ki * candidate + gains_.kd * derivative;
  const bool high = raw > gains_.output_max;
  const bool low = raw < gains_.output_min;
  if (!gains_.conditional_integration || (!high && !low) || (high && error < 0.0) || (low && error > 0.0)) {
    integral_ = candidate;
    return std::clamp(raw, gains_.output_min, gains_.output_max);
  }
  const double frozen = gains_.kp * error + gains_.ki * integral_ + gains_.kd * derivative;
  return std::clamp(frozen, gains_.output_min, gains_.output_max);
}

double pid_step(PidLoop& loop, double reference, double measurement, double dt) {
  return loop.step(reference, measurement, dt);
}

ReducedState reduce(const FlightState& x) {
  return {x.elevation, x.airspeed, x.flight_path, x.pitch};
}

ControlInput to_control(const ReducedControl& u) { return {u[0], u[1]}; }

ReducedControl to_vector(const ControlInput& u) { return {u.thrust, u.pitch_rate}; }

double wrap_angle(double angle) {
  if (angle > -std::numbers::pi && angle <= std::numbers::pi) return angle;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle + std::numbers::pi, two_pi);
  if (a <= 0.0) a += two_pi;
  return a - std::numbers::pi;
}

ReducedControl lqr_command(const LqrLaw& law, const FlightState& state) {
  ReducedState err = reduce(state) - law.x_ref;
  err[0] = wrap_angle(err[0]);
  err[2] = wrap_angle(err[2]);
  err[3] = wrap_angle(err[3]);
  return law.u_ref - law.gain * err;
}

ControlInput lqr_step(const LqrLaw& law, const FlightState& state,
                      const AircraftConfig& config) {
  return saturate(to_control(lqr_command(law, state)), config);
}

ControlInput saturate(const ControlInput& u, const AircraftConfig& config) {
  return {std::clamp(u.thrust, config.thrust_min, config.thrust_max),
          std::clamp(u.pitch_rate, -config.pitch_rate_limit, config.pitch_rate_limit)};
}

}  // namespace ctol
