#pragma once

#include <Eigen/Core>

#include "ctol/airframe.hpp"
#include "ctol/dynamics.hpp"

namespace ctol {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double output_min = -1e300;
  double output_max = 1e300;
  /// false: plain integration (the integrator keeps running in saturation).
  bool conditional_integration = true;

  bool operator==(const PidGains&) const = default;
};

/// Parallel-form discrete PID, u = kp e + ki sum(e dt) + kd (e - e_prev) / dt.
///
/// Derivative acts on the error by backward difference and is zero on the
/// first call after construction or reset(). Anti-windup is conditional
/// integration: the integrator only advances when the output is inside its
/// bounds, or when the error pushes a saturated output back inward. It can
/// be switched off per loop.
class PidLoop {
 public:
  PidLoop() = default;
  explicit PidLoop(const PidGains& gains);

  double step(double reference, double measurement, double dt);
  void reset();

  double integral() const { return integral_; }
  const PidGains& gains() const { return gains_; }

 private:
  PidGains gains_;
  double integral_ = 0.0;
  double previous_error_ = 0.0;
  bool has_previous_ = false;
};

/// Free function form of PidLoop::step.
double pid_step(PidLoop& loop, double reference, double measurement, double dt);

using ReducedState = Eigen::Vector4d;    // (beta, V_a, gamma, theta)
using ReducedControl = Eigen::Vector2d;  // (F_p, omega_q)
using FeedbackGain = Eigen::Matrix<double, 2, 4>;

ReducedState reduce(const FlightState& state);
ControlInput to_control(const ReducedControl& u);
ReducedControl to_vector(const ControlInput& u);

/// State feedback about an operating point: u = u_ref - K (x - x_ref).
struct LqrLaw {
  ReducedState x_ref = ReducedState::Zero();
  ReducedControl u_ref = ReducedControl::Zero();
  FeedbackGain gain = FeedbackGain::Zero();
};

/// Feedback before saturation. Angle errors are wrapped to (-pi, pi].
ReducedControl lqr_command(const LqrLaw& law, const FlightState& state);

/// lqr_command followed by saturate().
ControlInput lqr_step(const LqrLaw& law, const FlightState& state,
                      const AircraftConfig& config);

/// Componentwise clamp to the thrust and pitch-rate limits.
ControlInput saturate(const ControlInput& u, const AircraftConfig& config);

double wrap_angle(double angle);

}  // namespace ctol
