#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ctol/dynamics.hpp"
#include "ctol/phase.hpp"

namespace ctol {

struct SimSettings {
  double dt = 1e-3;              // s
  double max_time = 120.0;       // s
  double event_tolerance = 1e-3; // s, must not exceed dt

  void validate() const;
  bool operator==(const SimSettings&) const = default;
};

/// Called on every right-hand-side evaluation with the state, the held
/// control and the derivative. Used by invariant checks.
using RhsObserver = std::function<void(const FlightState&, const ControlInput&,
                                       const StateDerivative&)>;

/// Classical fourth-order Runge-Kutta on any vector type supporting
/// `x + h * k`.
template <class Vec, class Field>
Vec rk4(const Vec& x, double dt, Field&& f) {
  const Vec k1 = f(x);
  const Vec k2 = f(Vec(x + (0.5 * dt) * k1));
  const Vec k3 = f(Vec(x + (0.5 * dt) * k2));
  const Vec k4 = f(Vec(x + dt * k3));
  return Vec(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

/// One RK4 step of the tethered model with the control held over the step.
/// The ground/air regime of `state` is kept for all four stages; dynamics
/// errors are rethrown as IntegrationError naming the stage.
FlightState rk4_step(const FlightState& state, const ControlInput& control,
                     double dt, const Plant& plant,
                     const RhsObserver* observer = nullptr);

/// Regime switch at a step boundary: lift-off for grounded states, touchdown
/// when an airborne state reaches beta <= 0. Returns true when it switched.
bool apply_contact(FlightState& state, const ControlInput& control,
                   const Plant& plant);

enum class ExitReason { Predicate, Timeout };

struct Segment {
  FlightState state;
  std::int64_t step;  // step index at which the segment ended
  ExitReason reason;
};

using ControlLaw = std::function<ControlInput(double t, const FlightState&)>;
using StopPredicate = std::function<bool(double t, const FlightState&)>;
using StepSink = std::function<void(double t, const FlightState&, const ControlInput&)>;

/// Steps from `first_step` until `stop` holds at a step boundary or time
/// reaches settings.max_time. Time is step * dt. The sink sees every step's
/// pre-step state and held control.
Segment run_until(const Plant& plant, FlightState state, std::int64_t first_step,
                  const ControlLaw& law, const StopPredicate& stop,
                  const SimSettings& settings, const StepSink& sink = {},
                  const RhsObserver* observer = nullptr);

struct TelemetryRecord {
  double t;
  Phase phase;
  double azimuth_deg;
  double elevation_deg;
  double height;
  double airspeed;
  double flight_path_deg;
  double pitch_deg;
  double alpha_deg;
  double thrust;
  double pitch_rate_degs;
  double lift;
  double drag;
  double tension;
  bool grounded;
};

TelemetryRecord make_record(double t, Phase phase, const FlightState& state,
                            const ControlInput& control, const Plant& plant);

}  // namespace ctol
