#include "ctol/simkernel.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "ctol/errors.hpp"
#include "ctol/units.hpp"

namespace ctol {

namespace {

using Vec5 = Eigen::Matrix<double, 5, 1>;

Vec5 pack(const FlightState& x) {
  return (Vec5() << x.azimuth, x.elevation, x.airspeed, x.flight_path, x.pitch)
      .finished();
}

FlightState unpack(const Vec5& v, bool grounded) {
  return {v[0], v[1], v[2], v[3], v[4], grounded};
}

Vec5 pack(const StateDerivative& d) {
  return (Vec5() << d.azimuth_rate, d.elevation_rate, d.airspeed_rate,
          d.flight_path_rate, d.pitch_rate)
      .finished();
}

}  // namespace

void SimSettings::validate() const {
  if (!(dt > 0.0)) throw ParameterError("sim.dt must be > 0");
  if (!(max_time > 0.0)) throw ParameterError("sim.max_time must be > 0");
  if (!(event_tolerance > 0.0 && event_tolerance <= dt))
    throw ParameterError("sim.event_tolerance must be in (0, dt]");
}

FlightState rk4_step(const FlightState& state, const ControlInput& control,
                     double dt, const Plant& plant, const RhsObserver* observer) {
  const bool grounded = state.grounded;
  int stage = 0;
  auto field = [&](const Vec5& v) -> Vec5 {
    ++stage;
    const FlightState x = unpack(v, grounded);
    try {
      const StateDerivative d = grounded ? rhs_ground_roll(x, control, plant)
                                         : rhs_airborne(x, control, plant);
      if (observer != nullptr && *observer) (*observer)(x, control, d);
      return pack(d);
    } catch (const Error& e) {
      throw IntegrationError(stage, e.what());
    }
  };
  FlightState next = unpack(rk4(pack(state), dt, field), grounded);
  if (grounded) {
    next.elevation = 0.0;
    next.flight_path = 0.0;
    next.airspeed = std::max(0.0, next.airspeed);
    next.pitch = std::max(0.0, next.pitch);
  }
  return next;
}

bool apply_contact(FlightState& state, const ControlInput& control,
                   const Plant& plant) {
  if (state.grounded) {
    if (state.airspeed >= plant.ground.min_airborne_speed &&
        lift_off_condition(state, control, plant)) {
      state.grounded = false;
      return true;
    }
    return false;
  }
  if (state.elevation <= 0.0) {
    state.grounded = true;
    state.elevation = 0.0;
    state.flight_path = 0.0;
    state.pitch = std::max(0.0, state.pitch);
    return true;
  }
  return false;
}

Segment run_until(const Plant& plant, FlightState state, std::int64_t first_step,
                  const ControlLaw& law, const StopPredicate& stop,
                  const SimSettings& settings, const StepSink& sink,
                  const RhsObserver* observer) {
  for (std::int64_t k = first_step;; ++k) {
    const double t = static_cast<double>(k) * settings.dt;
    if (stop(t, state)) return {state, k, ExitReason::Predicate};
    if (t >= settings.max_time) return {state, k, ExitReason::Timeout};
    const ControlInput u = law(t, state);
    if (sink) sink(t, state, u);
    state = rk4_step(state, u, settings.dt, plant, observer);
    apply_contact(state, u, plant);
  }
}

TelemetryRecord make_record(double t, Phase phase, const FlightState& x,
                            const ControlInput& u, const Plant& plant) {
  const double alpha = x.angle_of_attack();
  AeroForces f{0.0, 0.0};
  if (alpha >= plant.polar.alpha_min() && alpha <= plant.polar.alpha_max())
    f = aero_forces(plant.aircraft, plant.env, plant.polar, x.airspeed, alpha);
  return {t,
          phase,
          rad_to_deg(x.azimuth),
          rad_to_deg(x.elevation),
          plant.tether.length * std::sin(x.elevation),
          x.airspeed,
          rad_to_deg(x.flight_path),
          rad_to_deg(x.pitch),
          rad_to_deg(alpha),
          u.thrust,
          rad_to_deg(u.pitch_rate),
          f.lift,
          f.drag,
          tether_tension(x, plant),
          x.grounded};
}

}  // namespace ctol
