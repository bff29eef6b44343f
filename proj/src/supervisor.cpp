#include "ctol/supervisor.hpp"

#include <algorithm>
#include <cmath>

#include "ctol/errors.hpp"
#include "ctol/units.hpp"

namespace ctol {

void ScenarioSpec::validate() const {
  if (takeoff_time && !(*takeoff_time >= 0.0))
    throw ParameterError("scenario.takeoff_time must be >= 0");
  if (takeoff_time && !(*takeoff_time < landing_time))
    throw ParameterError("scenario.takeoff_time must be < scenario.landing_time");
}

ControllerSettings default_controllers() {
  ControllerSettings c;
  c.p1_theta = {1.00, 0.001, 0.01, 0.0};
  c.p1_airspeed = {0.7, 0.08, 0.05, 7.98};
  c.p2_theta = {30.00, 0.01, 1.00, deg_to_rad(12.0)};
  c.p2_airspeed = {10.00, 0.10, 0.01, 7.98};
  c.p5_gamma = {9.00, 0.01, 0.10, 0.0};
  c.p5_airspeed = {10.00, 0.10, 1.00, 8.29};
  c.p5_theta_ceiling = deg_to_rad(9.0);
  c.p7_theta = {1.00, 0.01, 0.50, deg_to_rad(12.0)};
  c.p3.x_ref = {deg_to_rad(5.00), 8.25, deg_to_rad(3.00), deg_to_rad(12.00)};
  c.p3.weights.q_diag = {0.0, 0.015, 364.76, 22.80};
  c.p3.weights.r_diag = {4.83, 959.18};
  c.p4.x_ref = {deg_to_rad(7.18), 10.84, 0.0, 0.0};
  c.p4.weights.q_diag = {64.0, 0.085, 5620.0, 33.0};  // (0.064, 0.085e-3, 5.62, 0.033) x 1e3
  c.p4.weights.r_diag = {2.61, 8.21};
  c.p6.x_ref = {deg_to_rad(2.39), 7.81, deg_to_rad(-1.00), deg_to_rad(8.00)};
  c.p6.weights.q_diag = {0.0, 0.015, 1460.0, 37.0};  // (0, 0.015e-3, 1.46, 0.037) x 1e3
  c.p6.weights.r_diag = {46.91, 33.29};
  c.reference_mode = ReferenceMode::Trim;
  // Plain integration on every tabulated loop. With conditional integration
  // the airspeed loops approach V_rot and V_glide asymptotically from one
  // side and the phase predicates fire late or never.
  for (PidSetting* s : {&c.p1_theta, &c.p1_airspeed, &c.p2_theta, &c.p2_airspeed,
                        &c.p5_gamma, &c.p5_airspeed, &c.p7_theta})
    s->conditional_integration = false;
  return c;
}

PhaseDescriptor describe(Phase phase) {
  switch (phase) {
    case Phase::Rest:
      return {phase, Binding::None, Phase::Accelerate, "t >= takeoff command"};
    case Phase::Accelerate:
      return {phase, Binding::TwoPid, Phase::Rotate, "V_a >= V_rot"};
    case Phase::Rotate:
      return {phase, Binding::TwoPid, Phase::InitialClimb, "theta >= theta_rot"};
    case Phase::InitialClimb:
      return {phase, Binding::Lqr, Phase::Loiter, "h >= h_0"};
    case Phase::Loiter:
      return {phase, Binding::Lqr, Phase::Decelerate, "t >= landing command"};
    case Phase::Decelerate:
      return {phase, Binding::TwoPid, Phase::Glide, "V_a <= V_glide"};
    case Phase::Glide:
      return {phase, Binding::Lqr, Phase::Flare, "h <= h_flare"};
    case Phase::Flare:
      return {phase, Binding::OnePid, Phase::RollOut, "touchdown"};
    case Phase::RollOut:
      return {phase, Binding::OpenLoop, Phase::Rest, "V_a <= stop speed"};
    case Phase::Ascend:
    case Phase::TetheredFlight:
    case Phase::Descend:
      return {phase, Binding::Stub, std::nullopt, "not simulated"};
  }
  return {phase, Binding::Stub, std::nullopt, "unknown"};
}

Phase next_phase(Phase current, double t, const FlightState& x,
                 const ScenarioSpec& spec, const PhaseParams& p,
                 const TetherConfig& tether) {
  const double h = tether.length * std::sin(x.elevation);
  bool advance = false;
  switch (current) {
    case Phase::Rest:
      advance = spec.takeoff_time.has_value() && t >= *spec.takeoff_time;
      break;
    case Phase::Accelerate:
      advance = x.airspeed >= p.v_rot;
      break;
    case Phase::Rotate:
      advance = x.pitch >= p.theta_rot;
      break;
    case Phase::InitialClimb:
      advance = h >= p.h0;
      break;
    case Phase::Loiter:
      advance = t >= spec.landing_time;
      break;
    case Phase::Decelerate:
      advance = x.airspeed <= p.v_glide;
      break;
    case Phase::Glide:
      advance = h <= p.h_flare;
      break;
    case Phase::Flare:
      advance = x.grounded;
      break;
    case Phase::RollOut:
      advance = x.grounded && x.airspeed <= p.stop_speed;
      break;
    default:
      return current;
  }
  if (!advance) return current;
  return *describe(current).successor;
}

const LqrDesign* PhaseDesigns::for_phase(Phase phase) const {
  switch (phase) {
    case Phase::InitialClimb:
      return climb ? &*climb : nullptr;
    case Phase::Loiter:
      return loiter ? &*loiter : nullptr;
    case Phase::Glide:
      return glide ? &*glide : nullptr;
    default:
      return nullptr;
  }
}

OperatingPoint operating_point_for(Phase phase, const ControllerSettings& c,
                                   const PhaseParams& p, const Plant& plant) {
  const LqrSetting* setting = nullptr;
  TrimSpec spec;
  switch (phase) {
    case Phase::InitialClimb:
      setting = &c.p3;
      spec = {c.p3.x_ref[0], p.gamma_climb, plant.polar.stall_angle(), {}, false};
      break;
    case Phase::Loiter:
      setting = &c.p4;
      spec = {height_to_elevation(p.h0, plant.tether), 0.0, plant.polar.steady_angle(),
              {}, true};
      break;
    case Phase::Glide:
      setting = &c.p6;
      spec = {c.p6.x_ref[0], p.gamma_glide, plant.polar.stall_angle(), {}, false};
      break;
    default:
      throw ParameterError("phase " + std::string(phase_label(phase)) +
                           " has no LQR operating point");
  }
  if (c.reference_mode == ReferenceMode::Table) {
    const auto& x = setting->x_ref;
    spec = {x[0], x[2], x[3] - x[2], x[1], phase == Phase::Loiter};
  }
  return solve_operating_point(spec, plant);
}

PhaseDesigns synthesize_designs(const ControllerSettings& c, const PhaseParams& p,
                                const Plant& plant) {
  PhaseDesigns d;
  d.climb = design_lqr(operating_point_for(Phase::InitialClimb, c, p, plant),
                       c.p3.weights, plant);
  d.loiter =
      design_lqr(operating_point_for(Phase::Loiter, c, p, plant), c.p4.weights, plant);
  d.glide =
      design_lqr(operating_point_for(Phase::Glide, c, p, plant), c.p6.weights, plant);
  return d;
}

namespace {

PidLoop pitch_pid(const PidSetting& s, const AircraftConfig& a) {
  return PidLoop({s.kp, s.ki, s.kd, -a.pitch_rate_limit, a.pitch_rate_limit,
                  s.conditional_integration});
}

PidLoop thrust_pid(const PidSetting& s, const AircraftConfig& a) {
  return PidLoop({s.kp, s.ki, s.kd, a.thrust_min, a.thrust_max,
                  s.conditional_integration});
}

}  // namespace

PhaseController::PhaseController(Phase phase, const ControllerSettings& c,
                                 const PhaseParams& /*params*/,
                                 const PhaseDesigns& designs,
                                 const AircraftConfig& aircraft, double dt)
    : phase_(phase), binding_(describe(phase).binding), aircraft_(aircraft), dt_(dt) {
  switch (phase) {
    case Phase::Accelerate:
      pitch_loop_ = pitch_pid(c.p1_theta, aircraft);
      thrust_loop_ = thrust_pid(c.p1_airspeed, aircraft);
      pitch_reference_ = c.p1_theta.reference;
      thrust_reference_ = c.p1_airspeed.reference;
      break;
    case Phase::Rotate:
      pitch_loop_ = pitch_pid(c.p2_theta, aircraft);
      thrust_loop_ = thrust_pid(c.p2_airspeed, aircraft);
      pitch_reference_ = c.p2_theta.reference;
      thrust_reference_ = c.p2_airspeed.reference;
      break;
    case Phase::Decelerate:
      pitch_loop_ = pitch_pid(c.p5_gamma, aircraft);
      thrust_loop_ = thrust_pid(c.p5_airspeed, aircraft);
      pitch_reference_ = c.p5_gamma.reference;
      thrust_reference_ = c.p5_airspeed.reference;
      pitch_ceiling_ = c.p5_theta_ceiling;
      track_flight_path_ = true;
      break;
    case Phase::Flare:
      pitch_loop_ = pitch_pid(c.p7_theta, aircraft);
      pitch_reference_ = c.p7_theta.reference;
      break;
    case Phase::InitialClimb:
    case Phase::Loiter:
    case Phase::Glide: {
      const LqrDesign* design = designs.for_phase(phase);
      if (design == nullptr)
        throw ParameterError("no LQR design synthesized for phase " +
                             std::string(phase_label(phase)));
      lqr_ = design->law();
      break;
    }
    case Phase::Rest:
    case Phase::RollOut:
      break;
    case Phase::Ascend:
    case Phase::TetheredFlight:
    case Phase::Descend:
      throw ParameterError("phase " + std::string(phase_label(phase)) +
                           " is outside the simulated take-off/landing cycle");
  }
}

ControlInput PhaseController::operator()(double /*t*/, const FlightState& x) {
  ControlInput u;
  switch (binding_) {
    case Binding::TwoPid: {
      const double measured = track_flight_path_ ? x.flight_path : x.pitch;
      u.pitch_rate = pitch_loop_.step(pitch_reference_, measured, dt_);
      u.thrust = thrust_loop_.step(thrust_reference_, x.airspeed, dt_);
      if (track_flight_path_) {
        // Hard pitch ceiling on top of the flight-path loop.
        u.pitch_rate = std::min(u.pitch_rate, (pitch_ceiling_ - x.pitch) / dt_);
      }
      break;
    }
    case Binding::OnePid:
      u.pitch_rate = pitch_loop_.step(pitch_reference_, x.pitch, dt_);
      u.thrust = 0.0;
      break;
    case Binding::Lqr:
      return lqr_step(lqr_, x, aircraft_);
    case Binding::None:
    case Binding::OpenLoop:
    case Binding::Stub:
      break;
  }
  return saturate(u, aircraft_);
}

PhaseController references_for_phase(Phase phase, const ControllerSettings& c,
                                     const PhaseParams& params,
                                     const PhaseDesigns& designs,
                                     const AircraftConfig& aircraft, double dt) {
  return PhaseController(phase, c, params, designs, aircraft, dt);
}

ScenarioResult run_scenario(const ScenarioSpec& spec, const PhaseParams& params,
                            const ControllerSettings& controllers,
                            const PhaseDesigns& designs, const Plant& plant,
                            const SimSettings& settings, const RhsObserver* observer) {
  ScenarioResult result;
  FlightState state;  // at rest on the runway
  Phase phase = Phase::Rest;
  std::int64_t step = 0;
  bool was_airborne = false;
  FlightState last_state = state;
  Phase last_phase = phase;

  const auto sink = [&](double t, const FlightState& x, const ControlInput& u) {
    if (was_airborne && x.grounded) {
      result.touchdowns.push_back(
          {t, last_phase, climb_rate(last_state), last_state.pitch});
    }
    was_airborne = !x.grounded;
    last_state = x;
    last_phase = phase;
    auto rec = make_record(t, phase, x, u, plant);
    if (!x.grounded && rec.tension < 0.0) ++result.slack_tether_records;
    result.telemetry.push_back(rec);
  };

  bool left_rest = false;
  while (true) {
    PhaseController controller(phase, controllers, params, designs, plant.aircraft,
                               settings.dt);
    const ControlLaw law = [&controller](double t, const FlightState& x) {
      return controller(t, x);
    };
    const StopPredicate stop = [&](double t, const FlightState& x) {
      return next_phase(phase, t, x, spec, params, plant.tether) != phase;
    };
    const double entry = static_cast<double>(step) * settings.dt;
    Segment seg;
    try {
      seg = run_until(plant, state, step, law, stop, settings, sink, observer);
    } catch (const Error& e) {
      result.phase_log.push_back({phase, entry, static_cast<double>(step) * settings.dt});
      result.stuck_phase = phase;
      result.diagnostic = std::string("phase ") + std::string(phase_label(phase)) +
                          " failed: " + e.what();
      return result;
    }
    const double exit = static_cast<double>(seg.step) * settings.dt;
    result.phase_log.push_back({phase, entry, exit});
    state = seg.state;
    step = seg.step;

    if (seg.reason == ExitReason::Timeout) {
      if (phase == Phase::Rest) {
        result.completed = true;  // idle: no take-off command before max_time
      } else {
        result.stuck_phase = phase;
        result.diagnostic = std::string("timeout in phase ") +
                            std::string(phase_label(phase)) + " at t = " +
                            std::to_string(exit);
      }
      return result;
    }
    phase = next_phase(phase, exit, state, spec, params, plant.tether);
    if (phase != Phase::Rest) left_rest = true;
    if (phase == Phase::Rest && left_rest) {
      result.telemetry.push_back(make_record(exit, phase, state, {}, plant));
      result.phase_log.push_back({phase, exit, exit});
      result.completed = true;
      return result;
    }
  }
}

}  // namespace ctol
