#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctol/control.hpp"
#include "ctol/phase.hpp"
#include "ctol/simkernel.hpp"
#include "ctol/synthesis.hpp"
#include "ctol/units.hpp"

namespace ctol {

/// Phase transition thresholds and target values. Angles in radians.
struct PhaseParams {
  double v_rot = 7.98;
  double v_loiter = 10.84;
  double v_glide = 8.29;
  double gamma_climb = deg_to_rad(3.0);
  double gamma_glide = deg_to_rad(-1.0);
  double theta_rot = deg_to_rad(9.0);  // P2 -> P3 threshold
  double theta_flare = deg_to_rad(12.0);
  double h0 = 0.3;                            // m
  double h_flare = 0.063;                     // m
  double stop_speed = 0.05;                   // m/s, P8 -> Rest

  bool operator==(const PhaseParams&) const = default;
};

/// A PID gain set with its reference (radians or m/s).
struct PidSetting {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double reference = 0.0;
  bool conditional_integration = true;
  bool operator==(const PidSetting&) const = default;
};

/// Which operating points the LQR phases are linearized about.
enum class ReferenceMode {
  Table,  // tabulated references verbatim; u_ref from a pinned-airspeed fit
  Trim,   // tabulated elevation, phase flight path and characteristic alpha;
          // airspeed and thrust re-solved with the active polar
};

struct LqrSetting {
  ReducedState x_ref = ReducedState::Zero();  // (beta, V_a, gamma, theta)
  LqrWeights weights;
  bool operator==(const LqrSetting&) const = default;
};

struct ControllerSettings {
  PidSetting p1_theta, p1_airspeed;
  PidSetting p2_theta, p2_airspeed;
  PidSetting p5_gamma, p5_airspeed;
  double p5_theta_ceiling = deg_to_rad(9.0);
  PidSetting p7_theta;
  LqrSetting p3, p4, p6;
  ReferenceMode reference_mode = ReferenceMode::Trim;

  bool operator==(const ControllerSettings&) const = default;
};

struct ScenarioSpec {
  std::optional<double> takeoff_time = 0.0;  // unset: never take off
  double landing_time = 20.0;

  void validate() const;
  bool operator==(const ScenarioSpec&) const = default;
};

/// Shipped controller settings (tabulated gains, references and weights).
ControllerSettings default_controllers();

enum class Binding { None, TwoPid, OnePid, Lqr, OpenLoop, Stub };

struct PhaseDescriptor {
  Phase id;
  Binding binding;
  std::optional<Phase> successor;
  std::string transition;  // human-readable predicate
};

PhaseDescriptor describe(Phase phase);

/// Supervisor transition function. Stub phases never leave.
Phase next_phase(Phase current, double t, const FlightState& state,
                 const ScenarioSpec& spec, const PhaseParams& params,
                 const TetherConfig& tether);

/// LQR designs for P3, P4 and P6.
struct PhaseDesigns {
  std::optional<LqrDesign> climb, loiter, glide;
  const LqrDesign* for_phase(Phase phase) const;
};

OperatingPoint operating_point_for(Phase phase, const ControllerSettings& controllers,
                                   const PhaseParams& params, const Plant& plant);

/// Runs trim/linearization/CARE for the three LQR phases.
PhaseDesigns synthesize_designs(const ControllerSettings& controllers,
                                const PhaseParams& params, const Plant& plant);

/// Bound controllers for one phase; owns the PID states. Created fresh on
/// every phase entry, so integrators and derivative memory start at zero.
class PhaseController {
 public:
  PhaseController(Phase phase, const ControllerSettings& controllers,
                  const PhaseParams& params, const PhaseDesigns& designs,
                  const AircraftConfig& aircraft, double dt);

  ControlInput operator()(double t, const FlightState& state);
  Phase phase() const { return phase_; }
  Binding binding() const { return binding_; }

 private:
  Phase phase_;
  Binding binding_;
  AircraftConfig aircraft_;
  double dt_;
  PidLoop pitch_loop_;
  PidLoop thrust_loop_;
  double pitch_reference_ = 0.0;
  double thrust_reference_ = 0.0;
  double pitch_ceiling_ = 0.0;
  bool track_flight_path_ = false;
  LqrLaw lqr_;
};

PhaseController references_for_phase(Phase phase, const ControllerSettings& controllers,
                                     const PhaseParams& params,
                                     const PhaseDesigns& designs,
                                     const AircraftConfig& aircraft, double dt);

struct PhaseLogEntry {
  Phase phase;
  double entry_time;
  double exit_time;
};

struct TouchdownEvent {
  double t;
  Phase phase;
  double sink_rate;  // h' just before contact, m/s
  double pitch;      // rad
};

struct ScenarioResult {
  std::vector<TelemetryRecord> telemetry;
  std::vector<PhaseLogEntry> phase_log;
  std::vector<TouchdownEvent> touchdowns;
  std::size_t slack_tether_records = 0;
  bool completed = false;
  std::optional<Phase> stuck_phase;
  std::string diagnostic;
};

/// Flies the scenario from rest: Rest, P1..P8, Rest. Controllers are rebuilt
/// at each transition. A timeout leaves partial telemetry and names the phase.
ScenarioResult run_scenario(const ScenarioSpec& spec, const PhaseParams& params,
                            const ControllerSettings& controllers,
                            const PhaseDesigns& designs, const Plant& plant,
                            const SimSettings& settings,
                            const RhsObserver* observer = nullptr);

}  // namespace ctol
