#pragma once

#include "ctol/airframe.hpp"

namespace ctol {

/// Longitudinal tethered-flight state. Angles in radians; angle of attack is
/// derived as theta - gamma and never stored.
struct FlightState {
  double azimuth = 0.0;      // phi
  double elevation = 0.0;    // beta
  double airspeed = 0.0;     // V_a, m/s
  double flight_path = 0.0;  // gamma
  double pitch = 0.0;        // theta
  bool grounded = true;

  double angle_of_attack() const { return pitch - flight_path; }
  bool operator==(const FlightState&) const = default;
};

struct ControlInput {
  double thrust = 0.0;      // F_p, N
  double pitch_rate = 0.0;  // omega_q, rad/s
  bool operator==(const ControlInput&) const = default;
};

struct TetherConfig {
  double length = 2.4;  // m

  void validate() const;
  bool operator==(const TetherConfig&) const = default;
};

/// Ground contact model. Not part of the flight equations; the airborne model
/// says nothing about the runway.
struct GroundConfig {
  double rolling_friction = 0.03;
  double min_airborne_speed = 0.5;  // m/s, guards the 1/V_a in gamma-dot

  void validate() const;
  bool operator==(const GroundConfig&) const = default;
};

struct StateDerivative {
  double azimuth_rate = 0.0;
  double elevation_rate = 0.0;
  double airspeed_rate = 0.0;
  double flight_path_rate = 0.0;
  double pitch_rate = 0.0;
};

/// Everything the right-hand side needs besides state and control.
struct Plant {
  AircraftConfig aircraft;
  Environment env;
  AeroPolar polar = default_polar();
  TetherConfig tether;
  GroundConfig ground;
};

/// Airborne model on the tether sphere (r constant, taut):
///   phi'   = V cos(gamma) / (r cos(beta))
///   beta'  = V sin(gamma) / r
///   theta' = omega_q
///   m V'       = -F_D + F_p cos(alpha) - m g cos(beta) sin(gamma)
///   m V gamma' = F_L + F_p sin(alpha) - m g cos(beta) cos(gamma)
///                - (m V^2 / r) tan(beta) cos(gamma)
StateDerivative rhs_airborne(const FlightState& state, const ControlInput& control,
                             const Plant& plant);

/// Runway roll along the circle at beta = gamma = 0 with rolling friction
/// mu * N, N = max(0, m g - F_L - F_p sin(theta)). Pitch cannot go below zero
/// and speed never goes negative.
StateDerivative rhs_ground_roll(const FlightState& state, const ControlInput& control,
                                const Plant& plant);

/// Normal force on the gear for a grounded state (zero at or past lift-off).
double ground_normal_force(const FlightState& state, const ControlInput& control,
                           const Plant& plant);

/// True when the wheels unload and the airborne gamma-dot is non-negative.
bool lift_off_condition(const FlightState& state, const ControlInput& control,
                        const Plant& plant);

/// Radial balance with r' = r'' = 0:
///   F_t = m r (beta'^2 + phi'^2 cos^2 beta) - m g sin(beta).
/// F_t >= 0 means taut; negative values are returned, not rejected.
double tether_tension(const FlightState& state, const Plant& plant);

/// Altitude of the aircraft on the tether sphere, h = r sin(beta).
double height(double elevation, const TetherConfig& tether);
/// Inverse of height(); throws GeometryError unless 0 <= h <= r.
double height_to_elevation(double h, const TetherConfig& tether);

/// Vertical speed h' = r beta' cos(beta) = V sin(gamma) cos(beta).
double climb_rate(const FlightState& state);

}  // namespace ctol
