#include "ctol/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ctol/errors.hpp"

namespace ctol {

void TetherConfig::validate() const {
  if (!(length > 0.0)) throw ParameterError("tether.length must be > 0");
}

void GroundConfig::validate() const {
  if (!(rolling_friction >= 0.0))
    throw ParameterError("ground.rolling_friction must be >= 0");
  if (!(min_airborne_speed > 0.0))
    throw ParameterError("ground.min_airborne_speed must be > 0");
}

StateDerivative rhs_airborne(const FlightState& x, const ControlInput& u,
                             const Plant& plant) {
  const double v = x.airspeed;
  if (!(v >= plant.ground.min_airborne_speed)) {
    throw SingularityError("airborne airspeed " + std::to_string(v) +
                           " m/s below minimum " +
                           std::to_string(plant.ground.min_airborne_speed));
  }
  if (!(x.elevation < std::numbers::pi / 2) || !(x.elevation > -std::numbers::pi / 2)) {
    throw GeometryError("elevation " + std::to_string(x.elevation) +
                        " rad outside (-pi/2, pi/2)");
  }
  const double m = plant.aircraft.mass;
  const double g = plant.env.gravity;
  const double r = plant.tether.length;
  const double alpha = x.angle_of_attack();
  const auto f = aero_forces(plant.aircraft, plant.env, plant.polar, v, alpha);

  const double cb = std::cos(x.elevation);
  const double cg = std::cos(x.flight_path);
  const double sg = std::sin(x.flight_path);

  StateDerivative d;
  d.azimuth_rate = v * cg / (r * cb);
  d.elevation_rate = v * sg / r;
  d.pitch_rate = u.pitch_rate;
  d.airspeed_rate = (-f.drag + u.thrust * std::cos(alpha) - m * g * cb * sg) / m;
  d.flight_path_rate = (f.lift + u.thrust * std::sin(alpha) - m * g * cb * cg -
                        (m * v * v / r) * std::tan(x.elevation) * cg) /
                       (m * v);
  return d;
}

double ground_normal_force(const FlightState& x, const ControlInput& u,
                           const Plant& plant) {
  const auto f =
      aero_forces(plant.aircraft, plant.env, plant.polar, x.airspeed, x.pitch);
  return std::max(0.0, plant.aircraft.mass * plant.env.gravity - f.lift -
                           u.thrust * std::sin(x.pitch));
}

bool lift_off_condition(const FlightState& x, const ControlInput& u,
                        const Plant& plant) {
  if (ground_normal_force(x, u, plant) > 0.0) return false;
  // Airborne gamma-dot numerator at beta = gamma = 0, alpha = theta.
  const auto f =
      aero_forces(plant.aircraft, plant.env, plant.polar, x.airspeed, x.pitch);
  return f.lift + u.thrust * std::sin(x.pitch) -
             plant.aircraft.mass * plant.env.gravity >=
         0.0;
}

StateDerivative rhs_ground_roll(const FlightState& x, const ControlInput& u,
                                const Plant& plant) {
  const double m = plant.aircraft.mass;
  const double v = std::max(0.0, x.airspeed);
  const auto f = aero_forces(plant.aircraft, plant.env, plant.polar, v, x.pitch);
  const double normal = ground_normal_force(x, u, plant);
  const double friction = plant.ground.rolling_friction * normal;
  const double drive = u.thrust * std::cos(x.pitch) - f.drag;

  StateDerivative d;
  d.azimuth_rate = v / plant.tether.length;
  d.pitch_rate = (x.pitch <= 0.0 && u.pitch_rate < 0.0) ? 0.0 : u.pitch_rate;
  if (v > 0.0) {
    d.airspeed_rate = (drive - friction) / m;
  } else {
    // Static friction holds the aircraft until the drive exceeds it.
    d.airspeed_rate = std::max(0.0, drive - friction) / m;
  }
  return d;
}

double tether_tension(const FlightState& x, const Plant& plant) {
  const double m = plant.aircraft.mass;
  const double r = plant.tether.length;
  const double cb = std::cos(x.elevation);
  const double phi_dot = x.airspeed * std::cos(x.flight_path) / (r * cb);
  const double beta_dot = x.airspeed * std::sin(x.flight_path) / r;
  return m * r * (beta_dot * beta_dot + phi_dot * phi_dot * cb * cb) -
         m * plant.env.gravity * std::sin(x.elevation);
}

double height(double elevation, const TetherConfig& tether) {
  if (!(elevation >= 0.0 && elevation <= std::numbers::pi / 2))
    throw GeometryError("elevation " + std::to_string(elevation) +
                        " rad outside [0, pi/2]");
  return tether.length * std::sin(elevation);
}

double height_to_elevation(double h, const TetherConfig& tether) {
  if (!(h >= 0.0 && h <= tether.length))
    throw GeometryError("height " + std::to_string(h) + " m outside [0, " +
                        std::to_string(tether.length) + "]");
  return std::asin(h / tether.length);
}

double climb_rate(const FlightState& x) {
  return x.airspeed * std::sin(x.flight_path) * std::cos(x.elevation);
}

}  // namespace ctol
