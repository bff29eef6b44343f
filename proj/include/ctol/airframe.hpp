#pragma once

#include <span>
#include <vector>

#include "ctol/units.hpp"

namespace ctol {

/// Rigid-body and actuator parameters of the aircraft. Angles in radians.
struct AircraftConfig {
  double mass = 0.350;                 // kg
  double wing_area = 0.0576;           // m^2
  double wingspan = 0.60;              // m
  double incidence = deg_to_rad(6.0);  // metadata only
  double thrust_min = 0.0;             // N
  double thrust_max = 1.5;             // N
  double pitch_rate_limit = deg_to_rad(20.0);  // rad/s

  /// Throws ParameterError when an invariant does not hold.
  void validate() const;
  bool operator==(const AircraftConfig&) const = default;
};

struct Environment {
  double air_density = 1.225;  // kg/m^3
  double gravity = 9.8;        // m/s^2
  double wind_speed = 0.0;     // m/s, must be zero for this model

  void validate() const;
  bool operator==(const Environment&) const = default;
};

struct PolarPoint {
  double alpha;  // aircraft angle of attack, rad
  double cl;
  double cd;
  bool operator==(const PolarPoint&) const = default;
};

struct AeroCoefficients {
  double cl;
  double cd;
};

struct AeroForces {
  double lift;  // N
  double drag;  // N
};

/// Piecewise-linear lift/drag polar tabulated against aircraft angle of attack.
///
/// The table is validated on construction: breakpoints strictly increasing,
/// positive drag, and the two characteristic angles (maximum lift and
/// maximum lift-to-drag) are located on the table itself. Between
/// breakpoints both c_L and c_L/c_D are monotone, so the maxima of the
/// interpolant always sit on a breakpoint.
class AeroPolar {
 public:
  explicit AeroPolar(std::vector<PolarPoint> points);

  /// Force-free polar (c_L = c_D = 0) spanning [alpha_lo, alpha_hi]. Test
  /// fixture for the aerodynamics-off limit; skips the c_D > 0 check.
  static AeroPolar zero(double alpha_lo, double alpha_hi);

  /// Throws DomainError outside [alpha_min(), alpha_max()].
  AeroCoefficients coefficients(double alpha) const;

  double stall_angle() const { return stall_angle_; }
  double steady_angle() const { return steady_angle_; }
  double alpha_min() const { return points_.front().alpha; }
  double alpha_max() const { return points_.back().alpha; }
  double max_lift_coefficient() const;
  std::span<const PolarPoint> points() const { return points_; }

  bool operator==(const AeroPolar& other) const { return points_ == other.points_; }

 private:
  AeroPolar() = default;
  std::vector<PolarPoint> points_;
  double stall_angle_ = 0.0;
  double steady_angle_ = 0.0;
};

/// Shipped default polar: anchors at max c_L = 1.4002 (9 deg) and
/// max c_L/c_D = 76.557 (0 deg), with c_L(0) set so that level loiter at
/// beta = 7.18 deg, r = 2.4 m trims at 10.84 m/s.
AeroPolar default_polar();

AeroCoefficients coefficients(const AeroPolar& polar, double alpha);

/// F_L = q A c_L, F_D = q A c_D with q = rho V^2 / 2.
AeroForces aero_forces(const AircraftConfig& config, const Environment& env,
                       const AeroPolar& polar, double airspeed, double alpha);

}  // namespace ctol
