#pragma once

#include <optional>
#include <vector>

#include "ctol/airframe.hpp"

namespace ctol {

/// Maximum elevation reachable on a tether of length r at angle of attack
/// alpha: tan(beta) = rho A c_L r / (2 m). Throws DomainError when alpha is
/// outside the polar.
double beta_max(const AircraftConfig& config, const Environment& env,
                const AeroPolar& polar, double alpha, double tether_length);

/// Airspeed of level (gamma = 0, gamma' = 0) circular flight:
///   V^2 = (m g cos(beta) - F_p sin(alpha)) / (rho A c_L / 2 - (m / r) tan(beta))
/// with F_p = `thrust` (0 by default). Empty when no positive solution exists.
std::optional<double> level_speed(const AircraftConfig& config, const Environment& env,
                                  const AeroPolar& polar, double alpha, double elevation,
                                  double tether_length, double thrust = 0.0);

struct EnvelopeQuery {
  std::vector<double> tether_lengths;  // m
  std::vector<double> elevations;      // rad
  std::vector<double> alphas;          // rad
  bool include_thrust = false;         // adds F_p,max sin(alpha) to the balance

  /// Throws ParameterError on empty or non-increasing grids, r <= 0 or
  /// |beta| >= pi/2.
  void validate() const;
};

struct EnvelopeSample {
  double tether_length;
  double elevation;
  double airspeed;  // NaN when infeasible
  bool feasible;
};

struct EnvelopeCurve {
  double alpha;
  /// Row-major over (tether_lengths, elevations).
  std::vector<EnvelopeSample> samples;
  /// beta_max at each tether length.
  std::vector<double> beta_limit;
};

/// One curve per alpha. The serial version is the reference for the OpenMP one;
/// both produce identical samples.
std::vector<EnvelopeCurve> evaluate_envelope_serial(const EnvelopeQuery& query,
                                                    const AircraftConfig& config,
                                                    const Environment& env,
                                                    const AeroPolar& polar);
std::vector<EnvelopeCurve> evaluate_envelope(const EnvelopeQuery& query,
                                             const AircraftConfig& config,
                                             const Environment& env,
                                             const AeroPolar& polar);

}  // namespace ctol
