#include "ctol/envelope.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ctol/errors.hpp"

namespace ctol {

double beta_max(const AircraftConfig& config, const Environment& env,
                const AeroPolar& polar, double alpha, double tether_length) {
  if (!(tether_length > 0.0)) throw ParameterError("tether length must be positive");
  const double cl = polar.coefficients(alpha).cl;
  return std::atan(0.5 * env.air_density * config.wing_area * cl * tether_length /
                   config.mass);
}

std::optional<double> level_speed(const AircraftConfig& config, const Environment& env,
                                  const AeroPolar& polar, double alpha, double elevation,
                                  double tether_length, double thrust) {
  const double cl = polar.coefficients(alpha).cl;
  const double m = config.mass;
  const double denom = 0.5 * env.air_density * config.wing_area * cl -
                       m / tether_length * std::tan(elevation);
  const double numer = m * env.gravity * std::cos(elevation) - thrust * std::sin(alpha);
  if (denom <= 0.0 || numer <= 0.0) return std::nullopt;
  return std::sqrt(numer / denom);
}

void EnvelopeQuery::validate() const {
  const auto check = [](const std::vector<double>& grid, const char* name) {
    if (grid.empty()) throw ParameterError(std::string(name) + " grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i] > grid[i - 1])) {
        throw ParameterError(std::string(name) + " grid is not strictly increasing");
      }
    }
  };
  check(tether_lengths, "tether length");
  check(elevations, "elevation");
  check(alphas, "alpha");
  if (!(tether_lengths.front() > 0.0)) throw ParameterError("tether length must be positive");
  if (!(std::abs(elevations.front()) < std::numbers::pi / 2) ||
      !(std::abs(elevations.back()) < std::numbers::pi / 2)) {
    throw ParameterError("elevation grid must lie inside (-90, 90) deg");
  }
}

namespace {

EnvelopeSample sample_at(const EnvelopeQuery& query, const AircraftConfig& config,
                         const Environment& env, const AeroPolar& polar, double alpha,
                         std::size_t index) {
  const std::size_t nb = query.elevations.size();
  const double r = query.tether_lengths[index / nb];
  const double beta = query.elevations[index % nb];
  const double thrust = query.include_thrust ? config.thrust_max : 0.0;
  const auto v = level_speed(config, env, polar, alpha, beta, r, thrust);
  return {r, beta, v ? *v : std::numeric_limits<double>::quiet_NaN(), v.has_value()};
}

EnvelopeCurve empty_curve(const EnvelopeQuery& query, const AircraftConfig& config,
                          const Environment& env, const AeroPolar& polar, double alpha) {
  polar.coefficients(alpha);  // domain check before any parallel region
  EnvelopeCurve curve{alpha, {}, {}};
  curve.samples.resize(query.tether_lengths.size() * query.elevations.size());
  for (double r : query.tether_lengths) {
    curve.beta_limit.push_back(beta_max(config, env, polar, alpha, r));
  }
  return curve;
}

}  // namespace

std::vector<EnvelopeCurve> evaluate_envelope_serial(const EnvelopeQuery& query,
                                                    const AircraftConfig& config,
                                                    const Environment& env,
                                                    const AeroPolar& polar) {
  query.validate();
  std::vector<EnvelopeCurve> curves;
  for (double alpha : query.alphas) {
    auto curve = empty_curve(query, config, env, polar, alpha);
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
      curve.samples[i] = sample_at(query, config, env, polar, alpha, i);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::vector<EnvelopeCurve> evaluate_envelope(const EnvelopeQuery& query,
                                             const AircraftConfig& config,
                                             const Environment& env,
                                             const AeroPolar& polar) {
  query.validate();
  std::vector<EnvelopeCurve> curves;
  for (double alpha : query.alphas) {
    auto curve = empty_curve(query, config, env, polar, alpha);
    const auto n = static_cast<std::ptrdiff_t>(curve.samples.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      curve.samples[static_cast<std::size_t>(i)] =
          sample_at(query, config, env, polar, alpha, static_cast<std::size_t>(i));
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace ctol
