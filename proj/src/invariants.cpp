#include "ctol/invariants.hpp"

#include <cmath>
#include <sstream>

#include "ctol/errors.hpp"
#include "ctol/sweep.hpp"
#include "ctol/telemetry_io.hpp"

namespace ctol {

namespace {

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

CheckResult energy_identity(const RunConfig& c) {
  const auto& a = c.plant.aircraft;
  const double m = a.mass;
  double worst = 0.0;
  std::size_t evaluations = 0;
  const RhsObserver observer = [&](const FlightState& x, const ControlInput& u,
                                   const StateDerivative& d) {
    if (x.grounded) return;
    const auto f = aero_forces(a, c.plant.env, c.plant.polar, x.airspeed, x.angle_of_attack());
    const double hdot = c.plant.tether.length * d.elevation_rate * std::cos(x.elevation);
    const double lhs = m * x.airspeed * d.airspeed_rate + m * c.plant.env.gravity * hdot;
    const double rhs = x.airspeed * (u.thrust * std::cos(x.angle_of_attack()) - f.drag);
    const double scale = std::max(1.0, m * c.plant.env.gravity * x.airspeed);
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
    ++evaluations;
  };
  simulate(c, &observer);
  return {"energy identity", evaluations > 0 && worst <= 1e-9,
          std::to_string(evaluations) + " airborne evaluations, worst scaled error " + sci(worst)};
}

CheckResult actuator_bounds(const RunConfig& c, const ScenarioResult& r) {
  const auto& a = c.plant.aircraft;
  const double rate_limit_deg = rad_to_deg(a.pitch_rate_limit);
  std::size_t violations = 0;
  for (const auto& rec : r.telemetry) {
    if (rec.thrust < a.thrust_min || rec.thrust > a.thrust_max) ++violations;
    if (std::abs(rec.pitch_rate_degs) > rate_limit_deg * (1.0 + 1e-12)) ++violations;
  }
  return {"actuator saturation", violations == 0,
          std::to_string(violations) + " violations in " + std::to_string(r.telemetry.size()) +
              " records"};
}

CheckResult care_certificates(const RunConfig& c) {
  try {
    const auto d = synthesize_designs(c.controllers, c.phases, c.plant);
    double worst_res = 0.0;
    double worst_abscissa = -1e300;
    for (const auto* design : {&*d.climb, &*d.loiter, &*d.glide}) {
      worst_res = std::max(worst_res, design->care_residual);
      worst_abscissa = std::max(worst_abscissa, design->spectral_abscissa());
    }
    return {"CARE certificates", worst_res <= 1e-8 && worst_abscissa < 0.0,
            "max residual " + sci(worst_res) + ", max Re(lambda) " + sci(worst_abscissa)};
  } catch (const Error& e) {
    return {"CARE certificates", false, e.what()};
  }
}

// Airborne flight with a fixed control, angle of attack kept between polar
// breakpoints so the field is smooth.
CheckResult rk4_order(const RunConfig& c) {
  const auto pts = c.plant.polar.points();
  std::size_t widest = 1;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].alpha - pts[i - 1].alpha > pts[widest].alpha - pts[widest - 1].alpha) widest = i;
  }
  const double alpha = 0.5 * (pts[widest].alpha + pts[widest - 1].alpha);
  FlightState x0{0.0, height_to_elevation(c.phases.h0, c.plant.tether), c.phases.v_loiter, 0.0,
                 alpha, false};
  const ControlInput u{0.5 * (c.plant.aircraft.thrust_min + c.plant.aircraft.thrust_max), 0.0};
  const auto fly = [&](double dt) {
    FlightState x = x0;
    const int n = static_cast<int>(std::lround(0.4 / dt));
    for (int i = 0; i < n; ++i) x = rk4_step(x, u, dt, c.plant);
    return x;
  };
  const FlightState ref = fly(0.4 / 1600);
  const auto err = [&](double dt) {
    const FlightState x = fly(dt);
    return std::hypot(x.elevation - ref.elevation, x.airspeed - ref.airspeed,
                      x.flight_path - ref.flight_path);
  };
  const double ratio = err(0.4 / 50) / err(0.4 / 100);
  return {"RK4 order", ratio > 12.0 && ratio < 20.0, "error ratio for halved step " + sci(ratio)};
}

CheckResult tension_invariance(const RunConfig& c) {
  FlightState x{0.0, deg_to_rad(7.0), 10.0, deg_to_rad(1.0), deg_to_rad(2.0), false};
  const double base = tether_tension(x, c.plant);
  double worst = 0.0;
  for (double phi : {0.5, 1.7, 3.1, -2.2, 12.0}) {
    x.azimuth = phi;
    worst = std::max(worst, std::abs(tether_tension(x, c.plant) - base));
  }
  return {"tension azimuth invariance", worst == 0.0, "max change " + sci(worst) + " N"};
}

CheckResult determinism(const RunConfig& c, const ScenarioResult& first) {
  const ScenarioResult second = simulate(c);
  std::ostringstream a, b;
  if (first.telemetry.empty() || second.telemetry.empty()) {
    return {"determinism", false, "no telemetry"};
  }
  write_telemetry(first.telemetry, a);
  write_telemetry(second.telemetry, b);
  return {"determinism", a.str() == b.str(),
          std::to_string(a.str().size()) + " bytes compared"};
}

CheckResult config_round_trip(const RunConfig& c) {
  try {
    return {"config round-trip", parse_config(echo_config(c)) == c, "echo re-parsed"};
  } catch (const Error& e) {
    return {"config round-trip", false, e.what()};
  }
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const RunConfig& config) {
  std::vector<CheckResult> out;
  out.push_back(config_round_trip(config));
  out.push_back(care_certificates(config));
  out.push_back(tension_invariance(config));
  try {
    out.push_back(rk4_order(config));
    const ScenarioResult run = simulate(config);
    out.push_back(actuator_bounds(config, run));
    out.push_back(energy_identity(config));
    out.push_back(determinism(config, run));
  } catch (const Error& e) {
    out.push_back({"scenario checks", false, e.what()});
  }
  return out;
}

}  // namespace ctol
