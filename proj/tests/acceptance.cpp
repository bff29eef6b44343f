// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ctol/config.hpp"
#include "ctol/envelope.hpp"
#include "ctol/sweep.hpp"
#include "ctol/telemetry_io.hpp"
#include "ctol/units.hpp"

using namespace ctol;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "MISS ") + what);
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

RunConfig shipped() { return load_config(CTOL_DEFAULT_CONFIG); }

// Reference phase durations, s.
struct ReferenceInterval {
  Phase phase;
  double duration;
};
constexpr ReferenceInterval kReference[] = {
    {Phase::Accelerate, 2.14},   {Phase::Rotate, 2.53 - 2.14},  {Phase::InitialClimb, 3.34 - 2.53},
    {Phase::Loiter, 20.0 - 3.34}, {Phase::Decelerate, 31.43 - 20.0}, {Phase::Glide, 35.11 - 31.43},
    {Phase::Flare, 35.86 - 35.11},
};

Outcome c1_scenario() {
  Outcome o;
  const auto config = shipped();
  const auto start = std::chrono::steady_clock::now();
  const auto r = simulate(config);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(r.completed, "scenario completed" + (r.completed ? "" : ": " + r.diagnostic));

  const Phase order[] = {Phase::Rest,   Phase::Accelerate, Phase::Rotate,  Phase::InitialClimb,
                         Phase::Loiter, Phase::Decelerate, Phase::Glide,   Phase::Flare,
                         Phase::RollOut, Phase::Rest};
  bool in_order = r.phase_log.size() == std::size(order);
  for (std::size_t i = 0; in_order && i < r.phase_log.size(); ++i) {
    in_order = r.phase_log[i].phase == order[i];
  }
  o.check(in_order, "phase order Rest, P1..P8, Rest, each once");

  // P1 exit: first record after P1 has V >= 7.98, the last P1 record does not.
  const TelemetryRecord* last_p1 = nullptr;
  const TelemetryRecord* first_p2 = nullptr;
  for (const auto& rec : r.telemetry) {
    if (rec.phase == Phase::Accelerate) last_p1 = &rec;
    if (rec.phase == Phase::Rotate && !first_p2) first_p2 = &rec;
  }
  o.check(last_p1 && first_p2 && last_p1->airspeed < 7.98 && first_p2->airspeed >= 7.98 &&
              std::abs(first_p2->t - last_p1->t - config.sim.dt) < 1e-12,
          "P1 exit at V_a >= 7.98 within one step");

  double p4_entry = -1.0, p4_exit = -1.0;
  for (const auto& e : r.phase_log) {
    if (e.phase == Phase::Loiter) {
      p4_entry = e.entry_time;
      p4_exit = e.exit_time;
    }
  }
  double worst = 0.0;
  for (const auto& rec : r.telemetry) {
    if (rec.phase == Phase::Loiter && rec.t >= p4_entry + 2.0) {
      worst = std::max(worst, std::abs(rec.height - 0.3));
    }
  }
  o.check(p4_entry >= 0.0 && worst <= 0.03,
          "P4 |h - 0.3| <= 0.03 after 2 s (worst " + fmt("%.4f", worst) + " m)");
  o.check(std::abs(p4_exit - 20.0) <= config.sim.dt,
          "P4 exit at 20.000 +- dt (" + fmt("%.3f", p4_exit) + ")");

  for (const auto& ref : kReference) {
    double got = -1.0;
    for (const auto& e : r.phase_log) {
      if (e.phase == ref.phase) got = e.exit_time - e.entry_time;
    }
    const double rel = (got - ref.duration) / ref.duration;
    o.check(std::abs(rel) <= 0.4, std::string(phase_label(ref.phase)) + " duration " +
                                      fmt("%.3f", got) + " s vs " +
                                      fmt("%.2f", ref.duration) + " s (" +
                                      fmt("%+.0f", 100 * rel) + "%)");
  }

  double simulated = r.telemetry.empty() ? 0.0 : r.telemetry.back().t;
  o.check(simulated >= 40.0 && wall < 10.0, fmt("%.1f", simulated) + " s simulated in " +
                                                fmt("%.3f", wall) + " s wall");
  return o;
}

Outcome c2_energy() {
  Outcome o;
  const auto config = shipped();
  const auto& p = config.plant;
  const double m = p.aircraft.mass;
  const double g = p.env.gravity;
  double worst = 0.0;
  std::size_t n = 0;
  const RhsObserver obs = [&](const FlightState& x, const ControlInput& u,
                              const StateDerivative& d) {
    if (x.grounded) return;
    const double alpha = x.pitch - x.flight_path;
    const double cd = p.polar.coefficients(alpha).cd;
    const double drag = 0.5 * p.env.air_density * p.aircraft.wing_area * x.airspeed * x.airspeed * cd;
    const double hdot = p.tether.length * d.elevation_rate * std::cos(x.elevation);
    const double err = std::abs(m * x.airspeed * d.airspeed_rate + m * g * hdot -
                                x.airspeed * (u.thrust * std::cos(alpha) - drag));
    worst = std::max(worst, err / std::max(1.0, m * g * x.airspeed));
    ++n;
  };
  simulate(config, &obs);
  o.check(n > 0, std::to_string(n) + " airborne RHS evaluations");
  o.check(worst <= 1e-9, "worst scaled residual " + fmt("%.2e", worst));
  return o;
}

Outcome c3_saturation() {
  Outcome o;
  const auto r = simulate(shipped());
  std::size_t bad = 0;
  for (const auto& rec : r.telemetry) {
    if (!(rec.thrust >= 0.0 && rec.thrust <= 1.5)) ++bad;
    if (!(std::abs(rec.pitch_rate_degs) <= 20.0)) ++bad;
  }
  o.check(!r.telemetry.empty() && bad == 0,
          std::to_string(bad) + " violations in " + std::to_string(r.telemetry.size()) +
              " records");
  return o;
}

Outcome c4_care() {
  Outcome o;
  auto config = shipped();
  for (auto mode : {ReferenceMode::Table, ReferenceMode::Trim}) {
    config.controllers.reference_mode = mode;
    const auto designs = synthesize_designs(config.controllers, config.phases, config.plant);
    for (auto phase : {Phase::InitialClimb, Phase::Loiter, Phase::Glide}) {
      const auto& d = *designs.for_phase(phase);
      const Eigen::Matrix4d a = d.model.a;
      const Eigen::Matrix<double, 4, 2> b = d.model.b;
      const Eigen::Matrix4d q = d.weights.q_diag.asDiagonal();
      const Eigen::Matrix2d r = d.weights.r_diag.asDiagonal();
      const double res =
          (a.transpose() * d.p + d.p * a - d.p * b * r.inverse() * b.transpose() * d.p + q).norm();
      const double asym = (d.p - d.p.transpose()).cwiseAbs().maxCoeff();
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> pe(0.5 * (d.p + d.p.transpose()));
      const double min_eig = pe.eigenvalues().minCoeff();
      Eigen::EigenSolver<Eigen::Matrix4d> ce(a - b * d.k);
      const double abscissa = ce.eigenvalues().real().maxCoeff();
      o.check(res <= 1e-8 && asym <= 1e-12 && min_eig >= -1e-9 * d.p.norm() && abscissa < 0.0,
              std::string(mode == ReferenceMode::Table ? "table " : "trim  ") +
                  std::string(phase_label(phase)) + ": residual " + fmt("%.1e", res) +
                  ", min eig(P) " + fmt("%.2e", min_eig) + ", max Re " + fmt("%.3f", abscissa));
    }
  }
  return o;
}

Outcome c5_jacobian() {
  Outcome o;
  const auto config = shipped();
  const auto point = operating_point_for(Phase::Loiter, config.controllers, config.phases,
                                         config.plant);
  const auto full = linearize(point, config.plant, 1e-6);
  const auto half = linearize(point, config.plant, 0.5e-6);
  double worst = 0.0;
  bool ok = true;
  const auto cmp = [&](double x, double y) {
    const double d = std::abs(x - y);
    ok = ok && d <= 1e-5 * std::abs(x) + 1e-9;
    worst = std::max(worst, d / std::max(std::abs(x), 1e-300));
  };
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) cmp(full.a(i, j), half.a(i, j));
    for (int j = 0; j < 2; ++j) cmp(full.b(i, j), half.b(i, j));
  }
  o.check(ok, "half-step agreement, worst relative " + fmt("%.2e", worst));
  const double alpha = point.x_ref[3] - point.x_ref[2];
  const double partial = std::cos(alpha) / config.plant.aircraft.mass;
  o.check(std::abs(full.b(1, 0) - partial) <= 1e-6,
          "dV'/dF_p = cos(alpha)/m (" + fmt("%.9f", full.b(1, 0)) + " vs " +
              fmt("%.9f", partial) + ")");
  return o;
}

Outcome c6_envelope() {
  Outcome o;
  const auto config = shipped();
  const auto& p = config.plant;
  const double alpha = deg_to_rad(9.0);
  const double oracle = rad_to_deg(std::atan(0.5 * 1.225 * 0.0576 * 1.4002 * 2.4 / 0.35));
  const double got = rad_to_deg(beta_max(p.aircraft, p.env, p.polar, alpha, 2.4));
  o.check(std::abs(got - 18.71) <= 0.01 && std::abs(got - oracle) <= 1e-12,
          "beta_max = " + fmt("%.4f", got) + " deg (oracle " + fmt("%.4f", oracle) + ")");

  EnvelopeQuery q;
  q.tether_lengths = {2.4};
  q.alphas = {alpha};
  const int n = 1001;
  const double hi = deg_to_rad(30.0);
  for (int i = 0; i < n; ++i) q.elevations.push_back(hi * i / (n - 1));
  const auto curve = evaluate_envelope(q, p.aircraft, p.env, p.polar).front();
  double boundary = -1.0;
  for (const auto& s : curve.samples) {
    if (s.feasible) boundary = s.elevation;
  }
  const double gap = deg_to_rad(got) - boundary;
  o.check(gap >= 0.0 && gap <= hi / (n - 1),
          "feasibility boundary " + fmt("%.4f", rad_to_deg(boundary)) + " deg, grid step " +
              fmt("%.4f", rad_to_deg(hi / (n - 1))) + " deg");
  return o;
}

Outcome c7_geometry() {
  Outcome o;
  const TetherConfig tether{2.4};
  const double h0 = height(deg_to_rad(7.18), tether);
  const double hf = height(deg_to_rad(1.50), tether);
  o.check(std::abs(h0 - 0.300) <= 0.001, "h(7.18 deg) = " + fmt("%.5f", h0));
  o.check(std::abs(hf - 0.063) <= 0.001, "h(1.50 deg) = " + fmt("%.5f", hf));
  return o;
}

Outcome c8_trim() {
  Outcome o;
  const auto config = shipped();
  const auto& x4 = config.controllers.p4.x_ref;
  const auto p4 = solve_operating_point({x4[0], x4[2], x4[3] - x4[2], {}, true}, config.plant);
  o.check(std::abs(p4.x_ref[1] - 10.84) <= 0.01 && p4.residual <= 1e-9,
          "P4 trim V_a = " + fmt("%.4f", p4.x_ref[1]) + " m/s, residual " +
              fmt("%.1e", p4.residual));
  const auto& x6 = config.controllers.p6.x_ref;
  const auto p6 =
      solve_operating_point({x6[0], x6[2], x6[3] - x6[2], x6[1], false}, config.plant);
  o.check(!p6.exact(), "P6 tabulated reference infeasible (best residual " +
                           fmt("%.3f", p6.residual) + ", F_p " + fmt("%.3f", p6.u_ref[0]) + " N)");
  return o;
}

Outcome c9_determinism() {
  Outcome o;
  const auto config = shipped();
  const auto dir = std::filesystem::temp_directory_path() / "ctol_acceptance";
  std::filesystem::create_directories(dir);
  const auto a = dir / "run_a.csv";
  const auto b = dir / "run_b.csv";
  write_telemetry(simulate(config).telemetry, a);
  write_telemetry(simulate(config).telemetry, b);
  const auto slurp = [](const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const auto sa = slurp(a);
  const auto sb = slurp(b);
  o.check(!sa.empty() && sa == sb, std::to_string(sa.size()) + " bytes, identical: " +
                                       (sa == sb ? "yes" : "no"));
  std::filesystem::remove_all(dir);
  return o;
}

Outcome c10_properties() {
  Outcome o;
  // RK4 order on a force-free arc over the sphere.
  Plant plant;
  plant.polar = AeroPolar::zero(-1.5, 1.5);
  const auto arc = [&](int steps) {
    FlightState x{0.0, deg_to_rad(10.0), 9.0, deg_to_rad(15.0), deg_to_rad(18.0), false};
    for (int i = 0; i < steps; ++i) x = rk4_step(x, {0.0, 0.0}, 1.0 / steps, plant);
    return x;
  };
  const FlightState ref = arc(8192);
  const auto err = [&](int steps) {
    const FlightState x = arc(steps);
    return std::abs(x.elevation - ref.elevation) + std::abs(x.airspeed - ref.airspeed) +
           std::abs(x.flight_path - ref.flight_path) + std::abs(x.azimuth - ref.azimuth);
  };
  const double ratio = err(16) / err(32);
  o.check(ratio > 13.0 && ratio < 19.0, "Richardson ratio " + fmt("%.2f", ratio));

  // PID: gains scale the output, saturation freezes the integrator.
  bool linear = true;
  PidLoop one({0.7, 0.08, 0.05});
  PidLoop two({1.4, 0.16, 0.10});
  for (int k = 0; k < 500; ++k) {
    const double e = std::sin(0.02 * k);
    const double u1 = one.step(e, 0.0, 1e-3);
    const double u2 = two.step(e, 0.0, 1e-3);
    linear = linear && std::abs(u2 - 2 * u1) <= 1e-12 * std::max(1.0, std::abs(u2));
  }
  PidLoop sat({1.0, 1.0, 0.0, 0.0, 1.5, true});
  const double u = sat.step(2.3, 0.0, 0.01);
  o.check(linear && u == 1.5 && sat.integral() == 0.0, "PID linearity and anti-windup");

  const AircraftConfig ac;
  bool idempotent = true;
  for (double f = -2.0; f <= 4.0; f += 0.05) {
    for (double w = -1.0; w <= 1.0; w += 0.01) {
      const auto s = saturate({f, w}, ac);
      idempotent = idempotent && saturate(s, ac) == s;
    }
  }
  o.check(idempotent, "saturate idempotent");

  bool invariant = true;
  const Plant def;
  for (double beta : {0.0, 0.05, 0.3}) {
    FlightState x{0.0, beta, 10.0, 0.02, 0.05, false};
    const double base = tether_tension(x, def);
    for (double phi = -10.0; phi <= 10.0; phi += 0.37) {
      x.azimuth = phi;
      invariant = invariant && tether_tension(x, def) == base;
    }
  }
  o.check(invariant, "tension azimuth invariance");
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"C1 full-scenario reproduction", c1_scenario},
      {"C2 pointwise energy identity", c2_energy},
      {"C3 actuator saturation", c3_saturation},
      {"C4 LQR certificates", c4_care},
      {"C5 Jacobian verification", c5_jacobian},
      {"C6 envelope beta_max", c6_envelope},
      {"C7 geometry anchors", c7_geometry},
      {"C8 trim consistency", c8_trim},
      {"C9 determinism", c9_determinism},
      {"C10 property suites", c10_properties},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %s\n", o.pass ? "PASS" : "FAIL", name);
    for (const auto& n : o.notes) std::printf("       %s\n", n.c_str());
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
