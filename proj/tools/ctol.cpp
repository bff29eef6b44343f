// Command-line front end: run, linearize, envelope, sweep.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ctol/config.hpp"
#include "ctol/envelope.hpp"
#include "ctol/errors.hpp"
#include "ctol/invariants.hpp"
#include "ctol/sweep.hpp"
#include "ctol/telemetry_io.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kSynthesisError = 3,
  kScenarioTimeout = 4,
  kInvariantFailure = 5,
  kOutputError = 6,
  kUsage = 64,
};

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<double> dt;
  std::optional<double> land_at;
  bool seed_check = false;
  std::string sweep_key;
  std::vector<double> sweep_values;
  bool serial = false;
};

ctol::ConfigDocument load_document(const Options& o) {
  ctol::ConfigDocument doc;
  if (o.config_path.empty()) {
    ctol::RunConfig defaults;
    defaults.controllers = ctol::default_controllers();
    doc = ctol::parse_document(ctol::echo_config(defaults));
  } else {
    std::ifstream in(o.config_path, std::ios::binary);
    if (!in) throw ctol::ConfigError("", 0, "cannot open " + o.config_path);
    std::ostringstream text;
    text << in.rdbuf();
    doc = ctol::parse_document(text.str());
  }
  if (o.dt) {
    doc.set("sim.dt", ctol::format_number(*o.dt));
    // Transitions are resolved at step boundaries; the tolerance follows dt.
    const auto base = ctol::build_config(doc);
    if (base.sim.event_tolerance > *o.dt) {
      doc.set("sim.event_tolerance", ctol::format_number(*o.dt));
    }
  }
  if (o.land_at) doc.set("scenario.landing_time", ctol::format_number(*o.land_at));
  return doc;
}

ctol::RunConfig load(const Options& o) {
  auto config = ctol::build_config(load_document(o));
  for (const auto& n : config.notices) std::cerr << "notice: " << n << "\n";
  return config;
}

fs::path out_dir(const Options& o) {
  fs::path dir(o.out_dir);
  fs::create_directories(dir);
  return dir;
}

int cmd_run(const Options& o) {
  const auto config = load(o);
  const auto result = ctol::simulate(config);
  const fs::path dir = out_dir(o);
  if (!result.telemetry.empty()) {
    ctol::write_telemetry(result.telemetry, dir / "telemetry.csv");
  }
  std::ofstream log(dir / "phases.csv", std::ios::binary | std::ios::trunc);
  ctol::write_phase_log(result.phase_log, log);
  for (const auto& e : result.phase_log) {
    std::cout << ctol::phase_label(e.phase) << " " << ctol::format_number(e.entry_time)
              << " -> " << ctol::format_number(e.exit_time) << "\n";
  }
  for (const auto& t : result.touchdowns) {
    std::cout << "touchdown t=" << ctol::format_number(t.t) << " in "
              << ctol::phase_label(t.phase) << " sink " << ctol::format_number(-t.sink_rate)
              << " m/s\n";
  }
  if (result.slack_tether_records > 0) {
    std::cerr << "warning: " << result.slack_tether_records << " slack-tether records\n";
  }
  if (!result.completed) {
    std::cerr << "error: " << result.diagnostic << "\n";
    return kScenarioTimeout;
  }
  return kOk;
}

int cmd_linearize(const Options& o) {
  const auto config = load(o);
  const auto designs =
      ctol::synthesize_designs(config.controllers, config.phases, config.plant);
  const fs::path dir = out_dir(o);
  for (auto phase : {ctol::Phase::InitialClimb, ctol::Phase::Loiter, ctol::Phase::Glide}) {
    const auto* d = designs.for_phase(phase);
    const fs::path path =
        dir / ("design_" + std::string(ctol::phase_label(phase)) + ".txt");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    ctol::write_design(phase, *d, out);
    std::cout << path.string() << "\n";
  }
  return kOk;
}

int cmd_envelope(const Options& o) {
  const auto config = load(o);
  const auto query = config.envelope.query();
  const auto curves = ctol::evaluate_envelope(query, config.plant.aircraft, config.plant.env,
                                              config.plant.polar);
  const fs::path dir = out_dir(o);
  for (const auto& curve : curves) {
    const std::string tag = ctol::format_number(ctol::rad_to_deg(curve.alpha));
    std::ofstream grid(dir / ("envelope_alpha_" + tag + ".csv"),
                       std::ios::binary | std::ios::trunc);
    ctol::write_envelope_curve(curve, grid);
    std::ofstream limit(dir / ("beta_max_alpha_" + tag + ".csv"),
                        std::ios::binary | std::ios::trunc);
    ctol::write_beta_limit(curve, query.tether_lengths, limit);
    std::cout << "alpha " << tag << " deg: beta_max(r=" << ctol::format_number(config.plant.tether.length)
              << ") = "
              << ctol::format_number(ctol::rad_to_deg(ctol::beta_max(
                     config.plant.aircraft, config.plant.env, config.plant.polar, curve.alpha,
                     config.plant.tether.length)))
              << " deg\n";
  }
  return kOk;
}

int cmd_sweep(const Options& o) {
  const auto doc = load_document(o);
  const ctol::SweepSpec spec{o.sweep_key, o.sweep_values};
  const fs::path dir = out_dir(o);
  const auto outcomes = o.serial ? ctol::run_sweep_serial(doc, spec, dir)
                                 : ctol::run_sweep(doc, spec, dir);
  int code = kOk;
  std::ofstream index(dir / "sweep.csv", std::ios::binary | std::ios::trunc);
  index << "value,status,file,records\n";
  for (const auto& p : outcomes) {
    const char* status = "completed";
    switch (p.status) {
      case ctol::PointStatus::Completed: break;
      case ctol::PointStatus::ConfigError: status = "config_error"; code = std::max(code, int(kConfigError)); break;
      case ctol::PointStatus::SynthesisError: status = "synthesis_error"; code = std::max(code, int(kSynthesisError)); break;
      case ctol::PointStatus::Timeout: status = "timeout"; code = std::max(code, int(kScenarioTimeout)); break;
      case ctol::PointStatus::Failed: status = "failed"; code = std::max(code, int(kFailure)); break;
    }
    index << ctol::format_number(p.value) << "," << status << ","
          << p.telemetry.filename().string() << "," << p.records << "\n";
    std::cout << spec.key << " = " << ctol::format_number(p.value) << ": " << status;
    if (!p.diagnostic.empty()) std::cout << " (" << p.diagnostic << ")";
    std::cout << "\n";
  }
  return code;
}

int seed_check(const Options& o) {
  const auto config = load(o);
  bool ok = true;
  for (const auto& r : ctol::run_invariant_suite(config)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    ok = ok && r.passed;
  }
  return ok ? kOk : kInvariantFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tethered circular take-off and landing simulator"};
  Options o;
  app.option_defaults()->always_capture_default();
  app.add_option("--config", o.config_path, "Config file (built-in defaults when omitted)");
  app.add_option("--out", o.out_dir, "Output directory");
  app.add_option("--dt", o.dt, "Integration step override [s]")->check(CLI::PositiveNumber);
  app.add_option("--land-at", o.land_at, "Landing command time override [s]");
  app.add_flag("--seed-check", o.seed_check, "Run the invariant suite and exit");
  app.fallthrough();

  auto* run = app.add_subcommand("run", "Fly the full take-off, loiter and landing scenario");
  auto* lin = app.add_subcommand("linearize", "Dump A, B, K, P and eigenvalues per LQR phase");
  auto* env = app.add_subcommand("envelope", "Write beta_max and level-speed grids per alpha");
  auto* sweep = app.add_subcommand("sweep", "Run one scenario per value of a config key");
  sweep->add_option("--key", o.sweep_key, "Dotted config key, e.g. phases.v_rot")->required();
  sweep->add_option("--values", o.sweep_values, "Comma-separated values in file units")
      ->required()
      ->delimiter(',');
  sweep->add_flag("--serial", o.serial, "Run points one at a time");
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (o.seed_check) return seed_check(o);
    if (*run) return cmd_run(o);
    if (*lin) return cmd_linearize(o);
    if (*env) return cmd_envelope(o);
    if (*sweep) return cmd_sweep(o);
    std::cerr << app.help();
    return kUsage;
  } catch (const ctol::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const ctol::SynthesisError& e) {
    std::cerr << "synthesis error: " << e.what() << "\n";
    return kSynthesisError;
  } catch (const ctol::OutputError& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kOutputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
