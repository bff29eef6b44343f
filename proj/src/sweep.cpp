#include "ctol/sweep.hpp"

#include "ctol/errors.hpp"
#include "ctol/telemetry_io.hpp"

namespace ctol {

ScenarioResult simulate(const RunConfig& config, const RhsObserver* observer) {
  const auto designs = synthesize_designs(config.controllers, config.phases, config.plant);
  return run_scenario(config.scenario, config.phases, config.controllers, designs,
                      config.plant, config.sim, observer);
}

namespace {

SweepOutcome run_point(const ConfigDocument& base, const SweepSpec& spec, std::size_t index,
                       const std::filesystem::path& out_dir) {
  SweepOutcome out;
  out.value = spec.values[index];
  try {
    ConfigDocument doc = base;
    doc.set(spec.key, format_number(out.value));
    const RunConfig config = build_config(doc);
    const ScenarioResult result = simulate(config);
    out.records = result.telemetry.size();
    if (!result.telemetry.empty()) {
      out.telemetry = out_dir / ("sweep_" + std::to_string(index) + ".csv");
      write_telemetry(result.telemetry, out.telemetry);
    }
    out.status = result.completed ? PointStatus::Completed : PointStatus::Timeout;
    out.diagnostic = result.diagnostic;
  } catch (const ConfigError& e) {
    out.status = PointStatus::ConfigError;
    out.diagnostic = e.what();
  } catch (const SynthesisError& e) {
    out.status = PointStatus::SynthesisError;
    out.diagnostic = e.what();
  } catch (const std::exception& e) {
    out.status = PointStatus::Failed;
    out.diagnostic = e.what();
  }
  return out;
}

void check_spec(const ConfigDocument& base, const SweepSpec& spec) {
  if (spec.values.empty()) throw ConfigError(spec.key, 0, "sweep has no values");
  if (!known_key(spec.key)) throw ConfigError(spec.key, 0, "unknown key");
  build_config(base);
}

}  // namespace

std::vector<SweepOutcome> run_sweep_serial(const ConfigDocument& base, const SweepSpec& spec,
                                           const std::filesystem::path& out_dir) {
  check_spec(base, spec);
  std::vector<SweepOutcome> outcomes(spec.values.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    outcomes[i] = run_point(base, spec, i, out_dir);
  }
  return outcomes;
}

std::vector<SweepOutcome> run_sweep(const ConfigDocument& base, const SweepSpec& spec,
                                    const std::filesystem::path& out_dir) {
  check_spec(base, spec);
  std::vector<SweepOutcome> outcomes(spec.values.size());
  const auto n = static_cast<std::ptrdiff_t>(outcomes.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    outcomes[k] = run_point(base, spec, k, out_dir);
  }
  return outcomes;
}

}  // namespace ctol
