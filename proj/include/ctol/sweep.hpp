#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ctol/config.hpp"
#include "ctol/supervisor.hpp"

namespace ctol {

/// Designs the LQR phases and flies the configured scenario.
ScenarioResult simulate(const RunConfig& config, const RhsObserver* observer = nullptr);

struct SweepSpec {
  std::string key;             // dotted config key, e.g. "phases.v_rot"
  std::vector<double> values;  // in the key's file units (degrees for *_deg)
};

enum class PointStatus { Completed, ConfigError, SynthesisError, Timeout, Failed };

struct SweepOutcome {
  double value = 0.0;
  PointStatus status = PointStatus::Failed;
  std::filesystem::path telemetry;  // empty when nothing was written
  std::size_t records = 0;
  std::string diagnostic;
};

/// One scenario per value, each written to `<out_dir>/sweep_<index>.csv` by the
/// worker that ran it. Outcomes are in value order. The serial version is the
/// reference for the OpenMP one.
std::vector<SweepOutcome> run_sweep_serial(const ConfigDocument& base, const SweepSpec& spec,
                                           const std::filesystem::path& out_dir);
std::vector<SweepOutcome> run_sweep(const ConfigDocument& base, const SweepSpec& spec,
                                    const std::filesystem::path& out_dir);

}  // namespace ctol
