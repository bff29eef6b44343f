#pragma once

#include <string>
#include <vector>

#include "ctol/config.hpp"

namespace ctol {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runtime self-check of the model and controller invariants against a
/// configuration: energy identity, actuator bounds, CARE certificates, RK4
/// order, tension azimuth invariance, determinism and config round-trip.
std::vector<CheckResult> run_invariant_suite(const RunConfig& config);

}  // namespace ctol
