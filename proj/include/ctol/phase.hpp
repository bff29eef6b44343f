#pragma once

#include <optional>
#include <string_view>

namespace ctol {

/// Supervisory phases. Ascend, TetheredFlight and Descend belong to the full
/// power-generation cycle and are not flown by this simulator.
enum class Phase : int {
  Rest = 0,
  Accelerate = 1,     // P1
  Rotate = 2,         // P2
  InitialClimb = 3,   // P3
  Loiter = 4,         // P4
  Decelerate = 5,     // P5
  Glide = 6,          // P6
  Flare = 7,          // P7
  RollOut = 8,        // P8
  Ascend = 100,
  TetheredFlight = 101,
  Descend = 102,
};

/// Short telemetry label: "Rest", "P1".."P8", or the stub names.
std::string_view phase_label(Phase phase);
std::optional<Phase> phase_from_label(std::string_view label);

}  // namespace ctol
