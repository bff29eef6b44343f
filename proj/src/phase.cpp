#include "ctol/phase.hpp"

#include <array>
#include <utility>

namespace ctol {

namespace {

constexpr std::array<std::pair<Phase, std::string_view>, 12> kLabels{{
    {Phase::Rest, "Rest"},
    {Phase::Accelerate, "P1"},
    {Phase::Rotate, "P2"},
    {Phase::InitialClimb, "P3"},
    {Phase::Loiter, "P4"},
    {Phase::Decelerate, "P5"},
    {Phase::Glide, "P6"},
    {Phase::Flare, "P7"},
    {Phase::RollOut, "P8"},
    {Phase::Ascend, "Ascend"},
    {Phase::TetheredFlight, "TetheredFlight"},
    {Phase::Descend, "Descend"},
}};

}  // namespace

std::string_view phase_label(Phase phase) {
  for (const auto& [p, label] : kLabels)
    if (p == phase) return label;
  return "?";
}

std::optional<Phase> phase_from_label(std::string_view label) {
  for (const auto& [p, l] : kLabels)
    if (l == label) return p;
  return std::nullopt;
}

}  // namespace ctol
