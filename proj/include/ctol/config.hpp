#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ctol/dynamics.hpp"
#include "ctol/envelope.hpp"
#include "ctol/simkernel.hpp"
#include "ctol/supervisor.hpp"

namespace ctol {

/// Grid settings for the `envelope` subcommand. Angles in radians.
struct EnvelopeSettings {
  std::vector<double> alphas = {0.0, deg_to_rad(9.0)};
  double r_min = 0.5;
  double r_max = 5.0;
  int r_count = 46;
  double beta_min = 0.0;
  double beta_max = deg_to_rad(25.0);
  int beta_count = 251;
  bool include_thrust = false;

  EnvelopeQuery query() const;
  bool operator==(const EnvelopeSettings&) const = default;
};

struct RunConfig {
  Plant plant;
  PhaseParams phases;
  ControllerSettings controllers;
  ScenarioSpec scenario;
  SimSettings sim;
  EnvelopeSettings envelope;
  /// Keys that were absent and took their default. Not part of equality.
  std::vector<std::string> notices;

  bool operator==(const RunConfig& other) const;
};

/// One `key = value` line of a config file.
struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

/// Syntax-level view of a config file: sections and entries in file order.
struct ConfigDocument {
  std::vector<ConfigEntry> entries;
  std::vector<std::pair<std::string, int>> sections;  // name, header line

  /// Replaces the value of `section.key`, appending the entry when absent.
  void set(std::string_view dotted_key, std::string value);
};

/// Splits text into sections and entries. Throws ConfigError on malformed
/// lines, unknown sections and duplicate keys.
ConfigDocument parse_document(std::string_view text);

/// Validates and converts a document. Throws ConfigError naming the key and
/// line for unknown, missing or invalid keys.
RunConfig build_config(const ConfigDocument& doc);

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// True for keys the schema accepts.
bool known_key(std::string_view dotted_key);

/// Canonical text form; parse_config(echo_config(c)) == c.
std::string echo_config(const RunConfig& config);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_number(double value);

}  // namespace ctol
