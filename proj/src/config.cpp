#include "ctol/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "ctol/errors.hpp"
#include "ctol/units.hpp"

namespace ctol {

EnvelopeQuery EnvelopeSettings::query() const {
  EnvelopeQuery q;
  q.alphas = alphas;
  q.include_thrust = include_thrust;
  const auto grid = [](double lo, double hi, int n) {
    std::vector<double> g;
    if (n == 1) return std::vector<double>{lo};
    for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
    return g;
  };
  q.tether_lengths = grid(r_min, r_max, r_count);
  q.elevations = grid(beta_min, beta_max, beta_count);
  return q;
}

bool RunConfig::operator==(const RunConfig& o) const {
  return plant.aircraft == o.plant.aircraft && plant.env == o.plant.env &&
         plant.polar == o.plant.polar && plant.tether == o.plant.tether &&
         plant.ground == o.plant.ground && phases == o.phases &&
         controllers == o.controllers && scenario == o.scenario && sim == o.sim &&
         envelope == o.envelope;
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::set<std::string>& known_sections() {
  static const std::set<std::string> names = {
      "aircraft",        "env",            "tether",         "ground",
      "limits",          "aero.polar",     "phases",         "controllers",
      "controllers.p1",  "controllers.p2", "controllers.p3", "controllers.p4",
      "controllers.p5",  "controllers.p6", "controllers.p7", "sim",
      "scenario",        "envelope"};
  return names;
}

bool repeatable(const ConfigEntry& e) { return e.section == "aero.polar" && e.key == "row"; }

std::string dotted(const ConfigEntry& e) { return e.section + "." + e.key; }

double parse_double(const std::string& text, const ConfigEntry& e) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() ||
      !std::isfinite(v)) {
    throw ConfigError(dotted(e), e.line, "expected a finite number, got '" + s + "'");
  }
  return v;
}

std::vector<double> parse_list(const ConfigEntry& e, std::size_t expected) {
  std::vector<double> out;
  std::string_view rest = e.value;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_double(std::string(rest.substr(0, comma)), e));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (expected != 0 && out.size() != expected) {
    throw ConfigError(dotted(e), e.line,
                      "expected " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

bool parse_bool(const ConfigEntry& e) {
  const std::string v = trim(e.value);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(dotted(e), e.line, "expected true or false, got '" + v + "'");
}

/// Degree text whose conversion gives back exactly `rad`.
std::string format_angle(double rad) {
  if (rad == 0.0) return "0";
  double d = rad_to_deg(rad);
  std::string best;
  for (int i = 0; i < 16; ++i) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  for (int i = 0; i < 33; ++i) {
    if (deg_to_rad(d) == rad) {
      std::string s = format_number(d);
      if (best.empty() || s.size() < best.size()) best = s;
    }
    d = std::nextafter(d, std::numeric_limits<double>::infinity());
  }
  return best.empty() ? format_number(rad_to_deg(rad)) : best;
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
  return s;
}

// Schema: one Field per key, in canonical echo order.
struct Field {
  std::string section;
  std::string key;
  bool required;
  std::function<void(RunConfig&, const ConfigEntry&)> read;
  std::function<std::string(const RunConfig&)> write;
};

using DoubleRef = std::function<double&(RunConfig&)>;

double& cref(const DoubleRef& ref, const RunConfig& c) {
  return ref(const_cast<RunConfig&>(c));
}

Field number(std::string sec, std::string key, bool req, DoubleRef ref) {
  return {std::move(sec), std::move(key), req,
          [ref](RunConfig& c, const ConfigEntry& e) { ref(c) = parse_double(e.value, e); },
          [ref](const RunConfig& c) { return format_number(cref(ref, c)); }};
}

Field angle(std::string sec, std::string key, bool req, DoubleRef ref) {
  return {std::move(sec), std::move(key), req,
          [ref](RunConfig& c, const ConfigEntry& e) {
            ref(c) = deg_to_rad(parse_double(e.value, e));
          },
          [ref](const RunConfig& c) { return format_angle(cref(ref, c)); }};
}

Field count(std::string sec, std::string key, bool req, std::function<int&(RunConfig&)> ref) {
  return {std::move(sec), std::move(key), req,
          [ref](RunConfig& c, const ConfigEntry& e) {
            const double v = parse_double(e.value, e);
            if (v != std::floor(v) || v < 1 || v > 1e7) {
              throw ConfigError(dotted(e), e.line, "expected a positive integer");
            }
            ref(c) = static_cast<int>(v);
          },
          [ref](const RunConfig& c) {
            return std::to_string(ref(const_cast<RunConfig&>(c)));
          }};
}

Field flag(std::string sec, std::string key, bool req, std::function<bool&(RunConfig&)> ref) {
  return {std::move(sec), std::move(key), req,
          [ref](RunConfig& c, const ConfigEntry& e) { ref(c) = parse_bool(e); },
          [ref](const RunConfig& c) {
            return std::string(ref(const_cast<RunConfig&>(c)) ? "true" : "false");
          }};
}

Field gains(std::string sec, std::string key, std::function<PidSetting&(RunConfig&)> ref) {
  return {std::move(sec), std::move(key), true,
          [ref](RunConfig& c, const ConfigEntry& e) {
            const auto v = parse_list(e, 3);
            if (v[0] < 0 || v[1] < 0 || v[2] < 0) {
              throw ConfigError(dotted(e), e.line, "gains must be non-negative");
            }
            auto& s = ref(c);
            s.kp = v[0];
            s.ki = v[1];
            s.kd = v[2];
          },
          [ref](const RunConfig& c) {
            const auto& s = ref(const_cast<RunConfig&>(c));
            return join({format_number(s.kp), format_number(s.ki), format_number(s.kd)});
          }};
}

template <int N>
Field weights(std::string sec, std::string key,
              std::function<Eigen::Matrix<double, N, 1>&(RunConfig&)> ref) {
  return {std::move(sec), std::move(key), true,
          [ref](RunConfig& c, const ConfigEntry& e) {
            const auto v = parse_list(e, N);
            for (int i = 0; i < N; ++i) {
              if (v[i] < 0) throw ConfigError(dotted(e), e.line, "weights must be non-negative");
              ref(c)[i] = v[i];
            }
          },
          [ref](const RunConfig& c) {
            const auto& w = ref(const_cast<RunConfig&>(c));
            std::vector<std::string> parts;
            for (int i = 0; i < N; ++i) parts.push_back(format_number(w[i]));
            return join(parts);
          }};
}

Field windup(std::string sec, std::vector<std::function<PidSetting&(RunConfig&)>> loops) {
  return {std::move(sec), "anti_windup", false,
          [loops](RunConfig& c, const ConfigEntry& e) {
            const bool on = parse_bool(e);
            for (const auto& l : loops) l(c).conditional_integration = on;
          },
          [loops](const RunConfig& c) {
            return std::string(
                loops.front()(const_cast<RunConfig&>(c)).conditional_integration ? "true"
                                                                                 : "false");
          }};
}

void add_pid_section(std::vector<Field>& f, const std::string& sec, const std::string& outer,
                     bool outer_is_angle, std::function<PidSetting&(RunConfig&)> outer_ref,
                     std::function<PidSetting&(RunConfig&)> thrust_ref) {
  f.push_back(gains(sec, outer + "_gains", outer_ref));
  if (outer_is_angle) {
    f.push_back(angle(sec, outer + "_ref_deg", true,
                      [outer_ref](RunConfig& c) -> double& { return outer_ref(c).reference; }));
  } else {
    f.push_back(number(sec, outer + "_ref", true,
                       [outer_ref](RunConfig& c) -> double& { return outer_ref(c).reference; }));
  }
  std::vector<std::function<PidSetting&(RunConfig&)>> loops{outer_ref};
  if (thrust_ref) {
    f.push_back(gains(sec, "airspeed_gains", thrust_ref));
    f.push_back(number(sec, "airspeed_ref", true,
                       [thrust_ref](RunConfig& c) -> double& { return thrust_ref(c).reference; }));
    loops.push_back(thrust_ref);
  }
  f.push_back(windup(sec, loops));
}

void add_lqr_section(std::vector<Field>& f, const std::string& sec,
                     std::function<LqrSetting&(RunConfig&)> ref) {
  f.push_back(angle(sec, "beta_ref_deg", true,
                    [ref](RunConfig& c) -> double& { return ref(c).x_ref[0]; }));
  f.push_back(number(sec, "airspeed_ref", true,
                     [ref](RunConfig& c) -> double& { return ref(c).x_ref[1]; }));
  f.push_back(angle(sec, "gamma_ref_deg", true,
                    [ref](RunConfig& c) -> double& { return ref(c).x_ref[2]; }));
  f.push_back(angle(sec, "theta_ref_deg", true,
                    [ref](RunConfig& c) -> double& { return ref(c).x_ref[3]; }));
  f.push_back(weights<4>(sec, "q", [ref](RunConfig& c) -> Eigen::Vector4d& {
    return ref(c).weights.q_diag;
  }));
  f.push_back(weights<2>(sec, "r", [ref](RunConfig& c) -> Eigen::Vector2d& {
    return ref(c).weights.r_diag;
  }));
}

const std::vector<Field>& schema() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    using C = RunConfig;
    f.push_back(number("aircraft", "mass", true, [](C& c) -> double& { return c.plant.aircraft.mass; }));
    f.push_back(number("aircraft", "wing_area", true, [](C& c) -> double& { return c.plant.aircraft.wing_area; }));
    f.push_back(number("aircraft", "wingspan", true, [](C& c) -> double& { return c.plant.aircraft.wingspan; }));
    f.push_back(angle("aircraft", "incidence_deg", true, [](C& c) -> double& { return c.plant.aircraft.incidence; }));

    f.push_back(number("env", "air_density", true, [](C& c) -> double& { return c.plant.env.air_density; }));
    f.push_back(number("env", "gravity", true, [](C& c) -> double& { return c.plant.env.gravity; }));
    f.push_back({"env", "wind_speed", true,
                 [](C& c, const ConfigEntry& e) {
                   const double v = parse_double(e.value, e);
                   if (v != 0.0) {
                     throw ConfigError(dotted(e), e.line,
                                       "wind_speed must be 0: the tethered model assumes "
                                       "still air (no-wind scope)");
                   }
                   c.plant.env.wind_speed = v;
                 },
                 [](const C& c) { return format_number(c.plant.env.wind_speed); }});

    f.push_back(number("tether", "length", true, [](C& c) -> double& { return c.plant.tether.length; }));

    f.push_back(number("ground", "rolling_friction", false, [](C& c) -> double& { return c.plant.ground.rolling_friction; }));
    f.push_back(number("ground", "min_airborne_speed", false, [](C& c) -> double& { return c.plant.ground.min_airborne_speed; }));

    f.push_back(number("limits", "thrust_min", true, [](C& c) -> double& { return c.plant.aircraft.thrust_min; }));
    f.push_back(number("limits", "thrust_max", true, [](C& c) -> double& { return c.plant.aircraft.thrust_max; }));
    f.push_back(angle("limits", "pitch_rate_limit_degs", true, [](C& c) -> double& { return c.plant.aircraft.pitch_rate_limit; }));

    // Rows are collected by build_config; this field only echoes them.
    f.push_back({"aero.polar", "row", true, nullptr, [](const C& c) {
                   std::string s;
                   bool first = true;
                   for (const auto& p : c.plant.polar.points()) {
                     if (!first) s += "\nrow = ";
                     first = false;
                     s += join({format_angle(p.alpha), format_number(p.cl), format_number(p.cd)});
                   }
                   return s;
                 }});

    f.push_back(number("phases", "v_rot", true, [](C& c) -> double& { return c.phases.v_rot; }));
    f.push_back(number("phases", "v_loiter", true, [](C& c) -> double& { return c.phases.v_loiter; }));
    f.push_back(number("phases", "v_glide", true, [](C& c) -> double& { return c.phases.v_glide; }));
    f.push_back(angle("phases", "gamma_climb_deg", true, [](C& c) -> double& { return c.phases.gamma_climb; }));
    f.push_back(angle("phases", "gamma_glide_deg", true, [](C& c) -> double& { return c.phases.gamma_glide; }));
    f.push_back(angle("phases", "theta_rot_deg", true, [](C& c) -> double& { return c.phases.theta_rot; }));
    f.push_back(angle("phases", "theta_flare_deg", true, [](C& c) -> double& { return c.phases.theta_flare; }));
    f.push_back(number("phases", "h0", true, [](C& c) -> double& { return c.phases.h0; }));
    f.push_back(number("phases", "h_flare", true, [](C& c) -> double& { return c.phases.h_flare; }));
    f.push_back(number("phases", "stop_speed", false, [](C& c) -> double& { return c.phases.stop_speed; }));

    f.push_back({"controllers", "reference_mode", false,
                 [](C& c, const ConfigEntry& e) {
                   const std::string v = trim(e.value);
                   if (v == "trim") {
                     c.controllers.reference_mode = ReferenceMode::Trim;
                   } else if (v == "table") {
                     c.controllers.reference_mode = ReferenceMode::Table;
                   } else {
                     throw ConfigError(dotted(e), e.line, "expected trim or table, got '" + v + "'");
                   }
                 },
                 [](const C& c) {
                   return std::string(c.controllers.reference_mode == ReferenceMode::Trim ? "trim"
                                                                                         : "table");
                 }});

    add_pid_section(f, "controllers.p1", "theta", true,
                    [](C& c) -> PidSetting& { return c.controllers.p1_theta; },
                    [](C& c) -> PidSetting& { return c.controllers.p1_airspeed; });
    add_pid_section(f, "controllers.p2", "theta", true,
                    [](C& c) -> PidSetting& { return c.controllers.p2_theta; },
                    [](C& c) -> PidSetting& { return c.controllers.p2_airspeed; });
    add_lqr_section(f, "controllers.p3", [](C& c) -> LqrSetting& { return c.controllers.p3; });
    add_lqr_section(f, "controllers.p4", [](C& c) -> LqrSetting& { return c.controllers.p4; });
    add_pid_section(f, "controllers.p5", "gamma", true,
                    [](C& c) -> PidSetting& { return c.controllers.p5_gamma; },
                    [](C& c) -> PidSetting& { return c.controllers.p5_airspeed; });
    f.push_back(angle("controllers.p5", "theta_ceiling_deg", true,
                      [](C& c) -> double& { return c.controllers.p5_theta_ceiling; }));
    add_lqr_section(f, "controllers.p6", [](C& c) -> LqrSetting& { return c.controllers.p6; });
    add_pid_section(f, "controllers.p7", "theta", true,
                    [](C& c) -> PidSetting& { return c.controllers.p7_theta; }, nullptr);

    f.push_back(number("sim", "dt", false, [](C& c) -> double& { return c.sim.dt; }));
    f.push_back(number("sim", "max_time", false, [](C& c) -> double& { return c.sim.max_time; }));
    f.push_back(number("sim", "event_tolerance", false, [](C& c) -> double& { return c.sim.event_tolerance; }));

    f.push_back({"scenario", "takeoff_time", false,
                 [](C& c, const ConfigEntry& e) {
                   if (trim(e.value) == "none") {
                     c.scenario.takeoff_time.reset();
                   } else {
                     c.scenario.takeoff_time = parse_double(e.value, e);
                   }
                 },
                 [](const C& c) {
                   return c.scenario.takeoff_time ? format_number(*c.scenario.takeoff_time)
                                                  : std::string("none");
                 }});
    f.push_back(number("scenario", "landing_time", false, [](C& c) -> double& { return c.scenario.landing_time; }));

    f.push_back({"envelope", "alphas_deg", false,
                 [](C& c, const ConfigEntry& e) {
                   c.envelope.alphas.clear();
                   for (double d : parse_list(e, 0)) c.envelope.alphas.push_back(deg_to_rad(d));
                 },
                 [](const C& c) {
                   std::vector<std::string> parts;
                   for (double a : c.envelope.alphas) parts.push_back(format_angle(a));
                   return join(parts);
                 }});
    f.push_back(number("envelope", "r_min", false, [](C& c) -> double& { return c.envelope.r_min; }));
    f.push_back(number("envelope", "r_max", false, [](C& c) -> double& { return c.envelope.r_max; }));
    f.push_back(count("envelope", "r_count", false, [](C& c) -> int& { return c.envelope.r_count; }));
    f.push_back(angle("envelope", "beta_min_deg", false, [](C& c) -> double& { return c.envelope.beta_min; }));
    f.push_back(angle("envelope", "beta_max_deg", false, [](C& c) -> double& { return c.envelope.beta_max; }));
    f.push_back(count("envelope", "beta_count", false, [](C& c) -> int& { return c.envelope.beta_count; }));
    f.push_back(flag("envelope", "include_thrust", false, [](C& c) -> bool& { return c.envelope.include_thrust; }));
    return f;
  }();
  return fields;
}

int section_line(const ConfigDocument& doc, const std::string& section) {
  for (const auto& [name, line] : doc.sections) {
    if (name == section) return line;
  }
  return 0;
}

// Wraps a module-level invariant check so the error points into the file.
template <class F>
void check_section(const ConfigDocument& doc, const std::string& section, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(section, section_line(doc, section), e.what());
  }
}

}  // namespace

void ConfigDocument::set(std::string_view dotted_key, std::string value) {
  const auto dot = dotted_key.rfind('.');
  if (dot == std::string_view::npos) {
    throw ConfigError(std::string(dotted_key), 0, "expected section.key");
  }
  const std::string section(dotted_key.substr(0, dot));
  const std::string key(dotted_key.substr(dot + 1));
  for (auto& e : entries) {
    if (e.section == section && e.key == key) {
      e.value = std::move(value);
      return;
    }
  }
  entries.push_back({section, key, std::move(value), 0});
}

ConfigDocument parse_document(std::string_view text) {
  ConfigDocument doc;
  std::string section;
  std::set<std::string> seen_keys;
  std::set<std::string> seen_sections;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                          : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", line_no, "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known_sections().count(section)) {
        throw ConfigError(section, line_no, "unknown section");
      }
      if (!seen_sections.insert(section).second) {
        throw ConfigError(section, line_no, "duplicate section");
      }
      doc.sections.emplace_back(section, line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", line_no, "expected key = value");
    if (section.empty()) throw ConfigError("", line_no, "key outside of any section");
    ConfigEntry entry{section, trim(std::string_view(line).substr(0, eq)),
                      trim(std::string_view(line).substr(eq + 1)), line_no};
    if (entry.key.empty()) throw ConfigError("", line_no, "empty key");
    if (entry.value.empty()) throw ConfigError(dotted(entry), line_no, "empty value");
    if (!repeatable(entry) && !seen_keys.insert(dotted(entry)).second) {
      throw ConfigError(dotted(entry), line_no, "duplicate key");
    }
    doc.entries.push_back(std::move(entry));
  }
  return doc;
}

RunConfig build_config(const ConfigDocument& doc) {
  RunConfig defaults;
  defaults.controllers = default_controllers();
  RunConfig c = defaults;

  const auto& fields = schema();
  for (const auto& e : doc.entries) {
    const bool known = std::any_of(fields.begin(), fields.end(), [&](const Field& f) {
      return f.section == e.section && f.key == e.key;
    });
    if (!known) throw ConfigError(dotted(e), e.line, "unknown key");
  }

  for (const auto& f : fields) {
    const std::string name = f.section + "." + f.key;
    if (f.section == "aero.polar") {
      std::vector<PolarPoint> rows;
      int first_line = 0;
      for (const auto& e : doc.entries) {
        if (e.section != f.section || e.key != f.key) continue;
        if (first_line == 0) first_line = e.line;
        const auto v = parse_list(e, 3);
        rows.push_back({deg_to_rad(v[0]), v[1], v[2]});
      }
      if (rows.empty()) {
        throw ConfigError(name, section_line(doc, f.section), "missing key");
      }
      try {
        c.plant.polar = AeroPolar(std::move(rows));
      } catch (const Error& err) {
        throw ConfigError(name, first_line, err.what());
      }
      continue;
    }
    const auto it = std::find_if(doc.entries.begin(), doc.entries.end(), [&](const ConfigEntry& e) {
      return e.section == f.section && e.key == f.key;
    });
    if (it == doc.entries.end()) {
      if (f.required) throw ConfigError(name, section_line(doc, f.section), "missing key");
      c.notices.push_back(name + " not set; using default " + f.write(defaults));
      continue;
    }
    f.read(c, *it);
  }

  check_section(doc, "aircraft", [&] { c.plant.aircraft.validate(); });
  check_section(doc, "env", [&] { c.plant.env.validate(); });
  check_section(doc, "tether", [&] { c.plant.tether.validate(); });
  check_section(doc, "ground", [&] { c.plant.ground.validate(); });
  check_section(doc, "sim", [&] { c.sim.validate(); });
  check_section(doc, "scenario", [&] { c.scenario.validate(); });
  check_section(doc, "phases", [&] {
    const auto& p = c.phases;
    if (!(p.v_rot > 0 && p.v_loiter > 0 && p.v_glide > 0 && p.stop_speed >= 0)) {
      throw ParameterError("speeds must be positive");
    }
    height_to_elevation(p.h0, c.plant.tether);
    height_to_elevation(p.h_flare, c.plant.tether);
    if (!(p.h_flare < p.h0)) throw ParameterError("h_flare must be below h0");
  });
  check_section(doc, "envelope", [&] {
    for (double a : c.envelope.alphas) c.plant.polar.coefficients(a);
    c.envelope.query().validate();
  });
  return c;
}

bool known_key(std::string_view dotted_key) {
  return std::any_of(schema().begin(), schema().end(), [&](const Field& f) {
    return f.section + "." + f.key == dotted_key;
  });
}

RunConfig parse_config(std::string_view text) { return build_config(parse_document(text)); }

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", 0, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string echo_config(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& f : schema()) {
    if (f.section != section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.key + " = " + f.write(config) + "\n";
  }
  return out;
}

}  // namespace ctol
