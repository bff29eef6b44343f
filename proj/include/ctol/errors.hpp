#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ctol {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Polar evaluated outside its breakpoint range.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double alpha_rad)
      : Error(what), alpha_(alpha_rad) {}
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

/// Elevation or height outside the tether sphere.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Airborne dynamics evaluated below the minimum airborne speed.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A model parameter violates its invariant.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Dynamics failure inside an integrator stage (1..4).
class IntegrationError : public Error {
 public:
  IntegrationError(int stage, const std::string& cause)
      : Error("RK4 stage " + std::to_string(stage) + ": " + cause), stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

/// Config ingestion failure; carries the offending key and line (0 if none).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, int line, const std::string& message)
      : Error(format(key, line, message)), key_(key), line_(line) {}
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& key, int line,
                            const std::string& message) {
    std::string s = "config error";
    if (line > 0) s += " at line " + std::to_string(line);
    if (!key.empty()) s += " [" + key + "]";
    return s + ": " + message;
  }
  std::string key_;
  int line_;
};

/// Trim, linearization or Riccati failure.
class SynthesisError : public Error {
 public:
  SynthesisError(const std::string& what, std::vector<double> residuals = {})
      : Error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residual_history() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

/// Output file or stream could not be written.
class OutputError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctol
