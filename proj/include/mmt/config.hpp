#pragma once

// Scenario configuration: a strict line-oriented `section.key = value` format.
//
//   # comment
//   scenario.name   = "flat-to-sphere"
//   source.kind     = jacobi-second-order
//   source.metric   = schwarzschild
//   source.params   = (1)
//   source.x0       = (0, 10, 1.5707963267948966, 0)
//   source.v0       = (1, 0, 0, 0)
//   target.kind     = constant-curvature
//   target.K        = 1
//   integration.h   = 1e-3
//   integration.tau_max = 5
//
// Values are numbers, bare words, double-quoted strings, or parenthesized
// lists of values (lists may nest). Unknown keys, duplicate keys and keys that
// the selected kind does not use are errors. Every error names the line.

#include <optional>
#include <string>
#include <vector>

#include "mmt/error.hpp"

namespace mmt {

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  /// 1-based line of the offending entry, 0 when not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// How one side of the transfer gets its quadratic Hamiltonian.
///
/// kind                   keys
/// jacobi-second-order    metric, params | diag + signature, signature, x0, v0
/// jacobi-first-order     congruence, params
/// constant-curvature     K, n
/// metric-second-order    G | b, n
/// metric-quadratic-form  G | b, n
/// metric-first-order     G | b, n
///
/// The target side accepts the last four kinds only.
struct SideConfig {
  std::string kind;
  std::string metric;
  std::vector<double> params;
  std::vector<std::string> diag;
  std::vector<int> signature;
  std::vector<double> x0;
  std::vector<double> v0;
  std::string congruence;
  /// Broadcast to n entries by the parser.
  std::vector<double> K;
  std::vector<double> b;
  /// Rows of expressions in `tau`.
  std::vector<std::vector<std::string>> G;
  std::optional<std::size_t> n;

  friend bool operator==(const SideConfig&, const SideConfig&) = default;
};

struct Tolerances {
  double ode = 1e-4;
  double mapping = 1e-4;
  double factorization = 1e-6;
  double norm_drift = 1e-8;
  double frame_drift = 1e-8;
  /// Not a pass/fail check: the summary flags T as non-symplectic above it.
  double symplectic_flag = 1e-3;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  SideConfig source;
  SideConfig target;
  double h = 1e-3;
  double tau_max = 0.0;
  /// Row-major 2n x 2n entries; empty means the identity.
  std::vector<double> T0;
  /// Initial phase states for the mapping check; empty means the 2n unit vectors.
  std::vector<std::vector<double>> verify_states;
  Tolerances tolerance;
  std::optional<std::string> output_dir;
  std::vector<std::string> formats = {"csv", "json"};

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;

  /// Half-dimension shared by source and target (valid after parse).
  std::size_t n() const;
  std::size_t steps() const;
};

/// Parses and validates. Throws ConfigError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Canonical text form; parse_config(echo_config(c)) == c.
std::string echo_config(const ScenarioConfig& c);

/// Re-runs the semantic checks, e.g. after command-line overrides.
void validate_config(const ScenarioConfig& c);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace mmt
