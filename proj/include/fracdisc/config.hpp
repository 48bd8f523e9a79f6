/**
 * @file config.hpp
 * @brief Run configuration files for the fracdisc command-line tool.
 *
 * A config is a flat, sectioned key/value document:
 *
 *   # comment
 *   mode = example
 *
 *   [discretization]
 *   rule = backward_euler        # or tustin
 *   sample_period = 0.05
 *   memory_length = 10           # seconds; omit for full memory
 *
 *   [horizon]
 *   n_steps = 2000
 *
 * Which sections and keys are accepted depends on `mode`; anything else is
 * rejected by name. See README.md for the full schema.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fracdisc/controllers.hpp"
#include "fracdisc/frac_core.hpp"
#include "fracdisc/loop.hpp"
#include "fracdisc/systems.hpp"

namespace fracdisc {

enum class Mode { Coeffs, Operator, SimulateSystem, SimulateLoop, Example, FreqResp };

/// Canonical spelling used on the command line and in `mode = ...`.
std::string_view mode_name(Mode mode);
/// Accepts the canonical name with '-' or '_' separators.
std::optional<Mode> parse_mode(std::string_view text);

/// Configuration error carrying the offending field and source line
/// (0 when no single line is responsible).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, std::size_t line, const std::string& message);

  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

/// Test signal used as plant input, operator input or loop setpoint.
struct SignalSpec {
  enum class Kind { Step, Impulse, Ramp };
  Kind kind = Kind::Step;
  double amplitude = 1.0;
  std::size_t onset = 0;

  std::vector<double> generate(std::size_t n_steps) const;
};

/// Post-run assertion embedded in a config's [expect] section.
struct Expectation {
  enum class Row { Final, All, Index };
  Row row = Row::Final;
  std::size_t index = 0;
  std::string column;
  double value = 0.0;
  std::string key;  // as written, for diagnostics
  std::size_t line = 0;
};

struct RunConfig {
  Mode mode = Mode::Example;
  std::optional<Discretization> discretization;
  double order = 0.0;       // Coeffs, Operator
  std::size_t n_terms = 0;  // Coeffs
  std::optional<FracSystem> system;
  std::optional<FracPid> controller;
  SignalSpec signal;  // Operator / SimulateSystem input, SimulateLoop setpoint
  ExampleParams example;
  std::size_t n_steps = 0;
  std::vector<double> omegas;
  std::optional<std::string> output_path;
  std::vector<Expectation> expectations;
  double tolerance = 1e-9;
};

/// Parses and validates a config document. Throws ConfigError.
RunConfig parse_config(std::string_view text);

/// Reads and parses a config file. Throws ConfigError.
RunConfig load_config(const std::string& path);

}  // namespace fracdisc
