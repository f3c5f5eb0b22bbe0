#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tdho/frequency_profile.hpp"

namespace tdho {

enum class ProfileVariant { SmoothedStep, IdealStep, Constant, Tabulated };

// Which Ermakov integration route a command runs: the nonlinear equation
// directly, the linear pair, or both (with a cross-check before emitting the
// direct result).
enum class RouteChoice { Direct, Pinney, Both };

struct ProfileConfig {
  ProfileVariant variant = ProfileVariant::SmoothedStep;
  double omega1 = 1.0;
  double omega2 = 2.0;
  double epsilon = 20.0;
  double t_step = 2.0;
  double omega0 = 1.0;
  std::vector<double> tab_times;
  std::vector<double> tab_values;
  bool alt_omega_form = false;

  bool operator==(const ProfileConfig&) const = default;
};

struct SolverConfig {
  double t0 = 0.0;
  double t1 = 10.0;
  double dt = 1e-4;
  RouteChoice route = RouteChoice::Direct;

  bool operator==(const SolverConfig&) const = default;
};

struct StateConfig {
  double rho0 = 1.0;
  double rho_dot0 = 0.0;
  double alpha_re = 1.0;
  double alpha_im = 0.0;

  bool operator==(const StateConfig&) const = default;
};

struct OracleConfig {
  bool enabled = false;
  std::size_t grid_n = 2048;
  double x_min = -20.0;
  double x_max = 20.0;
  double dt_grid = 1e-4;

  bool operator==(const OracleConfig&) const = default;
};

struct OutputConfig {
  std::string out = "-";        // "-" writes to stdout
  std::string report_out;       // machine-readable verify report; empty = none
  std::string format = "csv";

  bool operator==(const OutputConfig&) const = default;
};

struct SweepConfig {
  std::vector<double> omega2_values = {1.5, 2.0, 2.5, 3.0};

  bool operator==(const SweepConfig&) const = default;
};

struct ScenarioConfig {
  ProfileConfig profile;
  SolverConfig solver;
  StateConfig state;
  OracleConfig oracle;
  OutputConfig output;
  SweepConfig sweep;

  bool operator==(const ScenarioConfig&) const = default;
};

// Parses flat `key = value` text with `#` comment lines and one [section] per
// config group: [profile], [solver], [state], [oracle], [output], [sweep].
// Unknown sections, unknown keys, keys in the wrong section, and malformed
// values are all rejected with "<name>:<line>: <message>".
ScenarioConfig parse_config_text(const std::string& text, const std::string& name);

// parse_config_text on the file's contents; throws std::runtime_error if the
// file cannot be read.
ScenarioConfig parse_config_file(const std::string& path);

// Canonical text form: every section and key, fixed order, numbers with 17
// significant digits so parse(serialize(c)) == c exactly.
std::string serialize_config(const ScenarioConfig& config);

// Sets one key (same names as in the config file, section inferred) from its
// string form.  Throws std::invalid_argument for unknown keys or bad values.
void apply_override(ScenarioConfig& config, const std::string& key,
                    const std::string& value);

// All recognized override keys, in canonical order (used to generate the CLI
// flag set).
const std::vector<std::string>& config_keys();

// Builds the frequency profile described by the config (validation included).
FrequencyProfile make_profile(const ProfileConfig& config);

}  // namespace tdho
