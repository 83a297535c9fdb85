#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmnls/dmnls.hpp"

namespace dmnls::harness {

/// Malformed or out-of-range configuration; maps to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// All numerical parameters of one experiment. Sections of the INI file
/// mirror the nesting below; keys are the member names.
struct ExperimentConfig {
  struct Grid {
    std::size_t n = 4096;
    double length = 64.0 * std::numbers::pi;
    bool operator==(const Grid&) const = default;
  } grid;
  struct Model {
    double p = 9.0;
    bool operator==(const Model&) const = default;
  } model;
  struct Quadrature {
    std::size_t order = 32;
    double half_width = 20.0;
    double panel_width = 0.5;
    std::size_t panel_nodes = 16;
    bool tail_closure = true;
    double extension_tol = 1e-10;
    double max_half_width = 20.0;
    bool operator==(const Quadrature&) const = default;
  } quadrature;
  struct GroundStateSolver {
    double update_tol = 1e-10;
    double residual_tol = 1e-6;
    std::size_t max_iterations = 2000;
    /// Existing groundstate.json to reuse instead of solving.
    std::string file;
    bool operator==(const GroundStateSolver&) const = default;
  } groundstate;
  struct Evolve {
    double dt = 1e-3;
    double t_end = -1.0;
    std::size_t stride = 10;
    std::size_t snapshot_stride = 0;
    double growth_factor = 1e3;
    double amplitude_cap = 1e6;
    double min_dt = 1e-9;
    double max_gradient_change = 0.1;
    bool nonlinear = true;
    bool operator==(const Evolve&) const = default;
  } evolve;
  struct Initial {
    std::string family = "gaussian";
    double amplitude = 1.0;
    double width = 1.0;
    double chirp = 0.0;
    double shift = 0.0;
    double phase = 0.0;
    bool operator==(const Initial&) const = default;
  } initial;
  struct Sweep {
    /// Dotted key varied by the sweep subcommand, e.g. initial.amplitude.
    std::string key;
    std::vector<std::string> values;
    /// Subcommand run for every value.
    std::string command = "pipeline";
    bool operator==(const Sweep&) const = default;
  } sweep;
  struct Output {
    std::string dir = "out";
    std::string label;
    bool operator==(const Output&) const = default;
  } output;

  bool operator==(const ExperimentConfig&) const = default;

  /// Throws ConfigError on any out-of-range value.
  void validate() const;

  GridPtr make_grid() const;
  GroundStateConfig ground_state_config() const;
  EvolveConfig evolve_config() const;
  ProfileParams profile() const;
};

/// Parses INI text. Unknown sections or keys and malformed values throw
/// ConfigError; missing keys keep their defaults.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies "section.key=value".
void apply_override(ExperimentConfig& config, const std::string& assignment);
void set_value(ExperimentConfig& config, const std::string& dotted_key, const std::string& value);

/// INI text that parses back to an identical config (doubles as %.17g).
std::string to_ini(const ExperimentConfig& config);
/// JSON object text with the same content.
std::string to_json(const ExperimentConfig& config);

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"groundstate", "bounds",   "evolve", "virial",
                                              "classify",    "pipeline", "sweep"};
  return names;
}

enum ExitCode : int { kSuccess = 0, kUsageError = 2, kNumericalError = 3 };

/// Runs one subcommand, writing artifacts under `out_dir` and a short
/// summary to `log`. Failures are converted to exit codes; numerical
/// failures also write <out_dir>/error.json.
int run_experiment(const std::string& subcommand, const ExperimentConfig& config,
                   const std::filesystem::path& out_dir, std::ostream& log);

/// "lower ≤ C_p ≤ upper" with 7 significant digits. Throws ConfigError for p < 9.
std::string bounds_row(double p);

}  // namespace dmnls::harness
