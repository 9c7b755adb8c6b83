#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/force.hpp"

namespace casimir::cli {

/// Parse or validation failure; the message names the line or the field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ExitCode { Success = 0, ConfigError = 2, NonConvergence = 3 };

struct ScanRange {
  double min = 0.0, max = 0.0;
  int steps = 1;
  bool log_spacing = false;

  std::vector<double> values() const;
};

/// Parsed configuration. Lengths are converted to metres once, here.
struct RunConfig {
  force::Ensemble ensemble;
  double R = 0.0;  // radius of sphere 1, m
  force::Options options;

  ScanRange x{5.0, 50.0, 46};    // centre distance / R
  ScanRange theta{0.0, 0.0, 1};  // radians
  double separation = 10.0;      // spheres 1-2 in scan3, units of R

  int n_min = 3, n_max = 12;
  double lambda = 0.1;
  double large_R = 1.0, large_s = 10.0;  // same units, only R/s matters
  double correction = 0.0;
};

/// Sectioned key = value text, '#' comments. Sections: [ensemble],
/// [sphere.<id>], [spectral], [scan], [largen].
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

struct Overrides {
  std::optional<int> L_max;
  std::optional<double> temperature;
};
void apply(RunConfig& config, const Overrides& overrides);

struct CommandOutput {
  std::string csv;
  std::vector<std::string> diagnostics;
  bool converged = true;
};

CommandOutput cmd_force(const RunConfig& config);
CommandOutput cmd_scan_two(const RunConfig& config);
CommandOutput cmd_scan_three(const RunConfig& config);
CommandOutput cmd_large_n(const RunConfig& config);

/// 12 significant digits, "NaN" for NaN, no negative zero.
std::string format_number(double v);

}  // namespace casimir::cli
