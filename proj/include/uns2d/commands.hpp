#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uns2d/io.hpp"

namespace uns2d {

/// Command-line overrides; unset values come from the config.
struct CommandOptions {
  std::string out_dir = "out";
  std::optional<std::vector<double>> dts;
  std::optional<long> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> s;
};

struct CommandResult {
  Outcome outcome;
  /// Contents of summary.json.
  std::string summary;
};

/// Names accepted by execute_command.
const std::vector<std::string>& command_names();

/// Runs one subcommand (run, sweep-stability, verify-stokes, decay, converge,
/// cavity, probe-n2d), writing its outputs, summary.json and manifest.json to
/// options.out_dir. A blow-up is reported in the outcome, not thrown.
/// Throws ConfigError for bad parameters, IoError for output failures.
CommandResult execute_command(const std::string& name, const ConfigFile& cfg,
                              const CommandOptions& options);

}  // namespace uns2d
