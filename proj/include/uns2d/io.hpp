#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uns2d/grid.hpp"
#include "uns2d/timestepper.hpp"

namespace uns2d {

/// Parameters for the experiment subcommands, from the optional "experiment"
/// object of a config file. Unset entries fall back to per-command defaults.
struct ExperimentSettings {
  std::optional<long> samples;
  std::optional<std::string> family;
  std::optional<int> modes;
  std::optional<double> decay;
  std::optional<bool> divergence_free;
  std::optional<double> amplitude;
  std::optional<std::vector<double>> fit_window;  // [start, end]
  std::optional<std::vector<int>> grids;
  std::optional<double> spatial_dt;
  std::optional<int> temporal_n;
  std::optional<std::vector<double>> temporal_dts;
  std::optional<double> t_final;
  std::optional<double> steady_tol;
  std::optional<double> t_max;
  std::optional<double> s;
  std::optional<std::vector<double>> dts;

  bool empty() const;
  friend bool operator==(const ExperimentSettings&, const ExperimentSettings&) = default;
};

struct ConfigFile {
  SimConfig sim;
  ExperimentSettings experiment;
};

/// Parses a JSON config. Missing keys take their defaults; unknown keys,
/// wrong types and violated constraints throw ConfigError with the key path.
ConfigFile parse_config_text(const std::string& text);
/// Throws ConfigError (empty key path) when the file cannot be read.
ConfigFile load_config(const std::string& path);
SimConfig parse_config(const std::string& path);

/// Canonical JSON of a config: every field, fixed key order, two-space
/// indent. parse_config_text(config_echo(c)) reproduces c, so the echo of a
/// parsed echo is byte-identical.
std::string config_echo(const ConfigFile& cfg);

std::string format_double(double v);  // %.12e

inline constexpr const char* kDiagnosticsHeader =
    "step,t,energy,grad_u_sq,lap_u_sq,div_u_sq,grad_ps_sq,grad_pe_sq,stokes_ratio,compat_corr";

std::string diagnostics_csv(const std::vector<StepDiagnostics>& series);
/// Nodal values, one j-row per line from j = 0, comma separated.
std::string field_csv(const ScalarField& f);
/// Binary 8-bit P5 image of f, top row = j = ny. Values map linearly from
/// [-max|f|, max|f|] to [0, 255]; a zero field is uniform 128.
std::string vorticity_pgm(const ScalarField& f);

std::string sha256_hex(const std::string& bytes);

/// Writes through a temporary file in the same directory and renames it into
/// place. Throws IoError.
void write_file_atomic(const std::string& path, const std::string& bytes);

struct ManifestFile {
  std::string name;
  std::uintmax_t bytes = 0;
  std::string sha256;
  std::optional<double> max_abs_vorticity;
};

/// An output directory that records every file written into it for the
/// manifest.
class OutputDir {
 public:
  /// Creates the directory if needed. Throws IoError.
  explicit OutputDir(std::string path);

  const std::string& path() const noexcept { return path_; }
  const std::vector<ManifestFile>& files() const noexcept { return files_; }

  void write(const std::string& name, const std::string& bytes,
             std::optional<double> max_abs_vorticity = std::nullopt);

  void write_diagnostics(const std::string& name, const std::vector<StepDiagnostics>& series);
  /// u1_<step>.csv, u2_<step>.csv, p_<step>.csv and vorticity_<step>.pgm.
  void write_snapshot(const Snapshot& snap);

 private:
  std::string path_;
  std::vector<ManifestFile> files_;
};

struct Outcome {
  enum class Kind { Completed, BlewUp, Error } kind = Kind::Completed;
  long step = 0;        // BlewUp
  std::string message;  // Error
};

struct ManifestInfo {
  std::string command;
  std::string config_echo;
  std::string started_utc;
  std::string finished_utc;
  double wall_seconds = 0.0;
  Outcome outcome;
};

/// Builds manifest.json for the directory's files and writes it atomically.
void write_manifest(const OutputDir& dir, const ManifestInfo& info);

/// Re-hashes every file listed in dir/manifest.json; returns the names that
/// are missing or whose size or checksum differs.
std::vector<std::string> verify_manifest(const std::string& dir);

std::string utc_now_iso8601();
const char* version_string() noexcept;

}  // namespace uns2d
