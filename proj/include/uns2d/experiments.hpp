#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uns2d/grid.hpp"
#include "uns2d/timestepper.hpp"

namespace uns2d {

// ---------------------------------------------------------------------------
// Random velocity samples

enum class SampleFamily { RandomSineSeries, StreamFunction, InteriorBump };

const char* to_string(SampleFamily f) noexcept;
/// Throws ArgumentError for an unknown name.
SampleFamily sample_family_from_string(const std::string& name);

struct SampleSpec {
  SampleFamily family = SampleFamily::StreamFunction;
  /// Modes per direction.
  int modes = 4;
  /// Coefficient of mode (k, l) is uniform in [-1, 1] times (1 + k^2 + l^2)^(-decay/2).
  double decay = 1.0;
  std::uint64_t seed = 7;
  /// Build u as the perpendicular gradient of a stream function whose value
  /// and gradient vanish on the boundary. Required for StreamFunction.
  bool divergence_free = true;

  void validate() const;
};

/// Uniform doubles in [-1, 1) built from raw mt19937_64 output, so the same
/// seed gives the same stream with every standard library (the std
/// distributions are implementation-defined).
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-52 - 1.0; }

 private:
  std::mt19937_64 engine_;
};

/// One sample velocity; boundary nodes are exactly zero. The underlying
/// continuous field depends only on (spec, index), not on the grid.
VectorField make_sample(const SampleSpec& spec, long index, const Grid2D& grid);

// ---------------------------------------------------------------------------
// Stokes-pressure estimate

enum class StokesBackend { Fast, DenseOracle };

struct StokesSample {
  long index = 0;
  double grad_ps_sq = 0.0;
  double lap_u_sq = 0.0;
  double grad_u_sq = 0.0;
  double ratio = 0.0;  // grad_ps_sq / lap_u_sq
};

struct FitResult {
  double beta_hat = 0.0;
  double c_hat = 0.0;
  /// Largest ratio among divergence-free samples (0 if there are none).
  double max_ratio = 0.0;
  long sample_count = 0;
  long skipped = 0;  // samples with ||Lap u|| = 0
  int nx = 0;
  int ny = 0;
  std::vector<StokesSample> samples;
};

/// Least-squares fit of r_i = beta + C q_i with r = ||grad p_S||^2 / ||Lap u||^2
/// and q = ||grad u||^2 / ||Lap u||^2, subject to 0 <= beta <= 1, C >= 0.
/// Returns {beta, C}.
std::array<double, 2> fit_stokes_constants(const std::vector<StokesSample>& samples);

FitResult verify_stokes_estimate(const SampleSpec& spec, long sample_count, const Grid2D& grid,
                                 StokesBackend backend = StokesBackend::Fast);

// ---------------------------------------------------------------------------
// Stability sweep

struct StabilityRow {
  double dt = 0.0;
  long steps = 0;
  bool blew_up = false;
  long blow_up_step = 0;
  double sup_grad_sq = 0.0;  // sup_k ||grad u^k||^2
  double sum_lap_dt = 0.0;   // sum_{k>=1} ||Lap u^k||^2 dt
  double final_energy = 0.0;
};

std::vector<StabilityRow> stability_sweep(const SimConfig& base, const std::vector<double>& dts);

// ---------------------------------------------------------------------------
// Divergence decay

struct DecaySpec {
  int n = 128;
  double nu = 1.0;
  double dt = 1e-4;
  double amplitude = 1e-3;
  double fit_start = 0.05;
  double fit_end = 0.5;
};

struct DecayResult {
  /// Fitted decay rate of ||div_h u||; 0 when the divergence vanishes.
  double rate_hat = 0.0;
  bool fitted = false;
  double expected = 0.0;  // nu * pi^2
  double rel_error = 0.0;
  double max_div_norm = 0.0;
  /// ||div_h u0 - amplitude cos(pi x)||, the part of the initial divergence
  /// that comes from the no-slip taper.
  double taper_div_norm = 0.0;
  std::vector<double> t;
  std::vector<double> div_norm;
};

DecayResult divergence_decay(const DecaySpec& spec);

/// Least-squares slope of log(y) against x over x in [x0, x1]; entries with
/// y <= 0 are skipped. Returns nullopt with fewer than two usable points.
std::optional<double> fit_log_slope(const std::vector<double>& x, const std::vector<double>& y,
                                    double x0, double x1);

// ---------------------------------------------------------------------------
// Manufactured-solution convergence

struct ConvergenceSpec {
  std::vector<int> grids{16, 32, 64};
  double spatial_dt = 1e-5;
  int temporal_n = 128;
  std::vector<double> temporal_dts{4e-3, 2e-3, 1e-3};
  double t_final = 0.25;
  double nu = 1.0;
};

struct ConvergenceRow {
  std::string kind;  // "space" or "time"
  int n = 0;
  double dt = 0.0;
  double t = 0.0;
  /// Space: ||u_h - u*|| at t. Time: ||u_dt - u_dt/2|| against the next run.
  double error = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  double spatial_order = 0.0;   // least-squares slope of log error vs log h
  double temporal_order = 0.0;  // least-squares slope of log difference vs log dt
  double t_space = 0.0;
  double t_time = 0.0;
};

ConvergenceResult convergence_study(const ConvergenceSpec& spec);

// ---------------------------------------------------------------------------
// Lid-driven cavity

struct CavitySpec {
  int n = 64;
  double speed = 1.0;
  double nu = 0.1;
  double dt = 1e-2;
  double t_max = 60.0;
  /// Steady when ||u^{n+1} - u^n|| / dt falls to this value.
  double steady_tol = 1e-6;
  std::string profile = "uniform";
};

struct CavityResult {
  explicit CavityResult(const Grid2D& g) : state{VectorField(g)} {}

  bool steady = false;
  std::optional<long> blow_up_step;
  long steps = 0;
  double t = 0.0;
  double residual = 0.0;
  double energy = 0.0;
  double max_div = 0.0;           // max |div_h u| over all nodes
  double max_div_interior = 0.0;  // interior nodes only
  double max_pgh = 0.0;           // max |p_gh| at the final state
  std::vector<double> y, u1_center;  // u1 along x = 1/2
  std::vector<double> x, u2_center;  // u2 along y = 1/2
  SimState state;
  std::vector<StepDiagnostics> series;
};

/// n must be even so the centerlines fall on grid lines.
CavityResult lid_driven_cavity(const CavitySpec& spec);

/// Relative L2 change of centerline profiles between a run and one on the
/// doubled grid, compared at the coarse nodes.
double centerline_change(const CavityResult& coarse, const CavityResult& fine);

// ---------------------------------------------------------------------------
// Neumann-to-Dirichlet probe

struct ProbeSpec {
  int n = 128;
  double s = 0.1;
  long samples = 50;
  int modes = 8;
  std::uint64_t seed = 7;
};

struct ProbeResult {
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  std::vector<double> ratios;
  long strip_nodes = 0;  // nodes counted in the strip
};

/// Ratio of the integral of |grad_h p|^2 to that of |n . grad_h p|^2 over
/// the strip {dist(x, boundary) <= s}, with n the normal of the nearest side
/// (ties go to the first of left, right, bottom, top) and nodes within 2h of
/// a corner (max-norm) excluded. Requires 2h < s < 0.25.
double n2d_ratio(const ScalarField& p, double s, long* strip_nodes = nullptr);

/// Random zero-mean Neumann data: on each side a cosine series in arc length
/// with `modes` terms and coefficients ~ 1/(1+k), then shifted to zero mean.
BoundaryData random_neumann_data(const Grid2D& grid, int modes, std::uint64_t seed, long index);

ProbeResult probe_neumann_to_dirichlet(const ProbeSpec& spec);

}  // namespace uns2d
