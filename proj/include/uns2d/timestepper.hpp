#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uns2d/elliptic.hpp"
#include "uns2d/presets.hpp"
#include "uns2d/pressure.hpp"

namespace uns2d {

struct SimConfig {
  int nx = 64;
  int ny = 64;
  double nu = 1.0;
  double dt = 1e-3;
  double t_end = 1.0;
  ForcingPreset forcing;
  InitialPreset initial;
  BoundaryPreset bc;
  /// Snapshot every this many steps; 0 disables snapshots.
  long snapshot_every = 0;
  std::uint64_t seed = 0;

  /// Throws ConfigError naming the offending key.
  void validate() const;
  long step_count() const;
};

struct SimState {
  VectorField u;
  double t = 0.0;
  long n = 0;
};

inline constexpr double kBlowUpGradThreshold = 1e12;

struct StepDiagnostics {
  long step = 0;
  double t = 0.0;
  double energy = 0.0;      // ||u||^2
  double grad_u_sq = 0.0;   // ||grad_h u||^2
  double lap_u_sq = 0.0;    // ||Lap_h u||^2, interior nodes
  double div_u_sq = 0.0;    // ||div_h u - h||^2
  double grad_ps_sq = 0.0;  // ||grad_h p_S||^2 of the step's Stokes pressure
  double grad_pe_sq = 0.0;  // ||grad_h p_E||^2
  /// grad_ps_sq / lap_u_sq for the velocity that produced p_S; 0 when
  /// ||Lap u|| vanishes.
  double stokes_ratio = 0.0;
  double compat_corr = 0.0;  // largest |compatibility correction| this step

  bool finite() const;
};

struct StepResult {
  SimState state;
  StepDiagnostics diag;
  /// Pressure parts evaluated at the old state (the explicit terms).
  PressureParts pressure;
  bool pgh_compatible = true;
};

/// Data for one nonhomogeneous step: h, dt h and dt(n.g) at t_n; g and h at
/// t_{n+1}.
struct InhomogeneousData {
  ScalarField h;
  ScalarField dt_h;
  BoundaryData dt_ng;
  VectorField g_next;
  ScalarField h_next;

  static InhomogeneousData from_model(const BoundaryModel& model, const Grid2D& grid, double t,
                                      double dt);
};

/// Implicit viscosity, explicit pressure and convection:
///   (u' - u)/dt - nu Lap u' = f - (u.grad)u - grad p_E - nu grad p_S [- grad p_gh].
class TimeStepper {
 public:
  TimeStepper(const Grid2D& grid, double nu, double dt);

  const Grid2D& grid() const noexcept { return plans_->grid; }
  const SolverPlans& plans() const noexcept { return *plans_; }
  double nu() const noexcept { return nu_; }
  double dt() const noexcept { return dt_; }

  /// Homogeneous step; boundary nodes of the result are zero.
  StepResult step(const SimState& state, const VectorField& f_n) const;

  StepResult step_nonhomogeneous(const SimState& state, const VectorField& f_n,
                                 const InhomogeneousData& data) const;

  /// Diagnostics and pressure of a state on its own. `data` supplies h,
  /// dt h and dt(n.g) at the state's time for the nonhomogeneous problem.
  StepResult evaluate(const SimState& state, const VectorField& f,
                      const InhomogeneousData* data = nullptr) const;

 private:
  std::shared_ptr<const SolverPlans> plans_;
  double nu_;
  double dt_;
};

struct Snapshot {
  long step = 0;
  double t = 0.0;
  const VectorField* u = nullptr;
  const PressureParts* pressure = nullptr;
  double nu = 1.0;
};

struct BlowUp {
  long step = 0;
  StepDiagnostics last_finite;
};

/// A configured run that is advanced one step at a time.
class Simulation {
 public:
  /// `initial` overrides the configured initial preset. Boundary nodes are
  /// reset to g(0) either way.
  explicit Simulation(const SimConfig& cfg, const VectorField* initial = nullptr);
  ~Simulation();
  Simulation(Simulation&&) noexcept;
  Simulation& operator=(Simulation&&) noexcept;

  const SimConfig& config() const noexcept;
  const Grid2D& grid() const noexcept;
  const SimState& state() const noexcept;
  /// Diagnostics of the current state (the initial record before any step).
  const StepDiagnostics& diagnostics() const noexcept;
  /// ||u^{n+1} - u^n|| of the last step; 0 before the first step.
  double last_increment() const noexcept;
  long incompatible_steps() const noexcept;
  const std::optional<BlowUp>& blow_up() const noexcept;

  /// True once t_end is reached or the run blew up.
  bool finished() const noexcept;

  /// Advances one step. Returns false (and records the blow-up) when the new
  /// state is non-finite or ||grad u||^2 exceeds kBlowUpGradThreshold; the
  /// state is then left at the last finite step.
  bool advance();

  /// Pressure parts and diagnostics of the current state.
  StepResult evaluate() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct RunResult {
  /// Initial diagnostics followed by one record per step.
  std::vector<StepDiagnostics> series;
  std::optional<BlowUp> blow_up;
  SimState final_state;
  long incompatible_steps = 0;
};

struct RunOptions {
  std::function<void(const Snapshot&)> on_snapshot;
  /// Called after every step; returning true stops the run early.
  std::function<bool(const Simulation&)> stop_when;
  /// Optional initial velocity overriding the configured preset.
  const VectorField* initial = nullptr;
};

/// Steps until t >= t_end, blow-up or stop_when. Deterministic for a fixed
/// config.
RunResult run(const SimConfig& cfg, const RunOptions& options = {});

}  // namespace uns2d
