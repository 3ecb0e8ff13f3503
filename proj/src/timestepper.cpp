#include "uns2d/timestepper.hpp"

#include <algorithm>
#include <cmath>

#include "uns2d/error.hpp"
#include "uns2d/ops.hpp"

namespace uns2d {

void SimConfig::validate() const {
  if (nx < Grid2D::kMinCells) throw ConfigError("grid.nx", "must be >= 8");
  if (ny < Grid2D::kMinCells) throw ConfigError("grid.ny", "must be >= 8");
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ConfigError("nu", "constraint nu > 0 violated");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "constraint dt > 0 violated");
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw ConfigError("t_end", "constraint t_end >= 0 violated");
  if (snapshot_every < 0) throw ConfigError("snapshot_every", "must be >= 0");
  if (forcing.id != "zero" && forcing.id != "uniform" && forcing.id != "manufactured")
    throw ConfigError("forcing.preset", "unknown preset '" + forcing.id + "'");
  if (initial.id != "zero" && initial.id != "vortex" && initial.id != "manufactured" &&
      initial.id != "divergence-mode")
    throw ConfigError("initial.preset", "unknown preset '" + initial.id + "'");
  if (bc.id != "homogeneous" && bc.id != "lid" && bc.id != "manufactured")
    throw ConfigError("bc.preset", "unknown preset '" + bc.id + "'");
  if (bc.profile != "uniform" && bc.profile != "regularized")
    throw ConfigError("bc.profile", "unknown lid profile '" + bc.profile + "'");
}

long SimConfig::step_count() const {
  if (t_end <= 0.0) return 0;
  return static_cast<long>(std::ceil(t_end / dt - 1e-9));
}

bool StepDiagnostics::finite() const {
  for (double v : {t, energy, grad_u_sq, lap_u_sq, div_u_sq, grad_ps_sq, grad_pe_sq,
                   stokes_ratio, compat_corr})
    if (!std::isfinite(v)) return false;
  return true;
}

InhomogeneousData InhomogeneousData::from_model(const BoundaryModel& model, const Grid2D& grid,
                                                double t, double dt) {
  return {model.divergence(grid, t), model.divergence_rate(grid, t),
          model.normal_flux_rate(grid, t), model.velocity(grid, t + dt),
          model.divergence(grid, t + dt)};
}

TimeStepper::TimeStepper(const Grid2D& grid, double nu, double dt)
    : plans_(std::make_shared<const SolverPlans>(grid)), nu_(nu), dt_(dt) {
  if (!(nu > 0.0)) throw ArgumentError("TimeStepper: nu must be > 0");
  if (!(dt > 0.0)) throw ArgumentError("TimeStepper: dt must be > 0");
}

namespace {

double squared_norm(const VectorField& v) { return inner_product(v, v); }

double grad_sq(const VectorField& u) {
  return squared_norm(grad_h(u.u1)) + squared_norm(grad_h(u.u2));
}

double lap_interior_sq(const VectorField& u) {
  const double a = norm_l2_interior(lap_h(u.u1));
  const double b = norm_l2_interior(lap_h(u.u2));
  return a * a + b * b;
}

struct Explicit {
  PressureParts pressure;
  VectorField drive;  // f - (u.grad)u - grad p, the explicit right-hand side
  double grad_ps_sq, grad_pe_sq, lap_u_sq, compat;
  bool pgh_compatible;
};

Explicit explicit_terms(const SolverPlans& plans, double nu, const VectorField& u,
                        const VectorField& f, const InhomogeneousData* data) {
  const Grid2D& g = u.grid();
  VectorField a = f - advect(u);
  ScalarField p_e = plans.projector.potential(a);
  StokesPressure sp = stokes_pressure(plans, u);
  ScalarField p_gh(g);
  double compat = std::abs(sp.compat_correction);
  bool ok = true;
  if (data) {
    InhomogeneousPressure ip = inhomogeneous_pressure(plans, data->dt_h, data->h, data->dt_ng, nu);
    compat = std::max(compat, std::abs(ip.compat_correction));
    ok = ip.compatible;
    p_gh = std::move(ip.p_gh);
  }

  const VectorField gpe = grad_h(p_e);
  const VectorField gps = grad_h(sp.p_s);
  a -= gpe;
  a.axpy(-nu, gps);
  if (data) a -= grad_h(p_gh);

  return {PressureParts(std::move(p_e), std::move(sp.p_s), std::move(p_gh), nu),
          std::move(a),
          squared_norm(gps),
          squared_norm(gpe),
          sp.lap_u_sq,
          compat,
          ok};
}

void fill_state_norms(StepDiagnostics& d, const VectorField& u, const ScalarField* h) {
  d.energy = squared_norm(u);
  d.grad_u_sq = grad_sq(u);
  d.lap_u_sq = lap_interior_sq(u);
  ScalarField w = div_h(u);
  if (h) w -= *h;
  d.div_u_sq = inner_product(w, w);
}

}  // namespace

StepResult TimeStepper::evaluate(const SimState& state, const VectorField& f,
                                 const InhomogeneousData* data) const {
  Explicit ex = explicit_terms(*plans_, nu_, state.u, f, data);
  StepDiagnostics d;
  d.step = state.n;
  d.t = state.t;
  fill_state_norms(d, state.u, data ? &data->h : nullptr);
  d.grad_ps_sq = ex.grad_ps_sq;
  d.grad_pe_sq = ex.grad_pe_sq;
  d.stokes_ratio = ex.lap_u_sq > 0.0 ? ex.grad_ps_sq / ex.lap_u_sq : 0.0;
  d.compat_corr = ex.compat;
  return {state, d, std::move(ex.pressure), ex.pgh_compatible};
}

namespace {

StepResult advance(const SolverPlans& plans, double nu, double dt, const SimState& state,
                   const VectorField& f_n, const InhomogeneousData* data) {
  const Grid2D& g = state.u.grid();
  Explicit ex = explicit_terms(plans, nu, state.u, f_n, data);

  VectorField rhs = state.u;
  rhs.axpy(dt, ex.drive);
  const double alpha = nu * dt;
  BoundaryData g1(g, BoundaryKind::Dirichlet), g2(g, BoundaryKind::Dirichlet);
  if (data) {
    g1 = BoundaryData::trace(data->g_next.u1);
    g2 = BoundaryData::trace(data->g_next.u2);
  }
  SimState next{VectorField(solve_dirichlet_helmholtz(plans.dirichlet, alpha, rhs.u1, g1),
                            solve_dirichlet_helmholtz(plans.dirichlet, alpha, rhs.u2, g2)),
                state.t + dt, state.n + 1};

  StepDiagnostics d;
  d.step = next.n;
  d.t = next.t;
  fill_state_norms(d, next.u, data ? &data->h_next : nullptr);
  d.grad_ps_sq = ex.grad_ps_sq;
  d.grad_pe_sq = ex.grad_pe_sq;
  d.stokes_ratio = ex.lap_u_sq > 0.0 ? ex.grad_ps_sq / ex.lap_u_sq : 0.0;
  d.compat_corr = ex.compat;
  return {std::move(next), d, std::move(ex.pressure), ex.pgh_compatible};
}

}  // namespace

StepResult TimeStepper::step(const SimState& state, const VectorField& f_n) const {
  require_same_grid(grid(), state.u.grid(), "TimeStepper::step");
  return advance(*plans_, nu_, dt_, state, f_n, nullptr);
}

StepResult TimeStepper::step_nonhomogeneous(const SimState& state, const VectorField& f_n,
                                            const InhomogeneousData& data) const {
  require_same_grid(grid(), state.u.grid(), "TimeStepper::step_nonhomogeneous");
  return advance(*plans_, nu_, dt_, state, f_n, &data);
}

// ---------------------------------------------------------------------------

struct Simulation::Impl {
  SimConfig cfg;
  Grid2D grid;
  TimeStepper stepper;
  std::unique_ptr<BoundaryModel> model;
  ForcingSampler forcing;
  bool zero_forcing;
  bool homogeneous;
  long total_steps;
  SimState state;
  StepDiagnostics diag;
  double increment = 0.0;
  long incompatible = 0;
  std::optional<BlowUp> blow_up;

  Impl(const SimConfig& c, const VectorField* initial)
      : cfg(c),
        grid(c.nx, c.ny),
        stepper(grid, c.nu, c.dt),
        model(make_boundary_model(c.bc)),
        forcing(make_forcing(c.forcing, c.nu)),
        zero_forcing(c.forcing.id == "zero"),
        homogeneous(model->homogeneous()),
        total_steps(c.step_count()),
        state{initial ? *initial : make_initial_velocity(c.initial, grid, c.nu), 0.0, 0} {
    require_same_grid(grid, state.u.grid(), "Simulation(initial)");
    const VectorField g0 = model->velocity(grid, 0.0);
    for (int j = 0; j <= grid.ny(); ++j)
      for (int i = 0; i <= grid.nx(); ++i)
        if (grid.on_boundary(i, j)) {
          state.u.u1(i, j) = g0.u1(i, j);
          state.u.u2(i, j) = g0.u2(i, j);
        }
    diag = evaluate().diag;
  }

  VectorField forcing_at(long n) const {
    return zero_forcing ? VectorField(grid) : average_forcing(forcing, n, cfg.dt, grid);
  }

  StepResult evaluate() const {
    if (homogeneous) return stepper.evaluate(state, forcing_at(state.n));
    const InhomogeneousData d = InhomogeneousData::from_model(*model, grid, state.t, cfg.dt);
    return stepper.evaluate(state, forcing_at(state.n), &d);
  }
};

Simulation::Simulation(const SimConfig& cfg, const VectorField* initial) {
  cfg.validate();
  impl_ = std::make_unique<Impl>(cfg, initial);
}
Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

const SimConfig& Simulation::config() const noexcept { return impl_->cfg; }
const Grid2D& Simulation::grid() const noexcept { return impl_->grid; }
const SimState& Simulation::state() const noexcept { return impl_->state; }
const StepDiagnostics& Simulation::diagnostics() const noexcept { return impl_->diag; }
double Simulation::last_increment() const noexcept { return impl_->increment; }
long Simulation::incompatible_steps() const noexcept { return impl_->incompatible; }
const std::optional<BlowUp>& Simulation::blow_up() const noexcept { return impl_->blow_up; }

bool Simulation::finished() const noexcept {
  return impl_->blow_up.has_value() || impl_->state.n >= impl_->total_steps;
}

StepResult Simulation::evaluate() const { return impl_->evaluate(); }

bool Simulation::advance() {
  Impl& m = *impl_;
  if (m.blow_up) return false;
  const long n = m.state.n;
  const VectorField f_n = m.forcing_at(n);
  StepResult next =
      m.homogeneous
          ? m.stepper.step(m.state, f_n)
          : m.stepper.step_nonhomogeneous(
                m.state, f_n, InhomogeneousData::from_model(*m.model, m.grid, m.state.t, m.cfg.dt));
  if (!next.pgh_compatible) ++m.incompatible;
  // Time stamps from the step index, not accumulated sums.
  next.state.t = static_cast<double>(n + 1) * m.cfg.dt;
  next.diag.t = next.state.t;

  if (!next.diag.finite() || !next.state.u.all_finite() ||
      next.diag.grad_u_sq > kBlowUpGradThreshold) {
    m.blow_up = BlowUp{n + 1, m.diag};
    return false;
  }
  m.increment = norm_l2(next.state.u - m.state.u);
  m.state = std::move(next.state);
  m.diag = next.diag;
  return true;
}

RunResult run(const SimConfig& cfg, const RunOptions& options) {
  Simulation sim(cfg, options.initial);
  RunResult result{{sim.diagnostics()}, std::nullopt, sim.state(), 0};

  auto snapshot = [&] {
    const SimState& s = sim.state();
    if (!options.on_snapshot || cfg.snapshot_every <= 0 || s.n % cfg.snapshot_every != 0) return;
    const StepResult ev = sim.evaluate();
    options.on_snapshot(Snapshot{s.n, s.t, &s.u, &ev.pressure, cfg.nu});
  };
  snapshot();

  while (!sim.finished()) {
    if (!sim.advance()) break;
    result.series.push_back(sim.diagnostics());
    snapshot();
    if (options.stop_when && options.stop_when(sim)) break;
  }
  result.blow_up = sim.blow_up();
  result.final_state = sim.state();
  result.incompatible_steps = sim.incompatible_steps();
  return result;
}

}  // namespace uns2d
