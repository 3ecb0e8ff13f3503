#include "uns2d/commands.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "json.hpp"
#include "uns2d/error.hpp"
#include "uns2d/experiments.hpp"

namespace uns2d {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string row(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& c : cells) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out + '\n';
}

std::string f(double v) { return format_double(v); }

int square_grid(const SimConfig& c, const char* command) {
  if (c.nx != c.ny)
    throw ConfigError("grid.ny", std::string(command) + " needs a square grid (nx == ny)");
  return c.nx;
}

struct Context {
  const ConfigFile& cfg;
  const CommandOptions& opt;
  OutputDir& dir;
  ordered_json summary;
  Outcome outcome;
};

void cmd_run(Context& cx) {
  const SimConfig& c = cx.cfg.sim;
  RunOptions ro;
  ro.on_snapshot = [&](const Snapshot& s) { cx.dir.write_snapshot(s); };
  const RunResult r = run(c, ro);
  cx.dir.write_diagnostics("diagnostics.csv", r.series);
  cx.summary["steps"] = r.final_state.n;
  cx.summary["t"] = r.final_state.t;
  cx.summary["final_energy"] = r.series.back().energy;
  cx.summary["incompatible_steps"] = r.incompatible_steps;
  if (r.blow_up) {
    cx.outcome.kind = Outcome::Kind::BlewUp;
    cx.outcome.step = r.blow_up->step;
  }
}

void cmd_sweep(Context& cx) {
  const auto& dts = cx.opt.dts ? cx.opt.dts : cx.cfg.experiment.dts;
  if (!dts || dts->empty()) throw ConfigError("dts", "sweep-stability needs --dts or experiment.dts");
  for (double dt : *dts)
    if (!(dt > 0.0 && std::isfinite(dt))) throw ConfigError("dts", "time steps must be > 0");
  const auto rows = stability_sweep(cx.cfg.sim, *dts);
  std::string csv = "dt,steps,blew_up,blow_up_step,sup_grad_sq,sum_lap_dt,final_energy\n";
  long blow_ups = 0;
  for (const auto& r : rows) {
    csv += row({f(r.dt), std::to_string(r.steps), r.blew_up ? "1" : "0",
                std::to_string(r.blow_up_step), f(r.sup_grad_sq), f(r.sum_lap_dt),
                f(r.final_energy)});
    if (r.blew_up) {
      ++blow_ups;
      if (cx.outcome.kind != Outcome::Kind::BlewUp) {
        cx.outcome.kind = Outcome::Kind::BlewUp;
        cx.outcome.step = r.blow_up_step;
      }
    }
  }
  cx.dir.write("stability.csv", csv);
  double lo = rows.front().sup_grad_sq, hi = lo;
  for (const auto& r : rows) {
    lo = std::min(lo, r.sup_grad_sq);
    hi = std::max(hi, r.sup_grad_sq);
  }
  cx.summary["dts"] = *dts;
  cx.summary["blow_ups"] = blow_ups;
  cx.summary["sup_grad_sq_min"] = lo;
  cx.summary["sup_grad_sq_max"] = hi;
  cx.summary["sup_grad_sq_spread"] = hi > 0.0 ? (hi - lo) / hi : 0.0;
}

void cmd_verify_stokes(Context& cx) {
  const ExperimentSettings& x = cx.cfg.experiment;
  SampleSpec spec;
  if (x.family) spec.family = sample_family_from_string(*x.family);
  if (x.modes) spec.modes = *x.modes;
  if (x.decay) spec.decay = *x.decay;
  if (x.divergence_free) spec.divergence_free = *x.divergence_free;
  spec.seed = cx.opt.seed ? *cx.opt.seed : cx.cfg.sim.seed;
  try {
    spec.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError("experiment", e.what());
  }
  const long count = cx.opt.samples ? *cx.opt.samples : x.samples.value_or(200);
  if (count < 1) throw ConfigError("samples", "must be >= 1");
  const Grid2D grid(cx.cfg.sim.nx, cx.cfg.sim.ny);
  const FitResult fit = verify_stokes_estimate(spec, count, grid);
  std::string csv = "index,grad_ps_sq,lap_u_sq,grad_u_sq,ratio\n";
  for (const auto& s : fit.samples)
    csv += row({std::to_string(s.index), f(s.grad_ps_sq), f(s.lap_u_sq), f(s.grad_u_sq),
                f(s.ratio)});
  cx.dir.write("stokes_samples.csv", csv);
  const double h = std::max(grid.hx(), grid.hy());
  cx.summary["family"] = to_string(spec.family);
  cx.summary["modes"] = spec.modes;
  cx.summary["decay"] = spec.decay;
  cx.summary["divergence_free"] = spec.divergence_free;
  cx.summary["seed"] = spec.seed;
  cx.summary["nx"] = fit.nx;
  cx.summary["ny"] = fit.ny;
  cx.summary["sample_count"] = fit.sample_count;
  cx.summary["skipped"] = fit.skipped;
  cx.summary["beta_hat"] = fit.beta_hat;
  cx.summary["c_hat"] = fit.c_hat;
  cx.summary["max_ratio"] = fit.max_ratio;
  cx.summary["ratio_bound"] = 1.0 + 10.0 * h * h;
}

void cmd_decay(Context& cx) {
  const ExperimentSettings& x = cx.cfg.experiment;
  DecaySpec spec;
  spec.n = square_grid(cx.cfg.sim, "decay");
  spec.nu = cx.cfg.sim.nu;
  spec.dt = cx.cfg.sim.dt;
  if (x.amplitude) spec.amplitude = *x.amplitude;
  if (x.fit_window) {
    spec.fit_start = (*x.fit_window)[0];
    spec.fit_end = (*x.fit_window)[1];
  }
  const DecayResult r = divergence_decay(spec);
  std::string csv = "t,div_norm\n";
  for (std::size_t k = 0; k < r.t.size(); ++k) csv += row({f(r.t[k]), f(r.div_norm[k])});
  cx.dir.write("decay.csv", csv);
  cx.summary["n"] = spec.n;
  cx.summary["nu"] = spec.nu;
  cx.summary["dt"] = spec.dt;
  cx.summary["amplitude"] = spec.amplitude;
  cx.summary["fit_window"] = {spec.fit_start, spec.fit_end};
  cx.summary["fitted"] = r.fitted;
  cx.summary["rate_hat"] = r.rate_hat;
  cx.summary["expected"] = r.expected;
  cx.summary["rel_error"] = r.rel_error;
  cx.summary["max_div_norm"] = r.max_div_norm;
  cx.summary["taper_div_norm"] = r.taper_div_norm;
}

void cmd_converge(Context& cx) {
  const ExperimentSettings& x = cx.cfg.experiment;
  ConvergenceSpec spec;
  spec.nu = cx.cfg.sim.nu;
  if (x.grids) spec.grids = *x.grids;
  if (x.spatial_dt) spec.spatial_dt = *x.spatial_dt;
  if (x.temporal_n) spec.temporal_n = *x.temporal_n;
  if (x.temporal_dts) spec.temporal_dts = *x.temporal_dts;
  if (x.t_final) spec.t_final = *x.t_final;
  if (spec.grids.size() < 2) throw ConfigError("experiment.grids", "need at least two grids");
  if (spec.temporal_dts.size() < 3)
    throw ConfigError("experiment.temporal_dts", "need at least three time steps");
  const ConvergenceResult r = convergence_study(spec);
  std::string csv = "kind,n,dt,t,error\n";
  for (const auto& c : r.rows) csv += row({c.kind, std::to_string(c.n), f(c.dt), f(c.t), f(c.error)});
  cx.dir.write("convergence.csv", csv);
  cx.summary["nu"] = spec.nu;
  cx.summary["grids"] = spec.grids;
  cx.summary["spatial_dt"] = spec.spatial_dt;
  cx.summary["temporal_n"] = spec.temporal_n;
  cx.summary["temporal_dts"] = spec.temporal_dts;
  cx.summary["t_space"] = r.t_space;
  cx.summary["t_time"] = r.t_time;
  cx.summary["spatial_order"] = r.spatial_order;
  cx.summary["temporal_order"] = r.temporal_order;
}

void cmd_cavity(Context& cx) {
  const SimConfig& c = cx.cfg.sim;
  if (c.bc.id != "lid") throw ConfigError("bc.preset", "cavity needs the \"lid\" preset");
  CavitySpec spec;
  spec.n = square_grid(c, "cavity");
  if (spec.n % 2 != 0) throw ConfigError("grid.nx", "cavity needs an even grid size");
  spec.speed = c.bc.speed;
  spec.nu = c.nu;
  spec.dt = c.dt;
  spec.t_max = cx.cfg.experiment.t_max.value_or(c.t_end);
  spec.profile = c.bc.profile;
  if (cx.cfg.experiment.steady_tol) spec.steady_tol = *cx.cfg.experiment.steady_tol;
  const CavityResult r = lid_driven_cavity(spec);
  std::string csv = "s,u1_at_x_half,u2_at_y_half\n";
  for (std::size_t k = 0; k < r.y.size(); ++k)
    csv += row({f(r.y[k]), f(r.u1_center[k]), f(r.u2_center[k])});
  cx.dir.write("cavity_centerlines.csv", csv);
  cx.dir.write_diagnostics("diagnostics.csv", r.series);
  {
    SimConfig fc = c;
    fc.t_end = 0.0;
    Simulation final_sim(fc, &r.state.u);
    // The lid data does not depend on t, so a fresh run started from the final
    // state gives its pressure.
    const StepResult ev = final_sim.evaluate();
    cx.dir.write_snapshot({r.steps, r.t, &r.state.u, &ev.pressure, c.nu});
  }
  cx.summary["n"] = spec.n;
  cx.summary["speed"] = spec.speed;
  cx.summary["nu"] = spec.nu;
  cx.summary["dt"] = spec.dt;
  cx.summary["profile"] = spec.profile;
  cx.summary["steady_tol"] = spec.steady_tol;
  cx.summary["t_max"] = spec.t_max;
  cx.summary["steady"] = r.steady;
  cx.summary["steps"] = r.steps;
  cx.summary["t"] = r.t;
  cx.summary["residual"] = r.residual;
  cx.summary["energy"] = r.energy;
  cx.summary["max_div"] = r.max_div;
  cx.summary["max_div_interior"] = r.max_div_interior;
  cx.summary["max_pgh"] = r.max_pgh;
  if (r.blow_up_step) {
    cx.outcome.kind = Outcome::Kind::BlewUp;
    cx.outcome.step = *r.blow_up_step;
  }
}

void cmd_probe(Context& cx) {
  ProbeSpec spec;
  spec.n = square_grid(cx.cfg.sim, "probe-n2d");
  const auto s = cx.opt.s ? cx.opt.s : cx.cfg.experiment.s;
  if (s) spec.s = *s;
  const double h = 1.0 / spec.n;
  if (!(spec.s > 2.0 * h && spec.s < 0.25))
    throw ConfigError("s", "strip width must satisfy 2h < s < 0.25");
  spec.samples = cx.opt.samples ? *cx.opt.samples : cx.cfg.experiment.samples.value_or(50);
  if (spec.samples < 1) throw ConfigError("samples", "must be >= 1");
  if (cx.cfg.experiment.modes) spec.modes = *cx.cfg.experiment.modes;
  spec.seed = cx.opt.seed ? *cx.opt.seed : cx.cfg.sim.seed;
  const ProbeResult r = probe_neumann_to_dirichlet(spec);
  std::string csv = "index,ratio\n";
  for (std::size_t k = 0; k < r.ratios.size(); ++k) csv += row({std::to_string(k), f(r.ratios[k])});
  cx.dir.write("n2d.csv", csv);
  cx.summary["n"] = spec.n;
  cx.summary["s"] = spec.s;
  cx.summary["samples"] = spec.samples;
  cx.summary["modes"] = spec.modes;
  cx.summary["seed"] = spec.seed;
  cx.summary["strip_nodes"] = r.strip_nodes;
  cx.summary["max_ratio"] = r.max_ratio;
  cx.summary["mean_ratio"] = r.mean_ratio;
}

const std::map<std::string, void (*)(Context&)>& table() {
  static const std::map<std::string, void (*)(Context&)> t{
      {"run", cmd_run},         {"sweep-stability", cmd_sweep}, {"verify-stokes", cmd_verify_stokes},
      {"decay", cmd_decay},     {"converge", cmd_converge},     {"cavity", cmd_cavity},
      {"probe-n2d", cmd_probe},
  };
  return t;
}

std::string describe(const std::string& name, const CommandOptions& o) {
  std::string s = name;
  if (o.dts) {
    s += " --dts ";
    for (std::size_t k = 0; k < o.dts->size(); ++k) s += (k ? "," : "") + f((*o.dts)[k]);
  }
  if (o.samples) s += " --samples " + std::to_string(*o.samples);
  if (o.seed) s += " --seed " + std::to_string(*o.seed);
  if (o.s) s += " --s " + f(*o.s);
  return s;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"run",     "sweep-stability", "verify-stokes", "decay",
                                              "converge", "cavity",         "probe-n2d"};
  return names;
}

CommandResult execute_command(const std::string& name, const ConfigFile& cfg,
                              const CommandOptions& options) {
  const auto it = table().find(name);
  if (it == table().end()) throw ArgumentError("unknown command '" + name + "'");

  ManifestInfo info;
  info.command = describe(name, options);
  info.config_echo = config_echo(cfg);
  info.started_utc = utc_now_iso8601();
  const auto t0 = std::chrono::steady_clock::now();

  OutputDir dir(options.out_dir);
  Context cx{cfg, options, dir, ordered_json::object(), {}};
  cx.summary["command"] = name;
  cx.summary["version"] = version_string();
  try {
    it->second(cx);
  } catch (const BlowUpError& e) {
    cx.outcome.kind = Outcome::Kind::BlewUp;
    cx.outcome.step = e.step();
    cx.outcome.message = e.what();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    info.outcome = {Outcome::Kind::Error, 0, e.what()};
    info.finished_utc = utc_now_iso8601();
    info.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(dir, info);
    throw;
  }
  switch (cx.outcome.kind) {
    case Outcome::Kind::Completed: cx.summary["outcome"] = "completed"; break;
    case Outcome::Kind::BlewUp:
      cx.summary["outcome"] = "blew-up";
      cx.summary["blow_up_step"] = cx.outcome.step;
      break;
    case Outcome::Kind::Error: cx.summary["outcome"] = "error"; break;
  }
  const std::string summary = cx.summary.dump(2) + "\n";
  dir.write("summary.json", summary);

  info.outcome = cx.outcome;
  info.finished_utc = utc_now_iso8601();
  info.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(dir, info);
  return {cx.outcome, summary};
}

}  // namespace uns2d
