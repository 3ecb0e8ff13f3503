#include "uns2d/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "uns2d/error.hpp"
#include "uns2d/ops.hpp"

namespace uns2d {

using std::numbers::pi;

namespace {

std::uint64_t mix_seed(std::uint64_t seed, long index) {
  return seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(index + 1));
}

// Polynomial bump supported on (1/4, 3/4).
double bump(double s) {
  if (s <= 0.25 || s >= 0.75) return 0.0;
  const double q = (s - 0.25) * (0.75 - s) / 0.0625;
  return q * q * q * q;
}

double bump_deriv(double s) {
  if (s <= 0.25 || s >= 0.75) return 0.0;
  const double q = (s - 0.25) * (0.75 - s) / 0.0625;
  return 4.0 * q * q * q * (1.0 - 2.0 * s) / 0.0625;
}

// 1D shape function k of a family and its derivative. Stream-function shapes
// vanish together with their derivative at s = 0 and s = 1.
struct Shape {
  double value, deriv;
};

Shape stream_shape(SampleFamily f, int k, double s) {
  switch (f) {
    case SampleFamily::RandomSineSeries: {
      const double a = std::sin(pi * s), b = std::sin((k + 1) * pi * s);
      return {a * b, pi * std::cos(pi * s) * b + a * (k + 1) * pi * std::cos((k + 1) * pi * s)};
    }
    case SampleFamily::StreamFunction: {
      const double sn = std::sin(pi * s), cs = std::cos(pi * s);
      const double c = std::cos(k * pi * s);
      return {sn * sn * c, 2.0 * pi * sn * cs * c - sn * sn * k * pi * std::sin(k * pi * s)};
    }
    case SampleFamily::InteriorBump: {
      const double c = std::cos(k * pi * s);
      return {bump(s) * c, bump_deriv(s) * c - bump(s) * k * pi * std::sin(k * pi * s)};
    }
  }
  return {0.0, 0.0};
}

// Shapes used directly as velocity components (no stream function).
double velocity_shape(SampleFamily f, int k, double s) {
  if (f == SampleFamily::InteriorBump) return bump(s) * std::cos(k * pi * s);
  return std::sin((k + 1) * pi * s);
}

}  // namespace

const char* to_string(SampleFamily f) noexcept {
  switch (f) {
    case SampleFamily::RandomSineSeries: return "random-sine-series";
    case SampleFamily::StreamFunction: return "stream-function";
    case SampleFamily::InteriorBump: return "interior-bump";
  }
  return "?";
}

SampleFamily sample_family_from_string(const std::string& name) {
  if (name == "random-sine-series") return SampleFamily::RandomSineSeries;
  if (name == "stream-function") return SampleFamily::StreamFunction;
  if (name == "interior-bump") return SampleFamily::InteriorBump;
  throw ArgumentError("unknown sample family '" + name + "'");
}

void SampleSpec::validate() const {
  if (modes < 1) throw ArgumentError("SampleSpec: modes must be >= 1");
  if (!std::isfinite(decay) || decay < 0.0) throw ArgumentError("SampleSpec: decay must be >= 0");
  if (family == SampleFamily::StreamFunction && !divergence_free)
    throw ArgumentError("SampleSpec: the stream-function family is always divergence-free");
}

VectorField make_sample(const SampleSpec& spec, long index, const Grid2D& grid) {
  spec.validate();
  const int m = spec.modes;
  UniformStream rng(mix_seed(spec.seed, index));
  auto coefficients = [&] {
    std::vector<double> c(static_cast<std::size_t>(m) * m);
    for (int l = 0; l < m; ++l)
      for (int k = 0; k < m; ++k)
        c[l * m + k] = rng.next() * std::pow(1.0 + k * k + l * l, -0.5 * spec.decay);
    return c;
  };

  VectorField u(grid);
  const int nx = grid.nx(), ny = grid.ny();
  if (spec.divergence_free) {
    // u = (d psi/dy, -d psi/dx), psi = sum c_kl a_k(x) a_l(y).
    const std::vector<double> c = coefficients();
    std::vector<Shape> ax(static_cast<std::size_t>(m) * (nx + 1)), ay(static_cast<std::size_t>(m) * (ny + 1));
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i <= nx; ++i) ax[k * (nx + 1) + i] = stream_shape(spec.family, k, grid.x(i));
      for (int j = 0; j <= ny; ++j) ay[k * (ny + 1) + j] = stream_shape(spec.family, k, grid.y(j));
    }
    for (int j = 1; j < ny; ++j)
      for (int i = 1; i < nx; ++i) {
        double v1 = 0.0, v2 = 0.0;
        for (int l = 0; l < m; ++l)
          for (int k = 0; k < m; ++k) {
            const Shape& a = ax[k * (nx + 1) + i];
            const Shape& b = ay[l * (ny + 1) + j];
            v1 += c[l * m + k] * a.value * b.deriv;
            v2 -= c[l * m + k] * a.deriv * b.value;
          }
        u.u1(i, j) = v1;
        u.u2(i, j) = v2;
      }
  } else {
    const std::vector<double> c1 = coefficients();
    const std::vector<double> c2 = coefficients();
    for (int j = 1; j < ny; ++j)
      for (int i = 1; i < nx; ++i) {
        double v1 = 0.0, v2 = 0.0;
        for (int l = 0; l < m; ++l)
          for (int k = 0; k < m; ++k) {
            const double e = velocity_shape(spec.family, k, grid.x(i)) *
                             velocity_shape(spec.family, l, grid.y(j));
            v1 += c1[l * m + k] * e;
            v2 += c2[l * m + k] * e;
          }
        u.u1(i, j) = v1;
        u.u2(i, j) = v2;
      }
  }
  return u;
}

// ---------------------------------------------------------------------------

std::array<double, 2> fit_stokes_constants(const std::vector<StokesSample>& samples) {
  std::vector<double> r, q;
  for (const auto& s : samples) {
    if (!(s.lap_u_sq > 0.0)) continue;
    r.push_back(s.grad_ps_sq / s.lap_u_sq);
    q.push_back(s.grad_u_sq / s.lap_u_sq);
  }
  if (r.empty()) return {0.0, 0.0};

  auto sse = [&](double beta, double c) {
    double e = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double d = r[i] - beta - c * q[i];
      e += d * d;
    }
    return e;
  };
  const double n = static_cast<double>(r.size());
  double sq = 0.0, sqq = 0.0, sr = 0.0, sqr = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    sq += q[i];
    sqq += q[i] * q[i];
    sr += r[i];
    sqr += q[i] * r[i];
  }

  std::vector<std::array<double, 2>> candidates;
  const double det = n * sqq - sq * sq;
  if (det > 0.0) {
    const double beta = (sqq * sr - sq * sqr) / det;
    const double c = (n * sqr - sq * sr) / det;
    if (beta >= 0.0 && beta <= 1.0 && c >= 0.0) return {beta, c};
  }
  // The optimum lies on the boundary of the feasible box.
  for (double beta : {0.0, 1.0}) {
    const double c = sqq > 0.0 ? std::max(0.0, (sqr - beta * sq) / sqq) : 0.0;
    candidates.push_back({beta, c});
  }
  candidates.push_back({std::clamp(sr / n, 0.0, 1.0), 0.0});
  auto best = candidates.front();
  for (const auto& cand : candidates)
    if (sse(cand[0], cand[1]) < sse(best[0], best[1])) best = cand;
  return best;
}

FitResult verify_stokes_estimate(const SampleSpec& spec, long sample_count, const Grid2D& grid,
                                 StokesBackend backend) {
  spec.validate();
  if (sample_count < 1) throw ArgumentError("verify_stokes_estimate: sample count must be >= 1");
  std::optional<SolverPlans> plans;
  if (backend == StokesBackend::Fast) plans.emplace(grid);

  FitResult out;
  out.nx = grid.nx();
  out.ny = grid.ny();
  for (long k = 0; k < sample_count; ++k) {
    const VectorField u = make_sample(spec, k, grid);
    StokesSample s;
    s.index = k;
    if (plans) {
      const StokesPressure sp = stokes_pressure(*plans, u);
      s.grad_ps_sq = sp.grad_ps_sq;
      s.lap_u_sq = sp.lap_u_sq;
      s.grad_u_sq = sp.grad_u_sq;
    } else {
      const ScalarField p = dense_neumann_solve(ScalarField(grid), stokes_neumann_data(u)).p;
      const VectorField gp = grad_h(p);
      s.grad_ps_sq = inner_product(gp, gp);
      const double l1 = norm_l2_interior(lap_h(u.u1)), l2 = norm_l2_interior(lap_h(u.u2));
      s.lap_u_sq = l1 * l1 + l2 * l2;
      const VectorField g1 = grad_h(u.u1), g2 = grad_h(u.u2);
      s.grad_u_sq = inner_product(g1, g1) + inner_product(g2, g2);
    }
    if (!(s.lap_u_sq > 0.0)) {
      ++out.skipped;
      continue;
    }
    s.ratio = s.grad_ps_sq / s.lap_u_sq;
    if (spec.divergence_free) out.max_ratio = std::max(out.max_ratio, s.ratio);
    out.samples.push_back(s);
  }
  out.sample_count = static_cast<long>(out.samples.size());
  const auto fit = fit_stokes_constants(out.samples);
  out.beta_hat = fit[0];
  out.c_hat = fit[1];
  return out;
}

// ---------------------------------------------------------------------------

std::vector<StabilityRow> stability_sweep(const SimConfig& base, const std::vector<double>& dts) {
  std::vector<StabilityRow> rows;
  for (double dt : dts) {
    SimConfig cfg = base;
    cfg.dt = dt;
    Simulation sim(cfg);
    StabilityRow row;
    row.dt = dt;
    row.sup_grad_sq = sim.diagnostics().grad_u_sq;
    while (!sim.finished()) {
      if (!sim.advance()) break;
      row.sup_grad_sq = std::max(row.sup_grad_sq, sim.diagnostics().grad_u_sq);
      row.sum_lap_dt += sim.diagnostics().lap_u_sq * dt;
    }
    row.steps = sim.state().n;
    if (sim.blow_up()) {
      row.blew_up = true;
      row.blow_up_step = sim.blow_up()->step;
    }
    row.final_energy = sim.diagnostics().energy;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------

std::optional<double> fit_log_slope(const std::vector<double>& x, const std::vector<double>& y,
                                    double x0, double x1) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long m = 0;
  const double eps = 1e-12 * std::max(1.0, std::abs(x1));
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] < x0 - eps || x[i] > x1 + eps || !(y[i] > 0.0)) continue;
    const double ly = std::log(y[i]);
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
    ++m;
  }
  if (m < 2) return std::nullopt;
  const double den = m * sxx - sx * sx;
  if (!(den > 0.0)) return std::nullopt;
  return (m * sxy - sx * sy) / den;
}

DecayResult divergence_decay(const DecaySpec& spec) {
  if (!(spec.fit_start >= 0.0 && spec.fit_end > spec.fit_start))
    throw ArgumentError("divergence_decay: need 0 <= fit_start < fit_end");
  SimConfig cfg;
  cfg.nx = cfg.ny = spec.n;
  cfg.nu = spec.nu;
  cfg.dt = spec.dt;
  cfg.t_end = spec.fit_end;
  cfg.initial = {"divergence-mode", spec.amplitude};
  Simulation sim(cfg);

  DecayResult out;
  out.expected = spec.nu * pi * pi;
  {
    ScalarField taper = div_h(sim.state().u);
    taper -= ScalarField::sample(sim.grid(),
                                 [&](double x, double) { return spec.amplitude * std::cos(pi * x); });
    out.taper_div_norm = norm_l2(taper);
  }
  auto record = [&] {
    const double d = std::sqrt(sim.diagnostics().div_u_sq);
    out.t.push_back(sim.state().t);
    out.div_norm.push_back(d);
    out.max_div_norm = std::max(out.max_div_norm, d);
  };
  record();
  while (!sim.finished()) {
    if (!sim.advance()) throw BlowUpError("divergence_decay: run blew up", sim.blow_up()->step);
    record();
  }
  if (out.max_div_norm > 0.0) {
    if (auto slope = fit_log_slope(out.t, out.div_norm, spec.fit_start, spec.fit_end)) {
      out.rate_hat = -*slope;
      out.fitted = true;
      out.rel_error = out.rate_hat / out.expected - 1.0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

SimConfig manufactured_config(int n, double dt, double t_end, double nu) {
  SimConfig cfg;
  cfg.nx = cfg.ny = n;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.nu = nu;
  cfg.initial = {"manufactured", 1.0};
  cfg.forcing = {"manufactured", {0.0, 0.0}};
  return cfg;
}

SimState run_to_end(const SimConfig& cfg) {
  Simulation sim(cfg);
  while (!sim.finished())
    if (!sim.advance()) throw BlowUpError("convergence_study: run blew up", sim.blow_up()->step);
  return sim.state();
}

// Least-squares slope of log(e) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& e) {
  std::vector<double> lx;
  for (double v : x) lx.push_back(std::log(v));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ly = std::log(e[i]);
    sx += lx[i];
    sy += ly;
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

ConvergenceResult convergence_study(const ConvergenceSpec& spec) {
  if (spec.grids.size() < 2) throw ArgumentError("convergence_study: need at least two grids");
  if (spec.temporal_dts.size() < 3)
    throw ArgumentError("convergence_study: need at least three time steps");
  ConvergenceResult out;
  const analytic::Manufactured exact{spec.nu};

  std::vector<double> hs, errs;
  for (int n : spec.grids) {
    const SimState s = run_to_end(manufactured_config(n, spec.spatial_dt, spec.t_final, spec.nu));
    const Grid2D g(n, n);
    const VectorField ex =
        VectorField::sample(g, [&](double x, double y) { return exact.velocity(x, y, s.t); });
    const double e = norm_l2(s.u - ex);
    out.rows.push_back({"space", n, spec.spatial_dt, s.t, e});
    out.t_space = s.t;
    hs.push_back(1.0 / n);
    errs.push_back(e);
  }
  out.spatial_order = loglog_slope(hs, errs);

  // A common end time that every step size reaches exactly.
  std::vector<double> dts = spec.temporal_dts;
  std::sort(dts.rbegin(), dts.rend());
  const double t_end = std::ceil(spec.t_final / dts.front() - 1e-9) * dts.front();
  for (double dt : dts) {
    const double k = t_end / dt;
    if (std::abs(k - std::round(k)) > 1e-6)
      throw ArgumentError("convergence_study: time steps must divide the common end time");
  }
  out.t_time = t_end;
  std::vector<VectorField> finals;
  for (double dt : dts)
    finals.push_back(run_to_end(manufactured_config(spec.temporal_n, dt, t_end, spec.nu)).u);
  std::vector<double> used_dts, diffs;
  for (std::size_t k = 0; k + 1 < dts.size(); ++k) {
    const double d = norm_l2(finals[k] - finals[k + 1]);
    out.rows.push_back({"time", spec.temporal_n, dts[k], t_end, d});
    used_dts.push_back(dts[k]);
    diffs.push_back(d);
  }
  out.temporal_order = loglog_slope(used_dts, diffs);
  return out;
}

// ---------------------------------------------------------------------------

CavityResult lid_driven_cavity(const CavitySpec& spec) {
  if (spec.n % 2 != 0) throw ArgumentError("lid_driven_cavity: n must be even");
  SimConfig cfg;
  cfg.nx = cfg.ny = spec.n;
  cfg.nu = spec.nu;
  cfg.dt = spec.dt;
  cfg.t_end = spec.t_max;
  cfg.bc.id = "lid";
  cfg.bc.speed = spec.speed;
  cfg.bc.profile = spec.profile;
  Simulation sim(cfg);

  CavityResult out(sim.grid());
  out.series.push_back(sim.diagnostics());
  while (!sim.finished()) {
    if (!sim.advance()) {
      out.blow_up_step = sim.blow_up()->step;
      break;
    }
    out.series.push_back(sim.diagnostics());
    out.residual = sim.last_increment() / spec.dt;
    if (out.residual <= spec.steady_tol) {
      out.steady = true;
      break;
    }
  }
  const Grid2D& g = sim.grid();
  out.state = sim.state();
  out.steps = out.state.n;
  out.t = out.state.t;
  out.energy = sim.diagnostics().energy;
  const ScalarField dv = div_h(out.state.u);
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) {
      const double a = std::abs(dv(i, j));
      out.max_div = std::max(out.max_div, a);
      if (!g.on_boundary(i, j)) out.max_div_interior = std::max(out.max_div_interior, a);
    }
  out.max_pgh = sim.evaluate().pressure.p_gh.max_abs();
  const int mid = spec.n / 2;
  for (int j = 0; j <= g.ny(); ++j) {
    out.y.push_back(g.y(j));
    out.u1_center.push_back(out.state.u.u1(mid, j));
  }
  for (int i = 0; i <= g.nx(); ++i) {
    out.x.push_back(g.x(i));
    out.u2_center.push_back(out.state.u.u2(i, mid));
  }
  return out;
}

double centerline_change(const CavityResult& coarse, const CavityResult& fine) {
  const std::size_t nc = coarse.u1_center.size();
  if (fine.u1_center.size() != 2 * (nc - 1) + 1)
    throw ArgumentError("centerline_change: fine run must use the doubled grid");
  double diff = 0.0, ref = 0.0;
  for (std::size_t k = 0; k < nc; ++k) {
    const double d1 = coarse.u1_center[k] - fine.u1_center[2 * k];
    const double d2 = coarse.u2_center[k] - fine.u2_center[2 * k];
    diff += d1 * d1 + d2 * d2;
    ref += fine.u1_center[2 * k] * fine.u1_center[2 * k] +
           fine.u2_center[2 * k] * fine.u2_center[2 * k];
  }
  return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

// ---------------------------------------------------------------------------

double n2d_ratio(const ScalarField& p, double s, long* strip_nodes) {
  const Grid2D& g = p.grid();
  const int nx = g.nx(), ny = g.ny();
  const double h = std::max(g.hx(), g.hy());
  if (!(s > 2.0 * h && s < 0.25)) throw ArgumentError("n2d_ratio: need 2h < s < 0.25");
  const VectorField gp = grad_h(p);
  double num = 0.0, den = 0.0;
  long count = 0;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const bool near_x = i < 2 || i > nx - 2;
      const bool near_y = j < 2 || j > ny - 2;
      if (near_x && near_y) continue;  // corner wedge
      const double d[4] = {static_cast<double>(i) / nx, static_cast<double>(nx - i) / nx,
                           static_cast<double>(j) / ny, static_cast<double>(ny - j) / ny};
      int side = 0;
      for (int q = 1; q < 4; ++q)
        if (d[q] < d[side]) side = q;
      if (d[side] > s + 1e-12) continue;
      const double w = g.weight(i, j);
      const double gx = gp.u1(i, j), gy = gp.u2(i, j);
      const double gn = side < 2 ? gx : gy;
      num += w * (gx * gx + gy * gy);
      den += w * gn * gn;
      ++count;
    }
  if (strip_nodes) *strip_nodes = count;
  if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
  return num / den;
}

BoundaryData random_neumann_data(const Grid2D& grid, int modes, std::uint64_t seed, long index) {
  if (modes < 1) throw ArgumentError("random_neumann_data: modes must be >= 1");
  UniformStream rng(mix_seed(seed, index));
  BoundaryData g(grid, BoundaryKind::Neumann);
  for (Side s : kSides) {
    std::vector<double> c(modes);
    for (int k = 0; k < modes; ++k) c[k] = rng.next() / (1.0 + k);
    auto vals = g.side(s);
    const bool vertical = (s == Side::Left || s == Side::Right);
    for (int k = 0; k < static_cast<int>(vals.size()); ++k) {
      const double t = vertical ? grid.y(k) : grid.x(k);
      double v = 0.0;
      for (int m = 0; m < modes; ++m) v += c[m] * std::cos(m * pi * t);
      vals[k] = v;
    }
  }
  g.add_constant(-g.integral() / g.perimeter());
  return g;
}

ProbeResult probe_neumann_to_dirichlet(const ProbeSpec& spec) {
  if (spec.samples < 1) throw ArgumentError("probe_neumann_to_dirichlet: samples must be >= 1");
  const Grid2D grid(spec.n, spec.n);
  const NeumannPlan plan(grid);
  ProbeResult out;
  double sum = 0.0;
  for (long k = 0; k < spec.samples; ++k) {
    const BoundaryData g = random_neumann_data(grid, spec.modes, spec.seed, k);
    const ScalarField p = plan.solve(ScalarField(grid), g).p;
    const double r = n2d_ratio(p, spec.s, &out.strip_nodes);
    out.ratios.push_back(r);
    out.max_ratio = std::max(out.max_ratio, r);
    sum += r;
  }
  out.mean_ratio = sum / static_cast<double>(spec.samples);
  return out;
}

}  // namespace uns2d
