#include "doctest.h"
#include "support.hpp"
#include "uns2d/error.hpp"
#include "uns2d/pressure.hpp"
#include "uns2d/presets.hpp"
#include "uns2d/timestepper.hpp"

#include <limits>

using namespace testing;

namespace {

VectorField vortex_field(const Grid2D& g, double a = 1.0) {
  return VectorField::sample(g, [a](double x, double y) {
    const Vec2 v = analytic::vortex(x, y);
    return Vec2{a * v[0], a * v[1]};
  });
}

// One homogeneous step assembled from the dense oracles only.
VectorField dense_step(const VectorField& u, const VectorField& f, double nu, double dt) {
  const Grid2D& g = u.grid();
  VectorField a = f;
  a -= advect(u);
  const ScalarField pe = dense_projection_potential(a);
  const ScalarField ps = dense_neumann_solve(ScalarField(g), stokes_neumann_data(u)).p;
  VectorField rhs = u;
  rhs.axpy(dt, a);
  rhs.axpy(-dt, grad_h(pe + nu * ps));
  const BoundaryData zero(g, BoundaryKind::Dirichlet);
  return VectorField(dense_dirichlet_solve(1.0, nu * dt, rhs.u1, zero),
                     dense_dirichlet_solve(1.0, nu * dt, rhs.u2, zero));
}

bool same_bits(const StepDiagnostics& a, const StepDiagnostics& b) {
  return a.step == b.step && a.t == b.t && a.energy == b.energy && a.grad_u_sq == b.grad_u_sq &&
         a.lap_u_sq == b.lap_u_sq && a.div_u_sq == b.div_u_sq && a.grad_ps_sq == b.grad_ps_sq &&
         a.grad_pe_sq == b.grad_pe_sq && a.stokes_ratio == b.stokes_ratio && a.compat_corr == b.compat_corr;
}

double boundary_mismatch(const VectorField& u, const VectorField& g) {
  const Grid2D& gr = u.grid();
  double m = 0.0;
  for (int j = 0; j <= gr.ny(); ++j)
    for (int i = 0; i <= gr.nx(); ++i)
      if (gr.on_boundary(i, j))
        m = std::max({m, std::abs(u.u1(i, j) - g.u1(i, j)), std::abs(u.u2(i, j) - g.u2(i, j))});
  return m;
}

}  // namespace

TEST_SUITE("timestepper") {

TEST_CASE("forcing average of time-constant and linear forcing") {
  const Grid2D g(8, 8);
  const ForcingSampler c{[](double x, double y, double) { return Vec2{x + y, -2.0}; }};
  const VectorField fc = average_forcing(c, 7, 0.3, g);
  CHECK(max_diff(fc.u1, ScalarField::sample(g, [](double x, double y) { return x + y; })) <= 1e-14);
  CHECK(max_diff(fc.u2, ScalarField(g, -2.0)) <= 1e-14);

  const ForcingSampler lin{[](double, double, double t) { return Vec2{t, 0.0}; }};
  for (long n : {0L, 3L, 10L}) {
    const VectorField f = average_forcing(lin, n, 0.25, g);
    CHECK(f.u1(3, 4) == doctest::Approx((n + 0.5) * 0.25).epsilon(1e-14));
    CHECK(f.u2.max_abs() == 0.0);
  }
}

TEST_CASE("forcing average of sin t") {
  const Grid2D g(8, 8);
  const ForcingSampler s{[](double, double, double t) { return Vec2{std::sin(t), 0.0}; }};
  const VectorField f = average_forcing(s, 0, 0.1, g);
  CHECK(std::abs(f.u1(2, 2) - (1 - std::cos(0.1)) / 0.1) <= 1e-10);
  CHECK(std::abs(f.u1(2, 2) - 0.0499583472) <= 1e-9);
}

TEST_CASE("config validation names the key") {
  SimConfig c;
  c.nu = 0.0;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "nu");
  }
  c = SimConfig{};
  c.dt = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SimConfig{};
  c.bc.id = "slip";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SimConfig{};
  c.t_end = 0.0;
  CHECK_NOTHROW(c.validate());
  CHECK(c.step_count() == 0);
}

TEST_CASE("zero data stays zero") {
  SimConfig c;
  c.nx = c.ny = 16;
  c.dt = 1e-2;
  c.t_end = 1.0;
  const RunResult r = run(c);
  CHECK(r.series.size() == 101u);
  for (const auto& d : r.series) {
    CHECK(d.energy == 0.0);
    CHECK(d.grad_u_sq == 0.0);
    CHECK(d.lap_u_sq == 0.0);
    CHECK(d.div_u_sq == 0.0);
    CHECK(d.grad_ps_sq == 0.0);
    CHECK(d.stokes_ratio == 0.0);
  }
  CHECK(r.final_state.u.u1.max_abs() == 0.0);
  CHECK(r.series.back().t == doctest::Approx(1.0));
}

TEST_CASE("t_end zero gives only the initial record") {
  SimConfig c;
  c.nx = c.ny = 16;
  c.t_end = 0.0;
  c.initial = {"vortex", 1.0};
  const RunResult r = run(c);
  CHECK(r.series.size() == 1u);
  CHECK(r.series[0].step == 0);
  CHECK(r.series[0].energy > 0.0);
}

TEST_CASE("small-amplitude step matches the dense oracle and does not gain energy") {
  const Grid2D g(16, 16);
  const TimeStepper ts(g, 1.0, 1e-2);
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const SimState s0{vortex_field(g, eps), 0.0, 0};
    const StepResult r = ts.step(s0, VectorField(g));
    CHECK(max_diff(r.state.u, dense_step(s0.u, VectorField(g), 1.0, 1e-2)) <= 1e-8 * eps);
    CHECK(norm_l2(r.state.u) <= norm_l2(s0.u));
    CHECK(r.state.t == doctest::Approx(1e-2));
    CHECK(r.state.n == 1);
  }
}

TEST_CASE("decaying run follows the dense oracle with monotone energy") {
  const Grid2D g(16, 16);
  SimConfig c;
  c.nx = c.ny = 16;
  c.nu = 1.0;
  c.dt = 5e-3;
  c.t_end = 0.05;
  c.initial = {"vortex", 1e-2};
  const RunResult r = run(c);
  VectorField u = vortex_field(g, 1e-2);
  for (long k = 0; k < c.step_count(); ++k) u = dense_step(u, VectorField(g), c.nu, c.dt);
  CHECK(max_diff(r.final_state.u, u) <= 1e-10);
  for (std::size_t k = 1; k < r.series.size(); ++k) CHECK(r.series[k].energy < r.series[k - 1].energy);
}

TEST_CASE("nonhomogeneous step with zero data equals the homogeneous step") {
  const Grid2D g(16, 16);
  const TimeStepper ts(g, 0.5, 1e-2);
  const SimState s0{vortex_field(g, 0.7), 0.0, 0};
  const VectorField f = VectorField::sample(g, [](double x, double y) { return Vec2{y, x * x}; });
  const StepResult a = ts.step(s0, f);
  const InhomogeneousData zero{ScalarField(g), ScalarField(g), BoundaryData(g, BoundaryKind::Neumann),
                               VectorField(g), ScalarField(g)};
  const StepResult b = ts.step_nonhomogeneous(s0, f, zero);
  CHECK(max_diff(a.state.u, b.state.u) == 0.0);
  CHECK(same_bits(a.diag, b.diag));
}

TEST_CASE("lid preset keeps p_gh zero and the lid on the boundary") {
  SimConfig c;
  c.nx = c.ny = 32;
  c.nu = 0.1;
  c.dt = 1e-2;
  c.t_end = 0.2;
  c.bc = {"lid", 1.0, "uniform"};
  Simulation sim(c);
  while (!sim.finished()) {
    REQUIRE(sim.advance());
    const VectorField& u = sim.state().u;
    for (int i = 0; i <= 32; ++i) {
      CHECK(u.u1(i, 32) == ((i == 0 || i == 32) ? 0.0 : 1.0));
      CHECK(u.u2(i, 32) == 0.0);
      CHECK(u.u1(i, 0) == 0.0);
      CHECK(u.u1(0, i) == 0.0);
      CHECK(u.u2(32, i) == 0.0);
    }
    CHECK(sim.evaluate().pressure.p_gh.max_abs() <= 1e-14);
  }
}

TEST_CASE("boundary nodes follow g(t) for the manufactured flux preset") {
  SimConfig c;
  c.nx = c.ny = 16;
  c.dt = 1e-2;
  c.t_end = 0.1;
  c.bc.id = "manufactured";
  const auto model = make_boundary_model(c.bc);
  Simulation sim(c);
  while (!sim.finished()) {
    REQUIRE(sim.advance());
    CHECK(boundary_mismatch(sim.state().u, model->velocity(sim.grid(), sim.state().t)) <= 1e-15);
    CHECK(sim.incompatible_steps() == 0);
  }
}

TEST_CASE("divergence tracks the prescribed h at first order in dt and second in h" *
          doctest::test_suite("timestepper-tracking")) {
  // Refine h and dt together (dt ~ h^2); ||div_h u - h|| at t = 0.1 should
  // fall by 4 per halving of h.
  auto err = [](int n, double dt) {
    SimConfig c;
    c.nx = c.ny = n;
    c.dt = dt;
    c.t_end = 0.1;
    c.bc.id = "manufactured";
    Simulation sim(c);
    while (!sim.finished()) REQUIRE(sim.advance());
    return std::sqrt(sim.diagnostics().div_u_sq);
  };
  const double e16 = err(16, 4e-3), e32 = err(32, 1e-3), e64 = err(64, 2.5e-4);
  MESSAGE("||div u - h|| at t=0.1: " << e16 << " " << e32 << " " << e64);
  CHECK(e16 / e32 == doctest::Approx(4.0).epsilon(0.3 / 4.0));
  CHECK(e32 / e64 == doctest::Approx(4.0).epsilon(0.3 / 4.0));
}

TEST_CASE("divergence norm is non-increasing after the first steps") {
  const Grid2D g(32, 32);
  SampleSpec spec;
  spec.family = SampleFamily::RandomSineSeries;
  spec.divergence_free = false;
  for (long index = 0; index < 3; ++index) {
    VectorField u0 = make_sample(spec, index, g);
    u0 *= 3.0;
    SimConfig c;
    c.nx = c.ny = 32;
    c.nu = index == 0 ? 1.0 : 0.05;
    c.dt = 1e-2;
    c.t_end = 0.5;
    c.forcing = {"uniform", {1.0, 2.0}};
    RunOptions opt;
    opt.initial = &u0;
    const RunResult r = run(c, opt);
    for (std::size_t k = 4; k < r.series.size(); ++k)
      CHECK(r.series[k].div_u_sq <= r.series[k - 1].div_u_sq * (1 + 1e-12));
  }
}

TEST_CASE("large alpha drives the solution to zero") {
  // alpha = nu dt grows through nu with the explicit right side held fixed:
  // zero forcing and a field supported away from the boundary (p_S = 0).
  const Grid2D g(16, 16);
  VectorField u0 = random_vector(g, 21);
  clear_collar(u0.u1, 3);
  clear_collar(u0.u2, 3);
  const SimState s0{u0, 0.0, 0};
  double prev = norm_l2(u0);
  for (double nu : {1.0, 1e2, 1e4, 1e6}) {
    const TimeStepper ts(g, nu, 1e-2);
    const double nrm = norm_l2(ts.step(s0, VectorField(g)).state.u);
    CHECK(nrm < prev);
    prev = nrm;
  }
  CHECK(prev <= 1e-3 * norm_l2(u0));
}

TEST_CASE("runs are bit-for-bit deterministic") {
  SimConfig c;
  c.nx = c.ny = 24;
  c.nu = 0.05;
  c.dt = 1e-2;
  c.t_end = 0.3;
  c.initial = {"vortex", 0.5};
  c.forcing = {"uniform", {0.3, -0.1}};
  const RunResult a = run(c), b = run(c);
  REQUIRE(a.series.size() == b.series.size());
  for (std::size_t k = 0; k < a.series.size(); ++k) CHECK(same_bits(a.series[k], b.series[k]));
  CHECK(max_diff(a.final_state.u, b.final_state.u) == 0.0);
}

TEST_CASE("time stamps increase and diagnostics stay finite") {
  SimConfig c;
  c.nx = c.ny = 16;
  c.dt = 3e-2;
  c.t_end = 0.5;
  c.initial = {"vortex", 1.0};
  const RunResult r = run(c);
  for (std::size_t k = 1; k < r.series.size(); ++k) {
    CHECK(r.series[k].t > r.series[k - 1].t);
    CHECK(r.series[k].finite());
    CHECK(r.series[k].step == static_cast<long>(k));
  }
}

TEST_CASE("non-finite state is reported as a blow-up") {
  SimConfig c;
  c.nx = c.ny = 16;
  c.t_end = 0.1;
  VectorField u0 = vortex_field(Grid2D(16, 16));
  u0.u1(5, 5) = std::numeric_limits<double>::quiet_NaN();
  RunOptions opt;
  opt.initial = &u0;
  const RunResult r = run(c, opt);
  REQUIRE(r.blow_up.has_value());
  CHECK(r.blow_up->step == 1);
}

TEST_CASE("runaway growth is reported with the last finite state") {
  SimConfig c;
  c.nx = c.ny = 16;
  c.nu = 1e-3;
  c.dt = 0.5;
  c.t_end = 20;
  c.initial = {"vortex", 50.0};
  Simulation sim(c);
  while (!sim.finished()) sim.advance();
  REQUIRE(sim.blow_up().has_value());
  CHECK(sim.state().u.all_finite());
  CHECK(sim.state().n == sim.blow_up()->step - 1);
  CHECK(sim.blow_up()->last_finite.finite());
}

}  // TEST_SUITE
