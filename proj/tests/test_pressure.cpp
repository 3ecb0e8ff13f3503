#include "doctest.h"
#include "support.hpp"
#include "weak_form.hpp"
#include "uns2d/pressure.hpp"
#include "uns2d/presets.hpp"

using namespace testing;

namespace {

// ||grad_h p_S||^2 / ||Lap_h u||^2 for the vortex field at n = 32, from the
// dense bordered Neumann solve.
constexpr double kVortexStokesRatio32 = 0.0854337967607197;

VectorField vortex_field(const Grid2D& g) {
  return VectorField::sample(g, [](double x, double y) { return analytic::vortex(x, y); });
}

ScalarField zero_mean(ScalarField f) {
  const double m = mean(f);
  for (double& v : f.values()) v -= m;
  return f;
}

}  // namespace

TEST_SUITE("pressure") {

TEST_CASE("helmholtz decomposition of zero") {
  const Grid2D g(16, 16);
  const SolverPlans plans(g);
  const HelmholtzParts d = helmholtz_decompose(plans, VectorField(g));
  CHECK(d.phi.max_abs() == 0.0);
  CHECK(d.grad_part.u1.max_abs() == 0.0);
  CHECK(d.sol_part.u2.max_abs() == 0.0);
}

TEST_CASE("projection annihilates discrete gradients") {
  const Grid2D g(32, 32);
  const SolverPlans plans(g);
  const ScalarField phi =
      ScalarField::sample(g, [](double x, double y) { return std::sin(2 * x) * std::cos(3 * y) + x * y; });
  const VectorField a = grad_h(phi);
  const HelmholtzParts d = helmholtz_decompose(plans, a);
  CHECK(norm_l2(d.sol_part) <= 1e-10 * norm_l2(a));
  CHECK(max_diff(d.phi, zero_mean(phi)) <= 1e-10);
}

TEST_CASE("gradient part of a stream-function field vanishes at second order") {
  auto err = [](int n) {
    const Grid2D g(n, n);
    const SolverPlans plans(g);
    const VectorField a = vortex_field(g);
    return norm_l2(helmholtz_decompose(plans, a).grad_part) / norm_l2(a);
  };
  const double r = err(32) / err(64);
  MESSAGE("gradient part ratio 32->64: " << r);
  CHECK(r == doctest::Approx(4.0).epsilon(0.3 / 4.0));
}

TEST_CASE("projection is idempotent and orthogonal") {
  const Grid2D g(32, 24);
  const SolverPlans plans(g);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const VectorField a = random_vector(g, seed);
    const HelmholtzParts d = helmholtz_decompose(plans, a);
    const HelmholtzParts again = helmholtz_decompose(plans, d.sol_part);
    const double na = norm_l2(a);
    CHECK(norm_l2(again.grad_part) <= 1e-8 * na);
    CHECK(std::abs(inner_product(d.grad_part, d.sol_part)) <= 1e-6 * na * na);
    CHECK(max_diff(d.grad_part + d.sol_part, a) <= 1e-12);
  }
}

TEST_CASE("euler pressure examples") {
  const Grid2D g(32, 32);
  const SolverPlans plans(g);
  CHECK(euler_pressure(plans, VectorField(g), VectorField(g)).max_abs() == 0.0);

  const ScalarField phi = ScalarField::sample(g, [](double x, double y) { return std::exp(x) * std::sin(y); });
  CHECK(max_diff(euler_pressure(plans, VectorField(g), grad_h(phi)), zero_mean(phi)) <= 1e-10);

  const VectorField u = vortex_field(g);
  VectorField minus_adv = advect(u);
  minus_adv *= -1.0;
  CHECK(max_diff(euler_pressure(plans, u, VectorField(g)), dense_projection_potential(minus_adv)) <= 1e-8);
}

TEST_CASE("stokes pressure of trivial fields") {
  const Grid2D g(32, 32);
  const SolverPlans plans(g);
  CHECK(stokes_pressure(plans, VectorField(g)).p_s.max_abs() == 0.0);

  VectorField inner = random_vector(g, 5);
  clear_collar(inner.u1, 3);
  clear_collar(inner.u2, 3);
  const StokesPressure s = stokes_pressure(plans, inner);
  CHECK(s.p_s.max_abs() <= 1e-6 * norms(inner).l2);
}

TEST_CASE("stokes pressure of the vortex field") {
  const Grid2D g(32, 32);
  const SolverPlans plans(g);
  const StokesPressure s = stokes_pressure(plans, vortex_field(g));
  const double ratio = s.grad_ps_sq / s.lap_u_sq;
  CHECK(ratio <= 1.0);
  CHECK(ratio == doctest::Approx(kVortexStokesRatio32).epsilon(1e-8));
  CHECK(std::abs(mean(s.p_s)) <= 1e-13);
}

TEST_CASE("stokes pressure is discretely harmonic") {
  const Grid2D g(32, 40);
  const SolverPlans plans(g);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const StokesPressure s = stokes_pressure(plans, random_vector(g, seed));
    CHECK(max_diff_interior(lap_h(s.p_s), ScalarField(g)) <= 1e-8 * (1.0 + s.p_s.max_abs()));
  }
}

TEST_CASE("inhomogeneous pressure vanishes for static tangential data") {
  const Grid2D g(32, 32);
  const SolverPlans plans(g);
  const InhomogeneousPressure a =
      inhomogeneous_pressure(plans, ScalarField(g), ScalarField(g), BoundaryData(g, BoundaryKind::Neumann), 0.1);
  CHECK(a.p_gh.max_abs() == 0.0);
  CHECK(a.compatible);

  const ScalarField h = random_field(g, 9);
  const InhomogeneousPressure b =
      inhomogeneous_pressure(plans, ScalarField(g), h, BoundaryData(g, BoundaryKind::Neumann), 0.0);
  CHECK(b.p_gh.max_abs() == 0.0);
}

TEST_CASE("inhomogeneous pressure matches the weak form") {
  const Grid2D g(32, 32);
  const SolverPlans plans(g);
  const auto model = make_boundary_model({"manufactured", 1.0, "uniform"});
  const double t = 0.3, nu = 0.7;
  const ScalarField h = model->divergence(g, t);
  const ScalarField dt_h = model->divergence_rate(g, t);
  const BoundaryData dt_ng = model->normal_flux_rate(g, t);
  const InhomogeneousPressure p = inhomogeneous_pressure(plans, dt_h, h, dt_ng, nu);
  CHECK(p.compatible);
  CHECK(p.compat_mismatch <= 1e-8);
  const ScalarField oracle = weak_form_pgh(dt_h, h, dt_ng, nu);
  CHECK(max_diff(p.p_gh, oracle) <= 1e-8);
  CHECK(p.p_gh.max_abs() > 1e-3);
}

TEST_CASE("incompatible data is flagged, not thrown") {
  const Grid2D g(16, 16);
  const SolverPlans plans(g);
  BoundaryData dt_ng(g, BoundaryKind::Neumann);
  dt_ng.add_constant(1.0);
  const InhomogeneousPressure p = inhomogeneous_pressure(plans, ScalarField(g), ScalarField(g), dt_ng, 1.0);
  CHECK_FALSE(p.compatible);
  CHECK(p.compat_mismatch == doctest::Approx(4.0));
  CHECK(p.p_gh.all_finite());
}

TEST_CASE("pressure parts combine through the gradient") {
  const Grid2D g(16, 16);
  const ScalarField a = zero_mean(random_field(g, 1)), b = zero_mean(random_field(g, 2)),
                    c = zero_mean(random_field(g, 3));
  const double nu = 0.3;
  const PressureParts parts(a, b, c, nu);
  const ScalarField total = parts.total(nu);
  CHECK(max_diff(total, a + nu * b + c) <= 1e-14);
  CHECK(max_diff(parts.grad_p_total, grad_h(total)) <= 1e-10);
}

}  // TEST_SUITE
