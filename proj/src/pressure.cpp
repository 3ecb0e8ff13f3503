#include "uns2d/pressure.hpp"

#include <cmath>

#include "uns2d/ops.hpp"

namespace uns2d {

HelmholtzParts helmholtz_decompose(const SolverPlans& plans, const VectorField& a) {
  ScalarField phi = plans.projector.potential(a);
  VectorField grad_part = grad_h(phi);
  VectorField sol_part = a - grad_part;
  return {std::move(phi), std::move(grad_part), std::move(sol_part)};
}

ScalarField euler_pressure(const SolverPlans& plans, const VectorField& u, const VectorField& f) {
  return plans.projector.potential(f - advect(u));
}

StokesPressure stokes_pressure(const SolverPlans& plans, const VectorField& u) {
  const Grid2D& g = u.grid();
  NeumannSolution sol = solve_neumann_poisson(plans.neumann, ScalarField(g),
                                              stokes_neumann_data(u));
  StokesPressure out{std::move(sol.p)};
  out.compat_correction = sol.compat_correction;

  const VectorField gp = grad_h(out.p_s);
  out.grad_ps_sq = inner_product(gp, gp);
  const double l1 = norm_l2_interior(lap_h(u.u1));
  const double l2 = norm_l2_interior(lap_h(u.u2));
  out.lap_u_sq = l1 * l1 + l2 * l2;
  const VectorField g1 = grad_h(u.u1), g2 = grad_h(u.u2);
  out.grad_u_sq = inner_product(g1, g1) + inner_product(g2, g2);
  return out;
}

InhomogeneousPressure inhomogeneous_pressure(const SolverPlans& plans, const ScalarField& dt_h,
                                             const ScalarField& h, const BoundaryData& dt_ng,
                                             double nu) {
  const BoundaryData dn_h = normal_derivative(h);
  ScalarField rhs = plans.neumann.apply(h, dn_h);
  rhs *= nu;
  rhs -= dt_h;

  BoundaryData g(h.grid(), BoundaryKind::Neumann);
  for (Side s : kSides) {
    auto out = g.side(s);
    auto a = dn_h.side(s);
    auto b = dt_ng.side(s);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = nu * a[k] - b[k];
  }

  NeumannSolution sol = solve_neumann_poisson(plans.neumann, rhs, g);
  InhomogeneousPressure out{std::move(sol.p)};
  out.compat_correction = sol.compat_correction;
  out.compat_mismatch = std::abs(dt_ng.integral() - integral(dt_h));
  out.compatible = out.compat_mismatch <= kCompatibilityTol;
  return out;
}

PressureParts::PressureParts(ScalarField pe, ScalarField ps, ScalarField pgh, double nu)
    : p_e(std::move(pe)), p_s(std::move(ps)), p_gh(std::move(pgh)), grad_p_total(p_e.grid()) {
  grad_p_total = grad_h(total(nu));
}

ScalarField PressureParts::total(double nu) const {
  ScalarField p = p_e;
  p.axpy(nu, p_s);
  p += p_gh;
  return p;
}

}  // namespace uns2d
