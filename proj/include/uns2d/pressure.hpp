#pragma once

#include "uns2d/elliptic.hpp"
#include "uns2d/grid.hpp"

namespace uns2d {

struct HelmholtzParts {
  ScalarField phi;        // zero-mean potential
  VectorField grad_part;  // grad_h phi = (I - P) a
  VectorField sol_part;   // a - grad_part = P a
};

/// Discrete Helmholtz decomposition a = grad_h phi + P a. The gradient part
/// is the trapezoid-orthogonal projection of a onto the range of grad_h, so
/// the projection is exactly idempotent and P annihilates grad_h fields.
HelmholtzParts helmholtz_decompose(const SolverPlans& plans, const VectorField& a);

/// Euler pressure: potential of the gradient part of f - (u.grad)u.
ScalarField euler_pressure(const SolverPlans& plans, const VectorField& u, const VectorField& f);

struct StokesPressure {
  ScalarField p_s;
  double grad_ps_sq = 0.0;  // ||grad_h p_S||^2
  double lap_u_sq = 0.0;    // ||Lap_h u||^2 over interior nodes
  double grad_u_sq = 0.0;   // ||grad_h u||^2
  double compat_correction = 0.0;
};

/// Zero-mean harmonic p_S with n.grad p_S = n.(Lap - grad div) u on the
/// boundary, plus the norms that enter the Stokes-pressure estimate.
StokesPressure stokes_pressure(const SolverPlans& plans, const VectorField& u);

struct InhomogeneousPressure {
  ScalarField p_gh;
  double compat_correction = 0.0;
  /// |<dt(n.g), 1>_Gamma - <dt h, 1>|; flagged when above kCompatibilityTol.
  double compat_mismatch = 0.0;
  bool compatible = true;
};

inline constexpr double kCompatibilityTol = 1e-8;

/// Pressure driven by a prescribed divergence h and a time-dependent normal
/// boundary flux. Strong form of
///   <grad p, grad phi> = -<dt(n.g), phi>_Gamma + <dt h, phi> + nu <grad h, grad phi>:
///   Lap_h p = -dt h + nu Lap_h h,   n.grad p = nu n.grad_h h - dt(n.g).
/// Lap_h h at boundary nodes is the ghost-reflection Laplacian carrying the
/// same n.grad_h h, which makes the discrete strong form equal to the
/// trapezoid-lumped weak form. A compatibility mismatch is reported, not thrown.
InhomogeneousPressure inhomogeneous_pressure(const SolverPlans& plans, const ScalarField& dt_h,
                                             const ScalarField& h, const BoundaryData& dt_ng,
                                             double nu);

/// p = p_E + nu p_S + p_gh and its gradient.
struct PressureParts {
  ScalarField p_e;
  ScalarField p_s;
  ScalarField p_gh;
  VectorField grad_p_total;

  PressureParts(ScalarField pe, ScalarField ps, ScalarField pgh, double nu);
  ScalarField total(double nu) const;
};

}  // namespace uns2d
