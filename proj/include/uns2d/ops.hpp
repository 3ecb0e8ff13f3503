#pragma once

#include "uns2d/grid.hpp"

namespace uns2d {

// Second-order finite-difference operators on the nodal grid. Interior nodes
// use centered stencils; boundary nodes use one-sided stencils in the normal
// direction and centered stencils along the side.

/// d/dx: centered inside, 3-point one-sided at i = 0 and i = nx.
ScalarField dx_h(const ScalarField& p);
/// d/dy: centered inside, 3-point one-sided at j = 0 and j = ny.
ScalarField dy_h(const ScalarField& p);

VectorField grad_h(const ScalarField& p);
ScalarField div_h(const VectorField& u);

/// 5-point Laplacian at interior nodes; at boundary nodes the normal second
/// derivative uses the 4-point one-sided stencil (both directions at corners).
ScalarField lap_h(const ScalarField& p);
VectorField lap_h(const VectorField& u);

/// (u . grad) u with grad_h stencils, evaluated at every node.
VectorField advect(const VectorField& u);

/// omega = d(u2)/dx - d(u1)/dy.
ScalarField vorticity(const VectorField& u);

/// Neumann data for the Stokes pressure, n . (Lap - grad div) u on each side,
/// evaluated through the 2D identity (Lap - grad div) u = (-d(omega)/dy,
/// d(omega)/dx), i.e. minus the tangential derivative of the vorticity.
/// Tangential derivatives are centered along each side; corner entries copy
/// the nearest non-corner node of the same side. The result is shifted so its
/// trapezoidal boundary integral is zero.
BoundaryData stokes_neumann_data(const VectorField& u);

/// Outward normal component of a vector field on each side (n . a).
BoundaryData normal_trace(const VectorField& a);

/// Outward normal derivative n . grad_h p on each side.
BoundaryData normal_derivative(const ScalarField& p);

}  // namespace uns2d
