#include "uns2d/ops.hpp"

namespace uns2d {
namespace {

// First derivative of the 1D line f[0..n] (stride `s`) at position k.
inline double d1(const double* f, int k, int n, std::ptrdiff_t s, double inv2h) {
  if (k == 0) return (-3.0 * f[0] + 4.0 * f[s] - f[2 * s]) * inv2h;
  if (k == n) return (3.0 * f[n * s] - 4.0 * f[(n - 1) * s] + f[(n - 2) * s]) * inv2h;
  return (f[(k + 1) * s] - f[(k - 1) * s]) * inv2h;
}

// Second derivative; 4-point one-sided at the ends (exact on cubics).
inline double d2(const double* f, int k, int n, std::ptrdiff_t s, double invh2) {
  if (k == 0) return (2.0 * f[0] - 5.0 * f[s] + 4.0 * f[2 * s] - f[3 * s]) * invh2;
  if (k == n)
    return (2.0 * f[n * s] - 5.0 * f[(n - 1) * s] + 4.0 * f[(n - 2) * s] - f[(n - 3) * s]) *
           invh2;
  return (f[(k + 1) * s] - 2.0 * f[k * s] + f[(k - 1) * s]) * invh2;
}

}  // namespace

ScalarField dx_h(const ScalarField& p) {
  const Grid2D& g = p.grid();
  ScalarField out(g);
  const double inv2h = 0.5 / g.hx();
  for (int j = 0; j <= g.ny(); ++j) {
    const double* row = p.data() + g.index(0, j);
    for (int i = 0; i <= g.nx(); ++i) out(i, j) = d1(row, i, g.nx(), 1, inv2h);
  }
  return out;
}

ScalarField dy_h(const ScalarField& p) {
  const Grid2D& g = p.grid();
  ScalarField out(g);
  const double inv2h = 0.5 / g.hy();
  const std::ptrdiff_t stride = g.nx() + 1;
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) out(i, j) = d1(p.data() + i, j, g.ny(), stride, inv2h);
  return out;
}

VectorField grad_h(const ScalarField& p) { return VectorField(dx_h(p), dy_h(p)); }

ScalarField div_h(const VectorField& u) { return dx_h(u.u1) + dy_h(u.u2); }

ScalarField lap_h(const ScalarField& p) {
  const Grid2D& g = p.grid();
  ScalarField out(g);
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  const double ihy2 = 1.0 / (g.hy() * g.hy());
  const std::ptrdiff_t stride = g.nx() + 1;
  for (int j = 0; j <= g.ny(); ++j) {
    const double* row = p.data() + g.index(0, j);
    for (int i = 0; i <= g.nx(); ++i)
      out(i, j) = d2(row, i, g.nx(), 1, ihx2) + d2(p.data() + i, j, g.ny(), stride, ihy2);
  }
  return out;
}

VectorField lap_h(const VectorField& u) { return VectorField(lap_h(u.u1), lap_h(u.u2)); }

VectorField advect(const VectorField& u) {
  const Grid2D& g = u.grid();
  const ScalarField a = dx_h(u.u1), b = dy_h(u.u1);
  const ScalarField c = dx_h(u.u2), d = dy_h(u.u2);
  VectorField out(g);
  const std::size_t n = g.node_count();
  const double* u1 = u.u1.data();
  const double* u2 = u.u2.data();
  for (std::size_t k = 0; k < n; ++k) {
    out.u1.data()[k] = u1[k] * a.data()[k] + u2[k] * b.data()[k];
    out.u2.data()[k] = u1[k] * c.data()[k] + u2[k] * d.data()[k];
  }
  return out;
}

ScalarField vorticity(const VectorField& u) { return dx_h(u.u2) - dy_h(u.u1); }

BoundaryData stokes_neumann_data(const VectorField& u) {
  const Grid2D& g = u.grid();
  const ScalarField w = vorticity(u);
  BoundaryData out(g, BoundaryKind::Neumann);

  // Along the vertical sides tau . grad(w) is -/+ d(w)/dy; along the
  // horizontal sides it is +/- d(w)/dx.  g_S = -tau . grad(w).
  for (Side s : kSides) {
    auto vals = out.side(s);
    const int last = static_cast<int>(vals.size()) - 1;
    const bool vertical = (s == Side::Left || s == Side::Right);
    const double inv2h = 0.5 / (vertical ? g.hy() : g.hx());
    const auto n = BoundaryData::normal(s);
    for (int k = 1; k < last; ++k) {
      double dw;
      if (vertical) {
        const int i = (s == Side::Left) ? 0 : g.nx();
        dw = (w(i, k + 1) - w(i, k - 1)) * inv2h;  // d(w)/dy
        vals[k] = -n[0] * dw;
      } else {
        const int j = (s == Side::Bottom) ? 0 : g.ny();
        dw = (w(k + 1, j) - w(k - 1, j)) * inv2h;  // d(w)/dx
        vals[k] = n[1] * dw;
      }
    }
    vals[0] = vals[1];
    vals[last] = vals[last - 1];
  }
  out.add_constant(-out.integral() / out.perimeter());
  return out;
}

BoundaryData normal_trace(const VectorField& a) {
  BoundaryData out(a.grid(), BoundaryKind::Neumann);
  for (Side s : kSides) {
    auto vals = out.side(s);
    const auto n = BoundaryData::normal(s);
    for (int k = 0; k < static_cast<int>(vals.size()); ++k) {
      const auto [i, j] = out.node(s, k);
      vals[k] = n[0] * a.u1(i, j) + n[1] * a.u2(i, j);
    }
  }
  return out;
}

BoundaryData normal_derivative(const ScalarField& p) { return normal_trace(grad_h(p)); }

}  // namespace uns2d
