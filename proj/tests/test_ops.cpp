#include "doctest.h"
#include "support.hpp"
#include "uns2d/presets.hpp"

using namespace testing;

namespace {

VectorField vortex_field(const Grid2D& g) {
  return VectorField::sample(g, [](double x, double y) { return analytic::vortex(x, y); });
}

// u = perp grad of psi = sin(pi x) sin(pi y): (psi_y, -psi_x).
VectorField sin_stream(const Grid2D& g) {
  return VectorField::sample(g, [](double x, double y) {
    return Vec2{pi * std::sin(pi * x) * std::cos(pi * y), -pi * std::cos(pi * x) * std::sin(pi * y)};
  });
}

// n . a on each side, straight from the unreduced stencils.
BoundaryData direct_stokes_data(const VectorField& u) {
  VectorField a = lap_h(u);
  a -= grad_h(div_h(u));
  return normal_trace(a);
}

double boundary_max_diff(const BoundaryData& a, const BoundaryData& b, int skip) {
  double m = 0.0;
  for (Side s : kSides) {
    const auto x = a.side(s), y = b.side(s);
    for (int k = skip; k < static_cast<int>(x.size()) - skip; ++k)
      m = std::max(m, std::abs(x[k] - y[k]));
  }
  return m;
}

}  // namespace

TEST_SUITE("ops") {

TEST_CASE("gradient of constants and linears") {
  const Grid2D g(16, 12);
  CHECK(grad_h(ScalarField(g, 3.7)).u1.max_abs() <= 1e-12);
  const ScalarField p = ScalarField::sample(g, [](double x, double y) { return 2 * x + 3 * y; });
  const VectorField gp = grad_h(p);
  CHECK(max_diff(gp.u1, ScalarField(g, 2.0)) <= 1e-12);
  CHECK(max_diff(gp.u2, ScalarField(g, 3.0)) <= 1e-12);
}

TEST_CASE("gradient converges at second order") {
  auto err = [](int n) {
    const Grid2D g(n, n);
    const ScalarField p =
        ScalarField::sample(g, [](double x, double y) { return std::sin(pi * x) * std::cos(pi * y); });
    const VectorField exact = VectorField::sample(g, [](double x, double y) {
      return Vec2{pi * std::cos(pi * x) * std::cos(pi * y), -pi * std::sin(pi * x) * std::sin(pi * y)};
    });
    return max_diff(grad_h(p), exact);
  };
  const double ratio = err(32) / err(64);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.3 / 4.0));
}

TEST_CASE("divergence examples") {
  const Grid2D g(16, 16);
  const VectorField xy = VectorField::sample(g, [](double x, double y) { return Vec2{x, y}; });
  CHECK(max_diff(div_h(xy), ScalarField(g, 2.0)) <= 1e-12);
  const VectorField rot = VectorField::sample(g, [](double x, double y) { return Vec2{-y, x}; });
  CHECK(div_h(rot).max_abs() <= 1e-12);
}

TEST_CASE("divergence of a stream-function field is O(h^2)") {
  // For psi = sin^2(pi x) sin^2(pi y) the centered errors cancel at interior
  // nodes, so only the one-sided boundary stencils contribute and the error
  // falls faster than h^2.
  auto err = [](int n) { return norm_l2(div_h(vortex_field(Grid2D(n, n)))); };
  const double e16 = err(16);
  for (int n : {32, 64, 128}) CHECK(err(n) <= e16 * (16.0 / n) * (16.0 / n));

  // A stream function without that symmetry shows the plain second-order rate.
  auto err_generic = [](int n) {
    const Grid2D g(n, n);
    // psi = sin^2(pi x) sin^2(pi y) exp(x + 2y)
    const VectorField u = VectorField::sample(g, [](double x, double y) {
      const double sx = std::sin(pi * x), sy = std::sin(pi * y), e = std::exp(x + 2 * y);
      const double psi_x = e * sy * sy * (sx * sx + 2 * pi * sx * std::cos(pi * x));
      const double psi_y = e * sx * sx * (2 * sy * sy + 2 * pi * sy * std::cos(pi * y));
      return Vec2{psi_y, -psi_x};
    });
    return norm_l2(div_h(u));
  };
  const double r = err_generic(64) / err_generic(128);
  MESSAGE("generic stream function divergence ratio 64->128: " << r);
  CHECK(r == doctest::Approx(4.0).epsilon(0.3 / 4.0));
}

TEST_CASE("laplacian examples") {
  const Grid2D g(16, 16);
  const ScalarField q = ScalarField::sample(g, [](double x, double y) { return x * x + y * y; });
  CHECK(max_diff(lap_h(q), ScalarField(g, 4.0)) <= 1e-9);
  const ScalarField lin = ScalarField::sample(g, [](double x, double y) { return 1 - x + 5 * y; });
  CHECK(lap_h(lin).max_abs() <= 1e-9);

  auto err = [](int n) {
    const Grid2D gg(n, n);
    const ScalarField p =
        ScalarField::sample(gg, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    return max_diff_interior(lap_h(p), -2 * pi * pi * p);
  };
  CHECK(err(32) / err(64) == doctest::Approx(4.0).epsilon(0.3 / 4.0));
}

TEST_CASE("advection examples") {
  const Grid2D g(16, 16);
  CHECK(max_diff(advect(VectorField(g)), VectorField(g)) == 0.0);
  const VectorField c(ScalarField(g, 1.5), ScalarField(g, -0.5));
  CHECK(max_diff(advect(c), VectorField(g)) <= 1e-12);
  const VectorField shear(ScalarField::sample(g, [](double, double y) { return y; }), ScalarField(g));
  CHECK(max_diff(advect(shear), VectorField(g)) <= 1e-12);
  // u = (x, 0): (u.grad) u = (x, 0).
  const VectorField stretch(ScalarField::sample(g, [](double x, double) { return x; }), ScalarField(g));
  CHECK(max_diff(advect(stretch), stretch) <= 1e-12);
}

TEST_CASE("vorticity examples") {
  const Grid2D g(16, 16);
  const VectorField rot = VectorField::sample(g, [](double x, double y) { return Vec2{-y, x}; });
  CHECK(max_diff(vorticity(rot), ScalarField(g, 2.0)) <= 1e-12);
  const VectorField grad_phi = VectorField::sample(g, [](double x, double y) { return Vec2{2 * x + y, x}; });
  CHECK(vorticity(grad_phi).max_abs() <= 1e-12);

  auto err = [](int n) {
    const Grid2D gg(n, n);
    const ScalarField expected = ScalarField::sample(
        gg, [](double x, double y) { return 2 * pi * pi * std::sin(pi * x) * std::sin(pi * y); });
    return max_diff(vorticity(sin_stream(gg)), expected);
  };
  CHECK(err(32) / err(64) == doctest::Approx(4.0).epsilon(0.3 / 4.0));
}

TEST_CASE("stokes boundary data of trivial fields") {
  const Grid2D g(24, 24);
  CHECK(stokes_neumann_data(VectorField(g)).max_abs() == 0.0);

  VectorField inner = random_vector(g, 11);
  clear_collar(inner.u1, 3);
  clear_collar(inner.u2, 3);
  CHECK(stokes_neumann_data(inner).max_abs() == 0.0);
}

TEST_CASE("stokes boundary data has zero boundary mean") {
  const Grid2D g(20, 28);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    VectorField u = random_vector(g, seed);
    const BoundaryData d = stokes_neumann_data(u);
    CHECK(std::abs(d.integral()) <= 1e-12 * (1.0 + d.max_abs()));
  }
}

TEST_CASE("stokes boundary data matches the unreduced stencil") {
  // Away from the corners the two evaluations differ by O(h^2).
  auto diff = [](int n) {
    const Grid2D g(n, n);
    const VectorField u = vortex_field(g);
    BoundaryData direct = direct_stokes_data(u);
    direct.add_constant(-direct.integral() / direct.perimeter());
    return boundary_max_diff(stokes_neumann_data(u), direct, n / 8);
  };
  const double d32 = diff(32), d64 = diff(64);
  MESSAGE("stokes data vs direct: n=32 " << d32 << ", n=64 " << d64);
  CHECK(d32 / d64 == doctest::Approx(4.0).epsilon(0.3 / 4.0));
}

TEST_CASE("summation by parts for fields vanishing near the boundary") {
  const Grid2D g(18, 22);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    ScalarField p = random_field(g, seed);
    VectorField v = random_vector(g, seed + 7);
    clear_collar(p, 2);
    clear_collar(v.u1, 2);
    clear_collar(v.u2, 2);
    const double lhs = inner_product(grad_h(p), v);
    const double rhs = -inner_product(p, div_h(v));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
  }
}

}  // TEST_SUITE
