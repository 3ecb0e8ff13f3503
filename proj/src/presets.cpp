#include "uns2d/presets.hpp"

#include <cmath>
#include <numbers>

#include "uns2d/error.hpp"

namespace uns2d {

using std::numbers::pi;

VectorField average_forcing(const ForcingSampler& sampler, long n, double dt, const Grid2D& grid) {
  if (!(dt > 0.0)) throw ArgumentError("average_forcing: dt must be > 0");
  // Gauss-Legendre nodes/weights on [-1, 1].
  static const double x3 = std::sqrt(0.6);
  std::array<double, 3> nodes{}, weights{};
  int q = sampler.quadrature_order;
  switch (q) {
    case 1: nodes = {0.0}; weights = {2.0}; break;
    case 2: nodes = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)}; weights = {1.0, 1.0}; break;
    case 3: nodes = {-x3, 0.0, x3}; weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}; break;
    default: throw ArgumentError("average_forcing: quadrature_order must be 1, 2 or 3");
  }
  const double t0 = n * dt;
  VectorField out(grid);
  for (int k = 0; k < q; ++k) {
    const double t = t0 + 0.5 * dt * (1.0 + nodes[k]);
    const double w = 0.5 * weights[k];
    for (int j = 0; j <= grid.ny(); ++j)
      for (int i = 0; i <= grid.nx(); ++i) {
        const Vec2 f = sampler.f(grid.x(i), grid.y(j), t);
        out.u1(i, j) += w * f[0];
        out.u2(i, j) += w * f[1];
      }
  }
  return out;
}

namespace analytic {

Vec2 vortex(double x, double y) {
  const double sx = std::sin(pi * x), sy = std::sin(pi * y);
  return {sx * sx * std::sin(2 * pi * y), -std::sin(2 * pi * x) * sy * sy};
}

Vec2 Manufactured::velocity(double x, double y, double t) const {
  const Vec2 v = vortex(x, y);
  return {psi(t) * v[0], psi(t) * v[1]};
}

double Manufactured::pressure(double x, double y, double t) const {
  return psi(t) * std::cos(pi * x) * std::cos(pi * y);
}

Vec2 Manufactured::forcing(double x, double y, double t) const {
  const double sx = std::sin(pi * x), sy = std::sin(pi * y);
  const double s2x = std::sin(2 * pi * x), s2y = std::sin(2 * pi * y);
  const double c2x = std::cos(2 * pi * x), c2y = std::cos(2 * pi * y);

  const double U1 = sx * sx * s2y, U2 = -s2x * sy * sy;
  const double U1x = pi * s2x * s2y, U1y = 2 * pi * sx * sx * c2y;
  const double U2x = -2 * pi * c2x * sy * sy, U2y = -pi * s2x * s2y;
  const double lapU1 = 2 * pi * pi * c2x * s2y - 4 * pi * pi * sx * sx * s2y;
  const double lapU2 = 4 * pi * pi * s2x * sy * sy - 2 * pi * pi * s2x * c2y;

  const double p = psi(t);
  const double px = -pi * p * std::sin(pi * x) * std::cos(pi * y);
  const double py = -pi * p * std::cos(pi * x) * std::sin(pi * y);
  return {rate * U1 + p * p * (U1 * U1x + U2 * U1y) + px - nu * p * lapU1,
          rate * U2 + p * p * (U1 * U2x + U2 * U2y) + py - nu * p * lapU2};
}

}  // namespace analytic

// ---------------------------------------------------------------------------
// Boundary models

BoundaryData BoundaryModel::normal_flux_rate(const Grid2D& g, double) const {
  return BoundaryData(g, BoundaryKind::Neumann);
}

ScalarField BoundaryModel::divergence(const Grid2D& g, double) const { return ScalarField(g); }

ScalarField BoundaryModel::divergence_rate(const Grid2D& g, double) const {
  return ScalarField(g);
}

namespace {

class HomogeneousBoundary final : public BoundaryModel {
 public:
  VectorField velocity(const Grid2D& g, double) const override { return VectorField(g); }
  bool homogeneous() const override { return true; }
};

// Tangential lid: u = (U, 0) on the top side, zero elsewhere; the two top
// corners belong to the walls.
class LidBoundary final : public BoundaryModel {
 public:
  LidBoundary(double speed, bool regularized) : speed_(speed), regularized_(regularized) {}
  VectorField velocity(const Grid2D& g, double) const override {
    VectorField v(g);
    for (int i = 1; i < g.nx(); ++i) {
      const double x = g.x(i);
      v.u1(i, g.ny()) = regularized_ ? speed_ * 16.0 * x * x * (1 - x) * (1 - x) : speed_;
    }
    return v;
  }

 private:
  double speed_;
  bool regularized_;
};

// Prescribed divergence h = t cos(pi x) with the normal flux g = (t sin(pi y), 0)
// through the two vertical sides. Both integrate to zero, so the data are
// compatible at every t.
class ManufacturedFluxBoundary final : public BoundaryModel {
 public:
  VectorField velocity(const Grid2D& g, double t) const override {
    VectorField v(g);
    for (int j = 0; j <= g.ny(); ++j) {
      const double s = t * std::sin(pi * g.y(j));
      v.u1(0, j) = s;
      v.u1(g.nx(), j) = s;
    }
    return v;
  }
  BoundaryData normal_flux_rate(const Grid2D& g, double) const override {
    BoundaryData b(g, BoundaryKind::Neumann);
    auto left = b.side(Side::Left);
    auto right = b.side(Side::Right);
    for (int j = 0; j <= g.ny(); ++j) {
      left[j] = -std::sin(pi * g.y(j));
      right[j] = std::sin(pi * g.y(j));
    }
    return b;
  }
  ScalarField divergence(const Grid2D& g, double t) const override {
    return ScalarField::sample(g, [t](double x, double) { return t * std::cos(pi * x); });
  }
  ScalarField divergence_rate(const Grid2D& g, double) const override {
    return ScalarField::sample(g, [](double x, double) { return std::cos(pi * x); });
  }
};

}  // namespace

std::unique_ptr<BoundaryModel> make_boundary_model(const BoundaryPreset& preset) {
  if (preset.id == "homogeneous") return std::make_unique<HomogeneousBoundary>();
  if (preset.id == "lid") {
    if (preset.profile != "uniform" && preset.profile != "regularized")
      throw ArgumentError("unknown lid profile '" + preset.profile + "'");
    return std::make_unique<LidBoundary>(preset.speed, preset.profile == "regularized");
  }
  if (preset.id == "manufactured") return std::make_unique<ManufacturedFluxBoundary>();
  throw ArgumentError("unknown boundary preset '" + preset.id + "'");
}

ForcingSampler make_forcing(const ForcingPreset& preset, double nu) {
  if (preset.id == "zero") return {[](double, double, double) { return Vec2{0.0, 0.0}; }};
  if (preset.id == "uniform") {
    const Vec2 v = preset.value;
    return {[v](double, double, double) { return v; }};
  }
  if (preset.id == "manufactured") {
    analytic::Manufactured m{nu};
    return {[m](double x, double y, double t) { return m.forcing(x, y, t); }};
  }
  throw ArgumentError("unknown forcing preset '" + preset.id + "'");
}

VectorField make_initial_velocity(const InitialPreset& preset, const Grid2D& grid, double nu) {
  const double a = preset.amplitude;
  if (preset.id == "zero") return VectorField(grid);
  if (preset.id == "vortex")
    return VectorField::sample(grid, [a](double x, double y) {
      const Vec2 v = analytic::vortex(x, y);
      return Vec2{a * v[0], a * v[1]};
    });
  if (preset.id == "manufactured") {
    analytic::Manufactured m{nu};
    return VectorField::sample(grid, [m](double x, double y) { return m.velocity(x, y, 0.0); });
  }
  if (preset.id == "divergence-mode")
    // div u = a cos(pi x) sin(pi y); zero on every side.
    return VectorField::sample(grid, [a](double x, double y) {
      return Vec2{a / pi * std::sin(pi * x) * std::sin(pi * y), 0.0};
    });
  throw ArgumentError("unknown initial-condition preset '" + preset.id + "'");
}

}  // namespace uns2d
