#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "uns2d/grid.hpp"

namespace uns2d {

using Vec2 = std::array<double, 2>;

/// f(x, y, t) per component.
using VectorFunction = std::function<Vec2(double x, double y, double t)>;

struct ForcingSampler {
  VectorFunction f;
  /// Gauss-Legendre points used for the interval average (1..3).
  int quadrature_order = 3;
};

/// Interval average (1/dt) * integral of f over [n*dt, (n+1)*dt], by
/// Gauss-Legendre quadrature in time, sampled at the nodes.
VectorField average_forcing(const ForcingSampler& sampler, long n, double dt, const Grid2D& grid);

// Analytic fields used by presets, experiments and tests.
namespace analytic {

/// Divergence-free no-slip field (sin^2(pi x) sin(2 pi y), -sin(2 pi x) sin^2(pi y)),
/// the perpendicular gradient of sin^2(pi x) sin^2(pi y) / pi.
Vec2 vortex(double x, double y);

/// Manufactured solution u* = psi(t) * vortex, p* = psi(t) cos(pi x) cos(pi y),
/// psi(t) = 1 + t/2, and the forcing that makes it an exact solution:
/// f = dt u* + (u*.grad) u* + grad p* - nu Lap u*.
struct Manufactured {
  double nu = 1.0;
  /// Rate in psi(t) = 1 + rate * t; 0 gives a steady solution.
  double rate = 0.5;

  double psi(double t) const { return 1.0 + rate * t; }
  Vec2 velocity(double x, double y, double t) const;
  double pressure(double x, double y, double t) const;
  Vec2 forcing(double x, double y, double t) const;
};

}  // namespace analytic

struct ForcingPreset {
  std::string id = "zero";  // zero | uniform | manufactured
  Vec2 value{0.0, 0.0};     // uniform
};

struct InitialPreset {
  std::string id = "zero";  // zero | vortex | manufactured | divergence-mode
  double amplitude = 1.0;
};

struct BoundaryPreset {
  std::string id = "homogeneous";  // homogeneous | lid | manufactured
  double speed = 1.0;              // lid
  /// Lid profile: "uniform" (U on the whole top side) or "regularized"
  /// (U * 16 x^2 (1-x)^2, which vanishes with its slope at both corners).
  std::string profile = "uniform";
};

/// Boundary velocity g(t), its normal-flux rate dt(n.g), and the prescribed
/// divergence h(t) with dt h.
class BoundaryModel {
 public:
  virtual ~BoundaryModel() = default;
  /// Velocity on boundary nodes at time t (interior entries are ignored).
  virtual VectorField velocity(const Grid2D& g, double t) const = 0;
  /// dt(n.g) on each side.
  virtual BoundaryData normal_flux_rate(const Grid2D& g, double t) const;
  virtual ScalarField divergence(const Grid2D& g, double t) const;
  virtual ScalarField divergence_rate(const Grid2D& g, double t) const;
  /// True when g = 0 and h = 0 for all t.
  virtual bool homogeneous() const { return false; }
};

std::unique_ptr<BoundaryModel> make_boundary_model(const BoundaryPreset& preset);
ForcingSampler make_forcing(const ForcingPreset& preset, double nu);
VectorField make_initial_velocity(const InitialPreset& preset, const Grid2D& grid, double nu);

}  // namespace uns2d
