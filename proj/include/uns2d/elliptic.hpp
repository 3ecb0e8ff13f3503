#pragma once

#include <memory>
#include <vector>

#include "uns2d/grid.hpp"

namespace uns2d {

/// Fast solver for Dirichlet problems (sigma*I - kappa*Lap_h) v = rhs on the
/// interior nodes, Lap_h the 5-point Laplacian, diagonalized by the type-I
/// sine transform. Immutable after construction; solves are thread-safe.
class DirichletPlan {
 public:
  explicit DirichletPlan(const Grid2D& grid);
  ~DirichletPlan();
  DirichletPlan(const DirichletPlan&) = delete;
  DirichletPlan& operator=(const DirichletPlan&) = delete;

  const Grid2D& grid() const noexcept { return grid_; }

  /// Discrete eigenvalue of -Lap_h for mode (i, j), 1 <= i < nx, 1 <= j < ny.
  double eigenvalue(int i, int j) const noexcept { return lx_[i - 1] + ly_[j - 1]; }

  /// Solves (sigma*I - kappa*Lap_h) v = rhs at interior nodes with v = g on
  /// the boundary. Requires sigma >= 0, kappa >= 0, sigma + kappa > 0.
  ScalarField solve(double sigma, double kappa, const ScalarField& rhs,
                    const BoundaryData& g) const;

 private:
  Grid2D grid_;
  std::vector<double> lx_, ly_;
  void* plan_ = nullptr;  // fftw_plan
};

/// (I - alpha*Lap_h) v = rhs, v = g on the boundary. alpha = 0 returns rhs
/// on the interior. Throws ArgumentError for alpha < 0 or grid mismatch.
ScalarField solve_dirichlet_helmholtz(const DirichletPlan& plan, double alpha,
                                      const ScalarField& rhs, const BoundaryData& g);

/// -Lap_h v = rhs at interior nodes, v = g on the boundary.
ScalarField solve_dirichlet_poisson(const DirichletPlan& plan, const ScalarField& rhs,
                                    const BoundaryData& g);

struct NeumannSolution {
  ScalarField p;
  /// Constant removed from the right-hand side to make the system solvable:
  /// (integral of rhs - boundary integral of g) / |Omega|.
  double compat_correction = 0.0;
};

/// Fast solver for the Neumann problem Lap_h p = rhs on all nodes, with the
/// outward normal derivative imposed by ghost-node reflection. Diagonalized
/// by the type-I cosine transform.
class NeumannPlan {
 public:
  explicit NeumannPlan(const Grid2D& grid);
  ~NeumannPlan();
  NeumannPlan(const NeumannPlan&) = delete;
  NeumannPlan& operator=(const NeumannPlan&) = delete;

  const Grid2D& grid() const noexcept { return grid_; }

  /// Eigenvalue of -Lap_h for cosine mode (i, j), 0 <= i <= nx, 0 <= j <= ny.
  /// Only (0, 0) vanishes.
  double eigenvalue(int i, int j) const noexcept { return mx_[i] + my_[j]; }

  /// Applies the ghost-reflection operator: returns Lap_h p with the normal
  /// derivative g folded into the boundary rows.
  ScalarField apply(const ScalarField& p, const BoundaryData& g) const;

  NeumannSolution solve(const ScalarField& rhs, const BoundaryData& g) const;

 private:
  Grid2D grid_;
  std::vector<double> mx_, my_;
  void* plan_ = nullptr;  // fftw_plan
};

/// Zero-mean solution of Lap_h p = rhs - c, n.grad p = g (ghost reflection).
NeumannSolution solve_neumann_poisson(const NeumannPlan& plan, const ScalarField& rhs,
                                      const BoundaryData& g);

/// Exact discrete gradient projector. For a vector field a it finds the
/// zero-mean phi minimizing ||a - grad_h phi|| in the trapezoidal inner
/// product, i.e. it solves G^T W G phi = G^T W a with G = grad_h. The
/// operator is a sum of Kronecker products of 1D matrices and is diagonalized
/// by 1D generalized eigenvectors (fast diagonalization).
class GradientProjector {
 public:
  explicit GradientProjector(const Grid2D& grid);
  ~GradientProjector();
  GradientProjector(GradientProjector&&) noexcept;
  GradientProjector& operator=(GradientProjector&&) noexcept;

  const Grid2D& grid() const noexcept { return grid_; }

  ScalarField potential(const VectorField& a) const;

 private:
  struct Impl;
  Grid2D grid_;
  std::unique_ptr<Impl> impl_;
};

/// All solver plans for one grid.
struct SolverPlans {
  explicit SolverPlans(const Grid2D& g) : grid(g), dirichlet(g), neumann(g), projector(g) {}
  Grid2D grid;
  DirichletPlan dirichlet;
  NeumannPlan neumann;
  GradientProjector projector;
};

// ---------------------------------------------------------------------------
// Dense oracles: assemble the same discrete systems as full matrices and
// solve by direct factorization. Limited to nx, ny <= kDenseOracleMaxCells.

inline constexpr int kDenseOracleMaxCells = 32;

ScalarField dense_dirichlet_solve(double sigma, double kappa, const ScalarField& rhs,
                                  const BoundaryData& g);

/// Solves the bordered system [A 1; w^T 0][p; c] = [b; 0], whose multiplier c
/// is the compatibility correction.
NeumannSolution dense_neumann_solve(const ScalarField& rhs, const BoundaryData& g);

/// Potential of the trapezoid-orthogonal gradient projection, via the
/// assembled normal equations.
ScalarField dense_projection_potential(const VectorField& a);

}  // namespace uns2d
