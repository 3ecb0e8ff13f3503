#include "uns2d/elliptic.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cmath>
#include <mutex>
#include <numbers>

#include "uns2d/error.hpp"

namespace uns2d {
namespace {

// The FFTW planner is not re-entrant; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : ptr(fftw_alloc_real(n)) {
    if (!ptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  double* ptr;
};

fftw_plan make_r2r_plan(int rows, int cols, fftw_r2r_kind kind) {
  std::lock_guard lock(planner_mutex());
  FftwBuffer scratch(static_cast<std::size_t>(rows) * cols);
  fftw_plan p = fftw_plan_r2r_2d(rows, cols, scratch.ptr, scratch.ptr, kind, kind,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw Error("FFTW failed to create a transform plan");
  return p;
}

void destroy_plan(void* p) {
  if (!p) return;
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(p));
}

// Eigenvalues of the 1D second-difference operator, (2/h^2)(1 - cos(k*pi/n)).
double mode_eigenvalue(int k, int n, double h) {
  return 2.0 / (h * h) * (1.0 - std::cos(k * std::numbers::pi / n));
}

}  // namespace

// ---------------------------------------------------------------------------
// Dirichlet

DirichletPlan::DirichletPlan(const Grid2D& grid) : grid_(grid) {
  for (int i = 1; i < grid.nx(); ++i) lx_.push_back(mode_eigenvalue(i, grid.nx(), grid.hx()));
  for (int j = 1; j < grid.ny(); ++j) ly_.push_back(mode_eigenvalue(j, grid.ny(), grid.hy()));
  plan_ = make_r2r_plan(grid.ny() - 1, grid.nx() - 1, FFTW_RODFT00);
}

DirichletPlan::~DirichletPlan() { destroy_plan(plan_); }

ScalarField DirichletPlan::solve(double sigma, double kappa, const ScalarField& rhs,
                                 const BoundaryData& g) const {
  require_same_grid(grid_, rhs.grid(), "DirichletPlan::solve(rhs)");
  require_same_grid(grid_, g.grid(), "DirichletPlan::solve(g)");
  if (!(sigma >= 0.0) || !(kappa >= 0.0) || !(sigma + kappa > 0.0))
    throw ArgumentError("DirichletPlan::solve: need sigma >= 0, kappa >= 0, sigma + kappa > 0");

  const int nx = grid_.nx(), ny = grid_.ny();
  const int mx = nx - 1, my = ny - 1;
  ScalarField v(grid_);
  // Boundary nodes; the vertical sides are written last so they own corners.
  for (Side s : {Side::Bottom, Side::Top, Side::Left, Side::Right}) {
    auto vals = g.side(s);
    for (int k = 0; k < static_cast<int>(vals.size()); ++k) {
      const auto [i, j] = g.node(s, k);
      v(i, j) = vals[k];
    }
  }

  const double cx = kappa / (grid_.hx() * grid_.hx());
  const double cy = kappa / (grid_.hy() * grid_.hy());
  FftwBuffer buf(static_cast<std::size_t>(mx) * my);
  double* b = buf.ptr;
  for (int j = 1; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      double r = rhs(i, j);
      if (i == 1) r += cx * v(0, j);
      if (i == nx - 1) r += cx * v(nx, j);
      if (j == 1) r += cy * v(i, 0);
      if (j == ny - 1) r += cy * v(i, ny);
      b[(j - 1) * mx + (i - 1)] = r;
    }

  auto* plan = static_cast<fftw_plan>(plan_);
  fftw_execute_r2r(plan, b, b);
  const double norm = 1.0 / (4.0 * nx * ny);
  for (int j = 0; j < my; ++j)
    for (int i = 0; i < mx; ++i) b[j * mx + i] *= norm / (sigma + kappa * (lx_[i] + ly_[j]));
  fftw_execute_r2r(plan, b, b);

  for (int j = 1; j < ny; ++j)
    for (int i = 1; i < nx; ++i) v(i, j) = b[(j - 1) * mx + (i - 1)];
  return v;
}

ScalarField solve_dirichlet_helmholtz(const DirichletPlan& plan, double alpha,
                                      const ScalarField& rhs, const BoundaryData& g) {
  if (!(alpha >= 0.0))
    throw ArgumentError("solve_dirichlet_helmholtz: alpha must be >= 0");
  return plan.solve(1.0, alpha, rhs, g);
}

ScalarField solve_dirichlet_poisson(const DirichletPlan& plan, const ScalarField& rhs,
                                    const BoundaryData& g) {
  return plan.solve(0.0, 1.0, rhs, g);
}

// ---------------------------------------------------------------------------
// Neumann

NeumannPlan::NeumannPlan(const Grid2D& grid) : grid_(grid) {
  for (int i = 0; i <= grid.nx(); ++i) mx_.push_back(mode_eigenvalue(i, grid.nx(), grid.hx()));
  for (int j = 0; j <= grid.ny(); ++j) my_.push_back(mode_eigenvalue(j, grid.ny(), grid.hy()));
  mx_[0] = 0.0;
  my_[0] = 0.0;
  plan_ = make_r2r_plan(grid.ny() + 1, grid.nx() + 1, FFTW_REDFT00);
}

NeumannPlan::~NeumannPlan() { destroy_plan(plan_); }

namespace {

// Moves the ghost-node contributions 2g/h of the Neumann data to the
// right-hand side: b = rhs - 2g/h on each boundary row.
void fold_neumann_data(const Grid2D& grid, const BoundaryData& g, ScalarField& b) {
  for (Side s : kSides) {
    const double h = (s == Side::Left || s == Side::Right) ? grid.hx() : grid.hy();
    auto vals = g.side(s);
    for (int k = 0; k < static_cast<int>(vals.size()); ++k) {
      const auto [i, j] = g.node(s, k);
      b(i, j) -= 2.0 * vals[k] / h;
    }
  }
}

}  // namespace

ScalarField NeumannPlan::apply(const ScalarField& p, const BoundaryData& g) const {
  require_same_grid(grid_, p.grid(), "NeumannPlan::apply(p)");
  require_same_grid(grid_, g.grid(), "NeumannPlan::apply(g)");
  const int nx = grid_.nx(), ny = grid_.ny();
  const double ihx2 = 1.0 / (grid_.hx() * grid_.hx());
  const double ihy2 = 1.0 / (grid_.hy() * grid_.hy());
  ScalarField out(grid_);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const double west = i > 0 ? p(i - 1, j) : p(i + 1, j);
      const double east = i < nx ? p(i + 1, j) : p(i - 1, j);
      const double south = j > 0 ? p(i, j - 1) : p(i, j + 1);
      const double north = j < ny ? p(i, j + 1) : p(i, j - 1);
      out(i, j) = (west - 2.0 * p(i, j) + east) * ihx2 + (south - 2.0 * p(i, j) + north) * ihy2;
    }
  // Ghost values carry +2h*g, which adds 2g/h.
  ScalarField zero(grid_);
  fold_neumann_data(grid_, g, zero);
  out -= zero;
  return out;
}

NeumannSolution NeumannPlan::solve(const ScalarField& rhs, const BoundaryData& g) const {
  require_same_grid(grid_, rhs.grid(), "NeumannPlan::solve(rhs)");
  require_same_grid(grid_, g.grid(), "NeumannPlan::solve(g)");
  const int nx = grid_.nx(), ny = grid_.ny();

  ScalarField b = rhs;
  fold_neumann_data(grid_, g, b);
  // The trapezoid weights span the left null space of the ghost operator,
  // so the weighted mean of b is exactly the incompatibility.
  const double c = integral(b);
  for (double& v : b.values()) v -= c;

  FftwBuffer buf(grid_.node_count());
  double* w = buf.ptr;
  std::copy(b.values().begin(), b.values().end(), w);
  auto* plan = static_cast<fftw_plan>(plan_);
  fftw_execute_r2r(plan, w, w);
  const double norm = 1.0 / (4.0 * nx * ny);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const double mu = mx_[i] + my_[j];
      w[j * (nx + 1) + i] = (i == 0 && j == 0) ? 0.0 : -w[j * (nx + 1) + i] * norm / mu;
    }
  fftw_execute_r2r(plan, w, w);

  NeumannSolution sol{ScalarField(grid_), c};
  std::copy(w, w + grid_.node_count(), sol.p.data());
  return sol;
}

NeumannSolution solve_neumann_poisson(const NeumannPlan& plan, const ScalarField& rhs,
                                      const BoundaryData& g) {
  return plan.solve(rhs, g);
}

// ---------------------------------------------------------------------------
// Gradient projector

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// 1D derivative matrix matching dx_h/dy_h: centered inside, 3-point one-sided
// at the ends.
Eigen::MatrixXd derivative_matrix(int n, double h) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 1, n + 1);
  const double s = 0.5 / h;
  d(0, 0) = -3.0 * s;
  d(0, 1) = 4.0 * s;
  d(0, 2) = -s;
  for (int k = 1; k < n; ++k) {
    d(k, k - 1) = -s;
    d(k, k + 1) = s;
  }
  d(n, n) = 3.0 * s;
  d(n, n - 1) = -4.0 * s;
  d(n, n - 2) = s;
  return d;
}

Eigen::VectorXd trapezoid_weights(int n, double h) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n + 1, h);
  w(0) = w(n) = 0.5 * h;
  return w;
}

struct Axis {
  Eigen::MatrixXd d;        // derivative
  Eigen::SparseMatrix<double, Eigen::RowMajor> ds;  // same, sparse
  Eigen::VectorXd w;        // trapezoid weights
  Eigen::MatrixXd v;        // generalized eigenvectors, V^T W V = I
  Eigen::VectorXd lambda;   // eigenvalues, ascending, lambda(0) = 0

  Axis(int n, double h) : d(derivative_matrix(n, h)), w(trapezoid_weights(n, h)) {
    const Eigen::MatrixXd k = d.transpose() * w.asDiagonal() * d;
    const Eigen::MatrixXd m = w.asDiagonal();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k, m);
    if (es.info() != Eigen::Success) throw Error("GradientProjector: eigensolver failed");
    v = es.eigenvectors();
    lambda = es.eigenvalues();
    lambda(0) = 0.0;  // the constant vector; anything else is bounded away from 0
    ds = d.sparseView();
  }
};

}  // namespace

struct GradientProjector::Impl {
  Axis x, y;
  RowMatrix inv_eig;  // 1/(lambda_y(j) + lambda_x(i)), zero for the constant mode
  Impl(const Grid2D& g) : x(g.nx(), g.hx()), y(g.ny(), g.hy()) {
    inv_eig.resize(g.ny() + 1, g.nx() + 1);
    for (int j = 0; j <= g.ny(); ++j)
      for (int i = 0; i <= g.nx(); ++i)
        inv_eig(j, i) = (i == 0 && j == 0) ? 0.0 : 1.0 / (y.lambda(j) + x.lambda(i));
  }
};

GradientProjector::GradientProjector(const Grid2D& grid)
    : grid_(grid), impl_(std::make_unique<Impl>(grid)) {}
GradientProjector::~GradientProjector() = default;
GradientProjector::GradientProjector(GradientProjector&&) noexcept = default;
GradientProjector& GradientProjector::operator=(GradientProjector&&) noexcept = default;

ScalarField GradientProjector::potential(const VectorField& a) const {
  require_same_grid(grid_, a.grid(), "GradientProjector::potential");
  const int rows = grid_.ny() + 1, cols = grid_.nx() + 1;
  using Map = Eigen::Map<const RowMatrix>;
  const Map a1(a.u1.data(), rows, cols);
  const Map a2(a.u2.data(), rows, cols);
  const auto& x = impl_->x;
  const auto& y = impl_->y;

  // b = Gx^T W a1 + Gy^T W a2, with Gx acting along rows and Gy along columns.
  const RowMatrix wa1 = y.w.asDiagonal() * a1 * x.w.asDiagonal();
  const RowMatrix wa2 = y.w.asDiagonal() * a2 * x.w.asDiagonal();
  const RowMatrix b = wa1 * x.ds + RowMatrix(y.ds.transpose() * wa2);

  RowMatrix c = y.v.transpose() * b * x.v;
  c.array() *= impl_->inv_eig.array();
  const RowMatrix phi = y.v * c * x.v.transpose();

  ScalarField out(grid_);
  Eigen::Map<RowMatrix>(out.data(), rows, cols) = phi;
  return out;
}

// ---------------------------------------------------------------------------
// Dense oracles

namespace {

void require_oracle_size(const Grid2D& g, const char* what) {
  if (g.nx() > kDenseOracleMaxCells || g.ny() > kDenseOracleMaxCells)
    throw ArgumentError(std::string(what) + ": grid too large for the dense oracle (max " +
                        std::to_string(kDenseOracleMaxCells) + " cells per side)");
}

}  // namespace

ScalarField dense_dirichlet_solve(double sigma, double kappa, const ScalarField& rhs,
                                  const BoundaryData& g) {
  const Grid2D& grid = rhs.grid();
  require_oracle_size(grid, "dense_dirichlet_solve");
  require_same_grid(grid, g.grid(), "dense_dirichlet_solve");
  const int nx = grid.nx(), ny = grid.ny();
  const int mx = nx - 1, my = ny - 1;
  const int n = mx * my;

  ScalarField v(grid);
  for (Side s : {Side::Bottom, Side::Top, Side::Left, Side::Right}) {
    auto vals = g.side(s);
    for (int k = 0; k < static_cast<int>(vals.size()); ++k) {
      const auto [i, j] = g.node(s, k);
      v(i, j) = vals[k];
    }
  }

  const double cx = kappa / (grid.hx() * grid.hx());
  const double cy = kappa / (grid.hy() * grid.hy());
  auto id = [&](int i, int j) { return (j - 1) * mx + (i - 1); };
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b(n);
  for (int j = 1; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const int r = id(i, j);
      a(r, r) = sigma + 2.0 * cx + 2.0 * cy;
      b(r) = rhs(i, j);
      const int ni[4] = {i - 1, i + 1, i, i};
      const int nj[4] = {j, j, j - 1, j + 1};
      for (int q = 0; q < 4; ++q) {
        const double coef = q < 2 ? cx : cy;
        if (grid.on_boundary(ni[q], nj[q]))
          b(r) += coef * v(ni[q], nj[q]);
        else
          a(r, id(ni[q], nj[q])) -= coef;
      }
    }
  const Eigen::VectorXd sol = a.partialPivLu().solve(b);
  for (int j = 1; j < ny; ++j)
    for (int i = 1; i < nx; ++i) v(i, j) = sol(id(i, j));
  return v;
}

NeumannSolution dense_neumann_solve(const ScalarField& rhs, const BoundaryData& g) {
  const Grid2D& grid = rhs.grid();
  require_oracle_size(grid, "dense_neumann_solve");
  require_same_grid(grid, g.grid(), "dense_neumann_solve");
  const int nx = grid.nx(), ny = grid.ny();
  const int n = static_cast<int>(grid.node_count());
  const double ihx2 = 1.0 / (grid.hx() * grid.hx());
  const double ihy2 = 1.0 / (grid.hy() * grid.hy());

  // Ghost reflection: p(-1) = p(1) + 2h g, so the boundary row sees 2*p(1)
  // and the data moves to the right-hand side as -2g/h.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const int r = static_cast<int>(grid.index(i, j));
      a(r, r) = -2.0 * ihx2 - 2.0 * ihy2;
      const int w = i > 0 ? i - 1 : i + 1, e = i < nx ? i + 1 : i - 1;
      const int s = j > 0 ? j - 1 : j + 1, nn = j < ny ? j + 1 : j - 1;
      a(r, grid.index(w, j)) += ihx2;
      a(r, grid.index(e, j)) += ihx2;
      a(r, grid.index(i, s)) += ihy2;
      a(r, grid.index(i, nn)) += ihy2;
      a(r, n) = 1.0;  // multiplier column
      a(n, r) = grid.weight(i, j);
      b(r) = rhs(i, j);
    }
  for (Side side : kSides) {
    const double h = (side == Side::Left || side == Side::Right) ? grid.hx() : grid.hy();
    auto vals = g.side(side);
    for (int k = 0; k < static_cast<int>(vals.size()); ++k) {
      const auto [i, j] = g.node(side, k);
      b(grid.index(i, j)) -= 2.0 * vals[k] / h;
    }
  }
  const Eigen::VectorXd sol = a.partialPivLu().solve(b);
  NeumannSolution out{ScalarField(grid), sol(n)};
  for (int k = 0; k < n; ++k) out.p.data()[k] = sol(k);
  return out;
}

ScalarField dense_projection_potential(const VectorField& a) {
  const Grid2D& grid = a.grid();
  require_oracle_size(grid, "dense_projection_potential");
  const int nx = grid.nx(), ny = grid.ny();
  const int n = static_cast<int>(grid.node_count());

  // Assemble G = [Gx; Gy] node by node from the 1D stencils.
  auto stencil = [](int k, int last, double h, int (&idx)[3], double (&c)[3]) {
    const double s = 0.5 / h;
    if (k == 0) {
      idx[0] = 0, idx[1] = 1, idx[2] = 2;
      c[0] = -3 * s, c[1] = 4 * s, c[2] = -s;
    } else if (k == last) {
      idx[0] = last, idx[1] = last - 1, idx[2] = last - 2;
      c[0] = 3 * s, c[1] = -4 * s, c[2] = s;
    } else {
      idx[0] = k - 1, idx[1] = k + 1, idx[2] = k;
      c[0] = -s, c[1] = s, c[2] = 0.0;
    }
  };
  Eigen::MatrixXd gmat = Eigen::MatrixXd::Zero(2 * n, n);
  Eigen::VectorXd wts(2 * n), av(2 * n);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const int r = static_cast<int>(grid.index(i, j));
      int idx[3];
      double c[3];
      stencil(i, nx, grid.hx(), idx, c);
      for (int q = 0; q < 3; ++q) gmat(r, grid.index(idx[q], j)) += c[q];
      stencil(j, ny, grid.hy(), idx, c);
      for (int q = 0; q < 3; ++q) gmat(n + r, grid.index(i, idx[q])) += c[q];
      wts(r) = wts(n + r) = grid.weight(i, j);
      av(r) = a.u1(i, j);
      av(n + r) = a.u2(i, j);
    }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  m.topLeftCorner(n, n) = gmat.transpose() * wts.asDiagonal() * gmat;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  b.head(n) = gmat.transpose() * (wts.asDiagonal() * av);
  for (int k = 0; k < n; ++k) {
    m(k, n) = wts(k);
    m(n, k) = wts(k);
  }
  const Eigen::VectorXd sol = m.partialPivLu().solve(b);
  ScalarField out(grid);
  for (int k = 0; k < n; ++k) out.data()[k] = sol(k);
  return out;
}

}  // namespace uns2d
