#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace uns2d {

/// Uniform node-based grid on the unit square. Nodes sit at (i*hx, j*hy)
/// for 0 <= i <= nx, 0 <= j <= ny; storage is row-major with j outer.
class Grid2D {
 public:
  static constexpr int kMinCells = 8;

  Grid2D(int nx, int ny);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double hx() const noexcept { return 1.0 / nx_; }
  double hy() const noexcept { return 1.0 / ny_; }
  double x(int i) const noexcept { return i * hx(); }
  double y(int j) const noexcept { return j * hy(); }

  std::size_t node_count() const noexcept {
    return static_cast<std::size_t>(nx_ + 1) * static_cast<std::size_t>(ny_ + 1);
  }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_ + 1) +
           static_cast<std::size_t>(i);
  }
  bool on_boundary(int i, int j) const noexcept {
    return i == 0 || j == 0 || i == nx_ || j == ny_;
  }

  /// Trapezoidal quadrature weight of node (i, j); quarter weight at corners.
  double weight(int i, int j) const noexcept;

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  int nx_;
  int ny_;
};

class ScalarField {
 public:
  explicit ScalarField(const Grid2D& grid, double value = 0.0);
  ScalarField(const Grid2D& grid, std::vector<double> values);

  /// Samples fn(x, y) at every node.
  template <class Fn>
  static ScalarField sample(const Grid2D& grid, Fn&& fn) {
    ScalarField f(grid);
    for (int j = 0; j <= grid.ny(); ++j)
      for (int i = 0; i <= grid.nx(); ++i) f(i, j) = fn(grid.x(i), grid.y(j));
    return f;
  }

  const Grid2D& grid() const noexcept { return grid_; }
  double& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
  double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }

  bool all_finite() const noexcept;
  double max_abs() const noexcept;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s) noexcept;
  ScalarField& axpy(double a, const ScalarField& x);

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

struct VectorField {
  ScalarField u1;
  ScalarField u2;

  explicit VectorField(const Grid2D& grid) : u1(grid), u2(grid) {}
  VectorField(ScalarField a, ScalarField b);

  template <class Fn>
  static VectorField sample(const Grid2D& grid, Fn&& fn) {
    VectorField v(grid);
    for (int j = 0; j <= grid.ny(); ++j)
      for (int i = 0; i <= grid.nx(); ++i) {
        const auto [a, b] = fn(grid.x(i), grid.y(j));
        v.u1(i, j) = a;
        v.u2(i, j) = b;
      }
    return v;
  }

  const Grid2D& grid() const noexcept { return u1.grid(); }
  bool all_finite() const noexcept { return u1.all_finite() && u2.all_finite(); }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s) noexcept;
  VectorField& axpy(double a, const VectorField& x);
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

enum class Side { Left = 0, Right = 1, Bottom = 2, Top = 3 };
inline constexpr std::array<Side, 4> kSides{Side::Left, Side::Right, Side::Bottom, Side::Top};

enum class BoundaryKind { Dirichlet, Neumann };

/// Nodal values on the four sides. Left/right sides are indexed by j
/// (ny+1 entries), bottom/top by i (nx+1 entries); the corner nodes appear
/// in both adjacent sides. Neumann data is the outward normal derivative.
class BoundaryData {
 public:
  BoundaryData(const Grid2D& grid, BoundaryKind kind);

  /// Reads the boundary trace of a field.
  static BoundaryData trace(const ScalarField& f, BoundaryKind kind = BoundaryKind::Dirichlet);

  const Grid2D& grid() const noexcept { return grid_; }
  BoundaryKind kind() const noexcept { return kind_; }

  std::span<double> side(Side s) noexcept { return sides_[static_cast<int>(s)]; }
  std::span<const double> side(Side s) const noexcept { return sides_[static_cast<int>(s)]; }

  /// Node (i, j) of side s at position k along the side.
  std::array<int, 2> node(Side s, int k) const noexcept;
  /// Outward unit normal of side s.
  static std::array<double, 2> normal(Side s) noexcept;
  static bool is_corner_position(const Grid2D& g, Side s, int k) noexcept;

  /// Trapezoidal boundary integral: each side integrated separately, corners
  /// at half weight within each side.
  double integral() const noexcept;
  double perimeter() const noexcept { return 4.0; }
  void add_constant(double c) noexcept;
  bool all_finite() const noexcept;
  double max_abs() const noexcept;

 private:
  Grid2D grid_;
  BoundaryKind kind_;
  std::array<std::vector<double>, 4> sides_;
};

/// Trapezoidal approximation of the integral of a*b over the unit square.
double inner_product(const ScalarField& a, const ScalarField& b);
double inner_product(const VectorField& a, const VectorField& b);
double integral(const ScalarField& a);
/// Trapezoid-weighted mean (integral over unit area).
double mean(const ScalarField& a);
double norm_l2(const ScalarField& a);
double norm_l2(const VectorField& a);
/// L2 norm restricted to interior nodes (boundary nodes carry zero weight).
double norm_l2_interior(const ScalarField& a);

struct FieldNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double max_div = 0.0;
};

/// l2 = ||u||, h1_semi = ||grad u|| (grad_h stencils), max_div = max |div_h u|.
FieldNorms norms(const VectorField& u);

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what);

}  // namespace uns2d
