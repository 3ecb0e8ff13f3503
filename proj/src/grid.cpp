#include "uns2d/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uns2d/error.hpp"
#include "uns2d/ops.hpp"

namespace uns2d {

Grid2D::Grid2D(int nx, int ny) : nx_(nx), ny_(ny) {
  if (nx < kMinCells || ny < kMinCells)
    throw ArgumentError("Grid2D: nx and ny must be >= " + std::to_string(kMinCells) +
                        " (got " + std::to_string(nx) + "x" + std::to_string(ny) + ")");
}

double Grid2D::weight(int i, int j) const noexcept {
  double w = hx() * hy();
  if (i == 0 || i == nx_) w *= 0.5;
  if (j == 0 || j == ny_) w *= 0.5;
  return w;
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
  if (!(a == b))
    throw ArgumentError(std::string(what) + ": grid mismatch (" + std::to_string(a.nx()) + "x" +
                        std::to_string(a.ny()) + " vs " + std::to_string(b.nx()) + "x" +
                        std::to_string(b.ny()) + ")");
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(const Grid2D& grid, double value)
    : grid_(grid), values_(grid.node_count(), value) {}

ScalarField::ScalarField(const Grid2D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.node_count())
    throw ArgumentError("ScalarField: expected " + std::to_string(grid_.node_count()) +
                        " values, got " + std::to_string(values_.size()));
}

bool ScalarField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField::operator+=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField::operator-=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::axpy(double a, const ScalarField& x) {
  require_same_grid(grid_, x.grid_, "ScalarField::axpy");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += a * x.values_[k];
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

// ---------------------------------------------------------------------------
// VectorField

VectorField::VectorField(ScalarField a, ScalarField b) : u1(std::move(a)), u2(std::move(b)) {
  require_same_grid(u1.grid(), u2.grid(), "VectorField");
}

VectorField& VectorField::operator+=(const VectorField& o) {
  u1 += o.u1;
  u2 += o.u2;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  u1 -= o.u1;
  u2 -= o.u2;
  return *this;
}

VectorField& VectorField::operator*=(double s) noexcept {
  u1 *= s;
  u2 *= s;
  return *this;
}

VectorField& VectorField::axpy(double a, const VectorField& x) {
  u1.axpy(a, x.u1);
  u2.axpy(a, x.u2);
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

// ---------------------------------------------------------------------------
// BoundaryData

BoundaryData::BoundaryData(const Grid2D& grid, BoundaryKind kind) : grid_(grid), kind_(kind) {
  sides_[static_cast<int>(Side::Left)].assign(grid.ny() + 1, 0.0);
  sides_[static_cast<int>(Side::Right)].assign(grid.ny() + 1, 0.0);
  sides_[static_cast<int>(Side::Bottom)].assign(grid.nx() + 1, 0.0);
  sides_[static_cast<int>(Side::Top)].assign(grid.nx() + 1, 0.0);
}

std::array<int, 2> BoundaryData::node(Side s, int k) const noexcept {
  switch (s) {
    case Side::Left: return {0, k};
    case Side::Right: return {grid_.nx(), k};
    case Side::Bottom: return {k, 0};
    case Side::Top: return {k, grid_.ny()};
  }
  return {0, 0};
}

std::array<double, 2> BoundaryData::normal(Side s) noexcept {
  switch (s) {
    case Side::Left: return {-1.0, 0.0};
    case Side::Right: return {1.0, 0.0};
    case Side::Bottom: return {0.0, -1.0};
    case Side::Top: return {0.0, 1.0};
  }
  return {0.0, 0.0};
}

bool BoundaryData::is_corner_position(const Grid2D& g, Side s, int k) noexcept {
  const int last = (s == Side::Left || s == Side::Right) ? g.ny() : g.nx();
  return k == 0 || k == last;
}

BoundaryData BoundaryData::trace(const ScalarField& f, BoundaryKind kind) {
  BoundaryData b(f.grid(), kind);
  for (Side s : kSides) {
    auto vals = b.side(s);
    for (int k = 0; k < static_cast<int>(vals.size()); ++k) {
      const auto [i, j] = b.node(s, k);
      vals[k] = f(i, j);
    }
  }
  return b;
}

double BoundaryData::integral() const noexcept {
  double total = 0.0;
  for (Side s : kSides) {
    const auto& v = sides_[static_cast<int>(s)];
    const double h = (s == Side::Left || s == Side::Right) ? grid_.hy() : grid_.hx();
    double acc = 0.5 * (v.front() + v.back());
    for (std::size_t k = 1; k + 1 < v.size(); ++k) acc += v[k];
    total += h * acc;
  }
  return total;
}

void BoundaryData::add_constant(double c) noexcept {
  for (auto& v : sides_)
    for (double& x : v) x += c;
}

bool BoundaryData::all_finite() const noexcept {
  for (const auto& v : sides_)
    for (double x : v)
      if (!std::isfinite(x)) return false;
  return true;
}

double BoundaryData::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : sides_)
    for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// ---------------------------------------------------------------------------
// Quadrature

double inner_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  const Grid2D& g = a.grid();
  double total = 0.0;
  for (int j = 0; j <= g.ny(); ++j) {
    double row = 0.0;
    for (int i = 0; i <= g.nx(); ++i) {
      const double w = (i == 0 || i == g.nx()) ? 0.5 : 1.0;
      row += w * a(i, j) * b(i, j);
    }
    const double wy = (j == 0 || j == g.ny()) ? 0.5 : 1.0;
    total += wy * row;
  }
  return total * g.hx() * g.hy();
}

double inner_product(const VectorField& a, const VectorField& b) {
  return inner_product(a.u1, b.u1) + inner_product(a.u2, b.u2);
}

double integral(const ScalarField& a) { return inner_product(a, ScalarField(a.grid(), 1.0)); }

double mean(const ScalarField& a) { return integral(a); }

double norm_l2(const ScalarField& a) { return std::sqrt(inner_product(a, a)); }

double norm_l2(const VectorField& a) { return std::sqrt(inner_product(a, a)); }

double norm_l2_interior(const ScalarField& a) {
  const Grid2D& g = a.grid();
  double total = 0.0;
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) total += a(i, j) * a(i, j);
  return std::sqrt(total * g.hx() * g.hy());
}

FieldNorms norms(const VectorField& u) {
  FieldNorms n;
  n.l2 = norm_l2(u);
  const VectorField g1 = grad_h(u.u1);
  const VectorField g2 = grad_h(u.u2);
  n.h1_semi = std::sqrt(inner_product(g1, g1) + inner_product(g2, g2));
  n.max_div = div_h(u).max_abs();
  return n;
}

}  // namespace uns2d
