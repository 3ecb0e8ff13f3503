#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include "uns2d/experiments.hpp"
#include "uns2d/grid.hpp"
#include "uns2d/ops.hpp"

namespace testing {

using namespace uns2d;

inline constexpr double pi = 3.14159265358979323846;

inline double max_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k)
    m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

inline double max_diff(const VectorField& a, const VectorField& b) {
  return std::max(max_diff(a.u1, b.u1), max_diff(a.u2, b.u2));
}

/// Max difference over interior nodes only.
inline double max_diff_interior(const ScalarField& a, const ScalarField& b) {
  const Grid2D& g = a.grid();
  double m = 0.0;
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline ScalarField random_field(const Grid2D& g, std::uint64_t seed) {
  UniformStream rng(seed);
  ScalarField f(g);
  for (double& v : f.values()) v = rng.next();
  return f;
}

inline VectorField random_vector(const Grid2D& g, std::uint64_t seed) {
  return VectorField(random_field(g, seed), random_field(g, seed + 1000003));
}

inline BoundaryData random_boundary(const Grid2D& g, BoundaryKind kind, std::uint64_t seed) {
  UniformStream rng(seed);
  BoundaryData b(g, kind);
  for (Side s : kSides)
    for (double& v : b.side(s)) v = rng.next();
  // Shared corner nodes must agree for Dirichlet data.
  if (kind == BoundaryKind::Dirichlet) {
    auto l = b.side(Side::Left), r = b.side(Side::Right);
    auto bo = b.side(Side::Bottom), t = b.side(Side::Top);
    bo.front() = l.front();
    bo.back() = r.front();
    t.front() = l.back();
    t.back() = r.back();
  }
  return b;
}

/// Zeroes the n outermost node layers.
inline void clear_collar(ScalarField& f, int layers) {
  const Grid2D& g = f.grid();
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i)
      if (i < layers || j < layers || i > g.nx() - layers || j > g.ny() - layers) f(i, j) = 0.0;
}

inline std::string temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("uns2d_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

inline std::string read_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return {};
  std::string out;
  char buf[65536];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  std::fclose(f);
  return out;
}

}  // namespace testing
