#include "doctest.h"
#include "support.hpp"
#include "uns2d/error.hpp"

using namespace testing;

TEST_SUITE("grid") {

TEST_CASE("grid geometry") {
  const Grid2D g(16, 24);
  CHECK(g.node_count() == 17u * 25u);
  CHECK(g.hx() == doctest::Approx(1.0 / 16));
  CHECK(g.y(24) == doctest::Approx(1.0));
  CHECK(g.index(3, 2) == 2u * 17u + 3u);
  CHECK_THROWS_AS(Grid2D(7, 16), ArgumentError);
  CHECK_THROWS_AS(Grid2D(16, 4), ArgumentError);
  double total = 0.0;
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) total += g.weight(i, j);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(g.weight(0, 0) == doctest::Approx(0.25 / (16 * 24)));
}

TEST_CASE("inner product of ones is the area") {
  for (int n : {8, 13, 64}) {
    const Grid2D g(n, n + 3);
    const ScalarField one(g, 1.0);
    CHECK(inner_product(one, one) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("inner product with x is one half") {
  const Grid2D g(32, 32);
  const ScalarField one(g, 1.0);
  const ScalarField x = ScalarField::sample(g, [](double x, double) { return x; });
  CHECK(inner_product(one, x) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("inner product of sin sin") {
  const Grid2D g(64, 64);
  const ScalarField s =
      ScalarField::sample(g, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
  CHECK(std::abs(inner_product(s, s) - 0.25) <= 1e-3);
}

TEST_CASE("inner product is exact for separable linear products") {
  const Grid2D g(16, 8);
  const ScalarField a = ScalarField::sample(g, [](double x, double) { return 2.0 - 3.0 * x; });
  const ScalarField b = ScalarField::sample(g, [](double, double y) { return 0.5 + 4.0 * y; });
  // (2 - 3/2) * (1/2 + 2)
  CHECK(inner_product(a, b) == doctest::Approx(1.25).epsilon(1e-14));
  const ScalarField bil = ScalarField::sample(g, [](double x, double y) { return 1 + x + y + 3 * x * y; });
  CHECK(integral(bil) == doctest::Approx(2.75).epsilon(1e-14));
}

TEST_CASE("inner product is symmetric and bilinear") {
  const Grid2D g(20, 12);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const ScalarField a = random_field(g, seed), b = random_field(g, seed + 100), c = random_field(g, seed + 200);
    CHECK(inner_product(a, b) == doctest::Approx(inner_product(b, a)).epsilon(1e-14));
    const ScalarField lin = 2.5 * a + (-1.5) * c;
    CHECK(inner_product(lin, b) ==
          doctest::Approx(2.5 * inner_product(a, b) - 1.5 * inner_product(c, b)).epsilon(1e-12));
  }
}

TEST_CASE("grid mismatch is rejected") {
  const ScalarField a(Grid2D(8, 8)), b(Grid2D(8, 9));
  CHECK_THROWS_AS(inner_product(a, b), ArgumentError);
}

TEST_CASE("norms of simple fields") {
  const Grid2D g(32, 32);
  const FieldNorms z = norms(VectorField(g));
  CHECK(z.l2 == 0.0);
  CHECK(z.h1_semi == 0.0);
  CHECK(z.max_div == 0.0);

  const VectorField c(ScalarField(g, 1.0), ScalarField(g, 1.0));
  const FieldNorms nc = norms(c);
  CHECK(nc.l2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(nc.h1_semi <= 1e-12);

  const VectorField shear(ScalarField::sample(g, [](double, double y) { return y; }), ScalarField(g));
  CHECK(std::abs(norms(shear).h1_semi - 1.0) <= 1e-12);
}

TEST_CASE("l2 norm scales with the field") {
  const Grid2D g(16, 16);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const VectorField u = random_vector(g, seed);
    const double a = -3.0 + 0.1 * static_cast<double>(seed);
    CHECK(norms(a * u).l2 == doctest::Approx(std::abs(a) * norms(u).l2).epsilon(1e-13));
  }
}

TEST_CASE("boundary data integral and trace") {
  const Grid2D g(8, 16);
  const ScalarField f = ScalarField::sample(g, [](double x, double y) { return x + 2 * y; });
  const BoundaryData b = BoundaryData::trace(f);
  CHECK(b.side(Side::Top)[8] == doctest::Approx(3.0));
  CHECK(b.side(Side::Left)[16] == doctest::Approx(2.0));
  BoundaryData one(g, BoundaryKind::Neumann);
  one.add_constant(1.0);
  CHECK(one.integral() == doctest::Approx(4.0).epsilon(1e-14));
}

}  // TEST_SUITE
