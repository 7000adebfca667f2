#include <cmath>
#include <random>

#include "doctest.h"
#include "mixedfrac/domain.hpp"
#include "mixedfrac/errors.hpp"

using namespace mixedfrac;

TEST_CASE("make_grid node layout") {
  auto g = make_grid(-1, 1, 3, 1.0);
  CHECK(g.h == doctest::Approx(0.5));
  auto x = g.nodes();
  CHECK(x[0] == doctest::Approx(-0.5));
  CHECK(x[1] == doctest::Approx(0.0));
  CHECK(x[2] == doctest::Approx(0.5));
  CHECK(g.ext_cells == 2);
  auto xe = g.ext_nodes();
  REQUIRE(xe.size() == 6);
  CHECK(xe[0] == doctest::Approx(-2.0));
  CHECK(xe[2] == doctest::Approx(-1.0));
  CHECK(xe[3] == doctest::Approx(1.0));
  CHECK(xe[5] == doctest::Approx(2.0));

  auto g2 = make_grid(-1, 1, 1023, 2.0);
  CHECK(g2.h == 2.0 / 1024);
  CHECK(g2.ext_cells == 1024);
}

TEST_CASE("make_grid rejects bad input") {
  CHECK_THROWS_AS(make_grid(0, 1, 3, 0.3), InvalidGeometry);
  CHECK_THROWS_AS(make_grid(1, 0, 3, 0.0), InvalidGeometry);
  CHECK_THROWS_AS(make_grid(0, 1, 2, 0.0), InvalidGeometry);
  CHECK_THROWS_AS(make_grid(0, 1, 7, -0.125), InvalidGeometry);
  CHECK_NOTHROW(make_grid(0, 1, 3, 0.0));
}

TEST_CASE("boundary_distance") {
  auto d = boundary_distance(make_grid(-1, 1, 3, 1.0)).values;
  CHECK(d[0] == doctest::Approx(0.5));
  CHECK(d[1] == doctest::Approx(1.0));
  CHECK(d[2] == doctest::Approx(0.5));

  auto g = make_grid(0, 1, 1023, 0.0);
  auto d2 = boundary_distance(g).values;
  CHECK(d2[0] == 1.0 / 1024);
  CHECK(d2[511] == 0.5);
  for (int i = 0; i + 1 < g.n; ++i) {
    if (i == 510 || i == 511) continue;
    CHECK(std::abs(std::abs(d2[i] - d2[i + 1]) - g.h) < 1e-15);
  }
  CHECK(d2.maxCoeff() <= 0.5);
  CHECK(d2.minCoeff() > 0.0);
}

TEST_CASE("cutoff_eta support, plateau and smoothstep midpoint") {
  auto g = make_grid(0, 1, 1023, 0.0);
  auto d = boundary_distance(g).values;
  for (int j = 3; j <= 8; ++j) {
    auto eta = cutoff_eta(g, j).values;
    const double r = std::ldexp(1.0, -j);
    for (int i = 0; i < g.n; ++i) {
      if (d[i] <= r) CHECK(eta[i] == 0.0);
      if (d[i] >= 2 * r) CHECK(eta[i] == 1.0);
      if (std::abs(d[i] - 1.5 * r) < 1e-15) CHECK(eta[i] == doctest::Approx(0.5).epsilon(1e-14));
      CHECK(eta[i] >= 0.0);
      CHECK(eta[i] <= 1.0);
      if (i + 1 < g.n) CHECK(std::abs(eta[i] - eta[i + 1]) <= 4.0 * std::ldexp(1.0, j) * g.h);
    }
  }
  // delta = 2^-j-1 gives 0 exactly
  auto eta5 = cutoff_eta(g, 5).values;
  CHECK(eta5[15] == 0.0);  // delta = 16/1024 = 2^-6
}

TEST_CASE("cutoff_eta level checks and nesting") {
  auto g = make_grid(-1, 1, 511, 0.0);
  CHECK_THROWS_AS(cutoff_eta(g, 1), LevelTooCoarse);
  CHECK_NOTHROW(cutoff_eta(g, 2));
  for (int j = 2; j < 7; ++j) {
    auto e0 = cutoff_eta(g, j).values;
    auto e1 = cutoff_eta(g, j + 1).values;
    CHECK(((e1 - e0).array() >= 0.0).all());
  }
}

TEST_CASE("dyadic_partition sums to one") {
  auto g = make_grid(0, 1, 1023, 0.0);
  auto part = dyadic_partition(g);
  auto d = boundary_distance(g).values;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(g.n);
  for (int k = part.k_min; k <= part.k_max; ++k) {
    const auto& z = part.piece(k);
    CHECK(z.minCoeff() >= 0.0);
    for (int i = 0; i < g.n; ++i) {
      if (z[i] > 0.0) {
        CHECK(d[i] > std::ldexp(1.0, -k - 1));
        CHECK(d[i] < std::ldexp(1.0, -k + 1));
      }
    }
    sum += z;
  }
  CHECK((sum.array() - 1.0).abs().maxCoeff() < 1e-12);

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(0, g.n - 1);
  for (int t = 0; t < 50; ++t) {
    const int i = pick(rng);
    double s = 0.0;
    for (int k = part.k_min; k <= part.k_max; ++k) s += part.piece(k)[i];
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
}

TEST_CASE("dyadic_partition exact dyadic distance") {
  auto g = make_grid(0, 1, 1023, 0.0);
  auto part = dyadic_partition(g);
  // node 63 has delta = 64/1024 = 2^-4
  for (int k = part.k_min; k <= part.k_max; ++k) {
    CHECK(part.piece(k)[63] == (k == 4 ? 1.0 : 0.0));
  }
  // range matches the support bounds
  CHECK(part.k_min >= static_cast<int>(std::ceil(std::log2(2.0 / (g.b - g.a)))) - 1);
  CHECK(part.k_max <= std::log2(1.0 / g.h) + 1);
}
