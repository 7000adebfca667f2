#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mixedfrac/errors.hpp"
#include "mixedfrac/fraclap.hpp"
#include "oracles.hpp"

using namespace mixedfrac;

namespace {
const auto zero = [](double) { return 0.0; };
const auto one = [](double) { return 1.0; };
}  // namespace

TEST_CASE("normalization_constant") {
  CHECK(normalization_constant(1, 0.5) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));
  // pinned against the Fourier/real-space ratio below
  CHECK(normalization_constant(1, 0.25) == doctest::Approx(0.19947114020071638).epsilon(1e-13));
  for (double s : {0.25, 0.5, 0.75}) {
    const double ratio = oracle::gaussian_fourier_at_zero(s) / oracle::gaussian_real_space_kernel_integral(s);
    CHECK(normalization_constant(1, s) == doctest::Approx(ratio).epsilon(1e-6));
  }
  CHECK_THROWS_AS(normalization_constant(1, 1.0), DomainError);
  CHECK_THROWS_AS(normalization_constant(1, 0.0), DomainError);
}

TEST_CASE("constants are in the kernel") {
  for (double L : {0.0, 0.5}) {
    auto g = make_grid(-1, 1, 15, L);
    auto u = constant_function(g, 3.5);
    for (double s : {0.2, 0.5, 0.9}) {
      auto P = make_frac_params(s);
      for (int i = 0; i < g.n; ++i) CHECK(std::abs(eval_pointwise(u, P, i)) < 1e-10);
    }
  }
}

TEST_CASE("getoor profile at sigma = 1/2") {
  auto P = make_frac_params(0.5);
  auto g = make_grid(-1, 1, 1023, 0.0);
  auto u = sample_function(g, [](double x) { return std::sqrt(std::max(0.0, 1 - x * x)); }, zero, 0.0);
  CHECK(eval_pointwise(u, P, 511) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(closed_form_reference(ReferenceKind::getoor, P, 0.3) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("getoor error shrinks under refinement") {
  for (double s : {0.25, 0.75}) {
    auto P = make_frac_params(s);
    const double ref = closed_form_reference(ReferenceKind::getoor, P, 0.0);
    double prev = 1e9;
    for (int n : {127, 255, 511}) {
      auto g = make_grid(-1, 1, n, 0.0);
      auto u = sample_function(g, [s](double x) { return std::pow(std::max(0.0, 1 - x * x), s); }, zero, 0.0);
      auto v = eval_all(u, P);
      double err = 0.0;
      for (int i = 0; i < n; ++i) {
        if (std::abs(g.x(i)) <= 0.8) err = std::max(err, std::abs(v[i] - ref) / ref);
      }
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 0.02);
  }
}

TEST_CASE("indicator of (-1,1) at the centre") {
  auto P = make_frac_params(0.5);
  const double exact = 2.0 / std::numbers::pi;
  CHECK(closed_form_reference(ReferenceKind::indicator, P, 0.0) == doctest::Approx(exact).epsilon(1e-14));
  auto coarse = sample_function(make_grid(-1, 1, 3, 1.0), one, zero, 0.0);
  CHECK(std::abs(eval_pointwise(coarse, P, 1) - exact) < 0.03);
  auto fine = sample_function(make_grid(-1, 1, 255, 1.0), one, zero, 0.0);
  CHECK(std::abs(eval_pointwise(fine, P, 127) - exact) < 1e-5);
  auto bare = sample_function(make_grid(-1, 1, 255, 0.0), one, zero, 0.0);
  CHECK(std::abs(eval_pointwise(bare, P, 127) - exact) < 1e-5);
}

TEST_CASE("closed_form_reference domain checks") {
  auto P = make_frac_params(0.7);
  CHECK(closed_form_reference(ReferenceKind::halfline_power, P, 2.0) == 0.0);
  CHECK_THROWS_AS(closed_form_reference(ReferenceKind::halfline_power, P, -1.0), DomainError);
  CHECK_THROWS_AS(closed_form_reference(ReferenceKind::getoor, P, 1.0), DomainError);
  CHECK_THROWS_AS(closed_form_reference(ReferenceKind::indicator, P, -1.5), DomainError);
}

TEST_CASE("assembled operator matches the pointwise path") {
  std::mt19937 rng(11);
  std::normal_distribution<double> N01;
  for (double L : {0.0, 0.25}) {
    auto g = make_grid(-1, 1, 63, L);
    auto P = make_frac_params(0.35);
    auto op = assemble_operator(g, P);

    auto ones = constant_function(g, 1.0);
    CHECK(apply(op, ones).cwiseAbs().maxCoeff() < 1e-10);

    ExtendedGridFunction u = constant_function(g, 0.0);
    for (int i = 0; i < g.n; ++i) u.interior[i] = N01(rng);
    for (int k = 0; k < g.ext_count(); ++k) u.ext_samples[k] = N01(rng);
    u.trace_a = N01(rng);
    u.trace_b = N01(rng);
    u.far_value = N01(rng);
    auto Au = apply(op, u);
    std::uniform_int_distribution<int> pick(0, g.n - 1);
    for (int t = 0; t < 10; ++t) {
      const int i = pick(rng);
      const double pw = eval_pointwise(u, P, i);
      CHECK(std::abs(Au[i] - pw) <= 1e-12 * std::max(1.0, std::abs(pw)));
    }
  }
}

TEST_CASE("operator sign structure") {
  auto g = make_grid(-1, 1, 3, 0.0);
  auto op = assemble_operator(g, make_frac_params(0.5));
  for (int i = 0; i < 3; ++i) {
    CHECK(op.weights(i, i) > 0.0);
    double off = 0.0;
    for (int j = 0; j < 3; ++j) {
      if (j != i) {
        CHECK(op.weights(i, j) <= 0.0);
        off += std::abs(op.weights(i, j));
      }
    }
    CHECK(op.weights(i, i) > off);
  }
  auto other = make_grid(-1, 1, 5, 0.0);
  CHECK_THROWS_AS(apply(op, constant_function(other, 1.0)), GridMismatch);
}

TEST_CASE("maximum at an interior node gives a nonnegative value") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-1, 1);
  auto g = make_grid(0, 2, 31, 0.5);
  auto P = make_frac_params(0.6);
  for (int t = 0; t < 50; ++t) {
    auto u = constant_function(g, 0.0);
    for (int i = 0; i < g.n; ++i) u.interior[i] = U(rng);
    for (int k = 0; k < g.ext_count(); ++k) u.ext_samples[k] = U(rng);
    u.trace_a = U(rng);
    u.trace_b = U(rng);
    u.far_value = U(rng);
    const int i = t % g.n;
    u.interior[i] = 1.0;
    CHECK(eval_pointwise(u, P, i) >= 0.0);
  }
}

TEST_CASE("scaling u(lambda x)") {
  const double lambda = 2.0, s = 0.45;
  auto P = make_frac_params(s);
  auto prof = [](double x) { return std::exp(-x * x) * (1 + 0.3 * x); };
  auto g1 = make_grid(-1, 1, 63, 0.5);
  auto g2 = make_grid(-2, 2, 63, 1.0);
  auto u1 = sample_function(g1, [&](double x) { return prof(lambda * x); }, [&](double x) { return prof(lambda * x); }, 0.0);
  auto u2 = sample_function(g2, prof, prof, 0.0);
  auto v1 = eval_all(u1, P), v2 = eval_all(u2, P);
  for (int i = 0; i < g1.n; ++i) {
    CHECK(v1[i] == doctest::Approx(std::pow(lambda, 2 * s) * v2[i]).epsilon(1e-10));
  }
}

TEST_CASE("x_+^sigma residual shrinks under refinement") {
  const double s = 0.5;
  auto P = make_frac_params(s);
  double prev = 0.0;
  for (int n : {127, 255, 511}) {
    auto g = make_grid(0, 1, n, 1.0);
    auto f = [s](double x) { return x > 0 ? std::pow(x, s) : 0.0; };
    auto u = sample_function(g, f, f, 0.0);
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = g.x(i);
      if (x < 0.25 || x > 0.75) continue;
      const double r = eval_pointwise(u, P, i) - P.c_norm * oracle::power_tail_beyond(x, 2.0, s);
      res = std::max(res, std::abs(r));
    }
    if (prev > 0.0) CHECK(prev / res >= 1.5);
    prev = res;
  }
}
