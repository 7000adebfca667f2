#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "mixedfrac/barriers.hpp"
#include "mixedfrac/errors.hpp"

using namespace mixedfrac;

TEST_CASE("torsion function") {
  auto g = make_grid(-1, 1, 255, 0.0);
  auto t = torsion_function(g);
  CHECK(t.values[127] == doctest::Approx(0.5));
  auto td = torsion_function_discrete(g);
  CHECK((t.values - td.values).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(t.values.minCoeff() > 0.0);
  auto lap = neg_laplacian(g, t.values, 0.0, 0.0);
  CHECK((lap.array() - 1.0).abs().maxCoeff() < 1e-9);

  double prev = 1e9;
  for (int n : {31, 127, 511}) {
    auto gn = make_grid(0, 3, n, 0.0);
    auto tn = torsion_function(gn);
    const double err = std::abs(tn.values[0] / gn.h - 1.5);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("power barrier") {
  auto g = make_grid(-1, 1, 63, 0.0);
  auto t = torsion_function(g).values;
  auto v1 = power_barrier(g, 1.0);
  CHECK((v1.u.interior - t).cwiseAbs().maxCoeff() == 0.0);
  CHECK(v1.u.trace_a == 0.0);
  auto v0 = power_barrier(g, 0.0);
  CHECK(v0.u.interior.minCoeff() == 1.0);
  CHECK(v0.u.trace_b == 1.0);
  CHECK(v0.u.ext_samples.cwiseAbs().maxCoeff() == 0.0);
  CHECK(power_barrier(g, 0.5).u.interior[31] == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(power_barrier(g, 1.5), DomainError);
  CHECK_THROWS_AS(power_barrier(g, -0.1), DomainError);
}

TEST_CASE("barrier ordering in alpha") {
  auto g = make_grid(-1, 1, 127, 0.0);
  for (double a1 : {0.1, 0.3, 0.6}) {
    for (double a2 : {0.7, 1.0}) {
      Eigen::VectorXd d = power_barrier(g, a2).u.interior - power_barrier(g, a1).u.interior;
      CHECK(d.maxCoeff() <= 0.0);
    }
  }
}

TEST_CASE("blowup barrier matches delta^beta in the strip") {
  auto g = make_grid(-1, 1, 511, 0.0);
  auto vb = blowup_barrier(g, 0.5, -0.4);
  CHECK(vb.delta0 == doctest::Approx(0.25));
  auto d = boundary_distance(g).values;
  for (int i = 0; i < g.n; ++i) {
    if (d[i] < vb.delta0) CHECK(vb.u.interior[i] == std::pow(d[i], -0.4));
    CHECK(std::isfinite(vb.u.interior[i]));
    CHECK(vb.u.interior[i] > 0.0);
  }
  // C^2 fill: discrete second differences stay close to the strip formula across delta0
  auto lap = neg_laplacian(g, vb.u.interior, vb.u.trace_a, vb.u.trace_b);
  const int k = static_cast<int>(std::round(vb.delta0 / g.h)) - 1;
  const double exact = -(-0.4) * (-1.4) * std::pow(vb.delta0, -2.4);
  CHECK(lap[k] == doctest::Approx(exact).epsilon(2e-2));
  CHECK(lap[k + 1] == doctest::Approx(exact).epsilon(2e-2));
  CHECK_THROWS_AS(blowup_barrier(g, 0.5, -0.6), DomainError);
  CHECK_THROWS_AS(blowup_barrier(g, 0.5, 0.1), DomainError);
}

TEST_CASE("ball barrier") {
  const double s = 0.5, R = 1.0;
  auto g = make_grid(-1, 1, 1023, 0.0);
  auto u = ball_barrier(g, s, R);
  auto P = make_frac_params(s);
  auto ds = eval_all(u, P);
  const double ref = closed_form_reference(ReferenceKind::getoor, P, 0.0, R);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    if (std::abs(x) <= 0.8 * R) CHECK(std::abs(ds[i] - ref) <= 0.02 * ref);
    CHECK(ball_barrier_neg_laplacian(x, s, R) >= 2 * s * std::pow(R, 2 * s - 2));
  }
  // closed form against a centred difference
  const double x = 0.3, e = 1e-4;
  auto f = [&](double y) { return std::pow(R * R - y * y, s); };
  CHECK(ball_barrier_neg_laplacian(x, s, R) ==
        doctest::Approx(-(f(x + e) - 2 * f(x) + f(x - e)) / (e * e)).epsilon(1e-5));
}

TEST_CASE("gamma exponent") {
  CHECK(gamma_exponent(0.4, 2.0) == doctest::Approx(-0.4).epsilon(1e-14));
  CHECK((3 - 0.4) / 1.4 == doctest::Approx(1.857142857));
  CHECK(gamma_exponent(0.5, 1.9) == doctest::Approx(-0.1 / 0.9).epsilon(1e-12));
  CHECK_THROWS_AS(gamma_exponent(0.5, 3.0), OutOfWindow);
  CHECK_THROWS_AS(gamma_exponent(0.4, 1.8), OutOfWindow);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  int tried = 0;
  while (tried < 1000) {
    const double s = 0.01 + 0.98 * U(rng);
    const double lo = (3 - s) / (1 + s), hi = 1 / s;
    if (!(lo < hi)) continue;
    const double p = lo + (hi - lo) * (0.001 + 0.998 * U(rng));
    const double gm = gamma_exponent(s, p);
    CHECK(gm > -1 + s);
    CHECK(gm < 0.0);
    ++tried;
  }
}

TEST_CASE("verify_barrier_bounds examples") {
  auto P = make_frac_params(0.5);
  auto g = make_grid(-1, 1, 2047, 0.0);
  auto r0 = verify_barrier_bounds(power_barrier(g, 0.0), P);
  CHECK(r0.pass);
  REQUIRE(r0.ratios.size() == 1);
  // indicator closed form: ratio near the boundary tends to c/(2 sigma) = 1/pi
  CHECK(r0.ratios[0].min_ratio == doctest::Approx(1.0 / std::numbers::pi).epsilon(5e-3));

  auto rh = verify_barrier_bounds(power_barrier(g, 0.5), P);
  CHECK(rh.pass);
  CHECK(rh.ratios[0].target == "laplacian");
  CHECK(rh.ratios[0].min_ratio > 0.0);

  auto rb = verify_barrier_bounds(blowup_barrier(g, 0.5, -0.4), P);
  CHECK(rb.pass);
  CHECK(rb.ratios[1].min_ratio > 0.0);

  CHECK_THROWS_AS(verify_barrier_bounds(power_barrier(make_grid(-1, 1, 63, 0.0), 0.5), P), WindowTooThin);
}

TEST_CASE("calibration: non-existence supersolution") {
  auto g = make_grid(-1, 1, 255, 0.0);
  auto P = make_frac_params(0.5);
  CalibrationInputs in;
  in.p = 2.0;
  in.m = 1.0;
  in.alpha = 0.25;
  auto cs = calibrate_supersolution(SupersolutionKind::nonexistence_super, g, P, in);
  CHECK(cs.eps <= 0.5);
  CHECK(cs.residual_min >= 0.0);
  CHECK(cs.w.interior.maxCoeff() < in.m);
  CHECK(cs.w.trace_a == in.m);
  // one eps works uniformly as alpha decreases; the centre value approaches m(1-eps)
  const std::vector<double> alphas = {0.25, 0.125, 0.0625, 0.03125};
  double eps0 = 1.0;
  for (double a : alphas) {
    in.alpha = a;
    eps0 = std::min(eps0, calibrate_supersolution(SupersolutionKind::nonexistence_super, g, P, in).eps);
  }
  CHECK(eps0 >= 0.25);
  auto d = boundary_distance(g).values;
  double prev_gap = 1e9;
  for (double a : alphas) {
    auto w = power_barrier(g, 0.0).u;
    auto va = power_barrier(g, a).u;
    w.interior -= eps0 * va.interior;
    auto res = operator_residual(w, P, 2.0, Eigen::VectorXd::Zero(g.n));
    for (int i = 0; i < g.n; ++i) {
      if (d[i] >= 4 * g.h) CHECK(res[i] >= 0.0);
    }
    const double gap = std::abs(w.interior[127] - (1 - eps0));
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK_THROWS_AS(calibrate_supersolution(SupersolutionKind::nonexistence_super, g, make_frac_params(0.4), in),
                  OutOfWindow);
}

TEST_CASE("calibration: singular subsolution") {
  auto g = make_grid(-1, 1, 255, 0.0);
  auto P = make_frac_params(0.4);
  CalibrationInputs in;
  in.p = 2.0;
  in.kappa = 1.0;
  auto cs = calibrate_supersolution(SupersolutionKind::singular_sub, g, P, in);
  CHECK(cs.residual_max <= 0.0);
  CHECK(cs.alpha == doctest::Approx(0.2));
  const auto tau = torsion_function(g).values;
  double floor = 1e9, lower = 1e9;
  for (int i = 0; i < g.n; ++i) {
    if (std::abs(g.x(i)) <= 1.0 / 3.0) {
      floor = std::min(floor, cs.w.interior[i]);
      lower = std::min(lower, cs.eps * std::pow(tau[i], cs.alpha));
    }
  }
  CHECK(floor >= lower);
  CHECK(floor > 0.0);
  in.kappa = 1e-12;
  in.max_doublings = 3;
  CHECK_THROWS_AS(calibrate_supersolution(SupersolutionKind::singular_sub, g, P, in), CalibrationFailed);
}

TEST_CASE("calibration: large-solution supersolution") {
  auto g = make_grid(-1, 1, 511, 0.0);
  auto P = make_frac_params(0.4);
  CalibrationInputs in;
  in.p = 2.0;
  auto cs = calibrate_supersolution(SupersolutionKind::large, g, P, in);
  CHECK(std::isfinite(cs.A));
  CHECK(std::isfinite(cs.B));
  CHECK(cs.residual_min >= 0.0);
  auto d = boundary_distance(g).values;
  for (int i = 0; i < g.n; ++i) {
    if (d[i] < 0.25) CHECK(cs.w.interior[i] >= cs.A * std::pow(d[i], -0.4));
  }
  in.g_max = 128;
  auto c2 = calibrate_supersolution(SupersolutionKind::large, g, P, in);
  CHECK(c2.w.trace_a >= 128);
  CHECK_THROWS_AS(calibrate_supersolution(SupersolutionKind::large, g, make_frac_params(0.5), in), OutOfWindow);
}
