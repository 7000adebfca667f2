#include "mixedfrac/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "mixedfrac/errors.hpp"

namespace mixedfrac {

namespace {

Eigen::VectorXd signed_pow(const Eigen::VectorXd& t, double p) {
  if (p == 1.0) return t;
  return t.unaryExpr([p](double s) { return std::copysign(std::pow(std::abs(s), p), s); });
}

Eigen::VectorXd eta_values(const Grid1D& grid, int j) {
  if (std::ldexp(1.0, -j) < 4.0 * grid.h)
    throw LevelTooFine("cutoff level " + std::to_string(j) + " is below the mesh resolution");
  return cutoff_eta(grid, j).values;
}

Eigen::VectorXd fixed_point_map(const Eigen::VectorXd& v, const HomogenizedProblem& hom,
                                const FracLapOperator& op, const Eigen::VectorXd& eta) {
  Eigen::VectorXd t = op.weights * v + hom.Dspsi;
  Eigen::VectorXd rhs = eta.cwiseProduct(hom.f - signed_pow(t, hom.original.p));
  return dirichlet_solve(op.grid, rhs);
}

ExtendedGridFunction zero_extended(const Grid1D& grid, const Eigen::VectorXd& v) {
  ExtendedGridFunction out = constant_function(grid, 0.0);
  out.interior = v;
  return out;
}

ExtendedGridFunction add(const ExtendedGridFunction& v, const ExtendedGridFunction& psi) {
  ExtendedGridFunction u = psi;
  u.interior += v.interior;
  u.trace_a += v.trace_a;
  u.trace_b += v.trace_b;
  u.ext_samples += v.ext_samples;
  u.far_value += v.far_value;
  return u;
}

void fill_bound(SolveReport& rep, const HomogenizedProblem& hom, const Eigen::VectorXd& u) {
  const ProblemSpec& s = hom.original;
  double h_plus = std::max(0.0, s.far_value);
  if (s.ext_samples.size() > 0) h_plus = std::max(h_plus, s.ext_samples.maxCoeff());
  rep.sup_u = u.maxCoeff();
  rep.sup_bound_base = std::max({0.0, s.g_a, s.g_b}) + h_plus;

  const Eigen::VectorXd delta = boundary_distance(s.grid).values;
  double weighted = 0.0;
  for (int i = 0; i < s.grid.n; ++i)
    weighted = std::max(weighted, std::pow(delta(i), 2.0 - s.source.alpha) * std::max(0.0, hom.f(i)));
  const double slack = 1e-9 * std::max(1.0, rep.sup_bound_base);
  if (weighted == 0.0) {
    rep.bound_constant = 0.0;
    rep.sup_bound_ok = rep.sup_u <= rep.sup_bound_base + slack;
  } else {
    const double a = s.source.alpha > 0.0 ? s.source.alpha : 1.0;
    rep.bound_constant = std::max(0.0, rep.sup_u - rep.sup_bound_base) * a / weighted;
    rep.sup_bound_ok = std::isfinite(rep.bound_constant);
  }
}

void finish(Solution& sol, const HomogenizedProblem& hom) {
  sol.u = add(sol.v, hom.psi);
  fill_bound(sol.report, hom, sol.u.interior);
  if (hom.original.grid.n >= 64) {
    const BoundaryDiagnostics d = diagnose_boundary(sol, hom.original);
    sol.report.boundary_gap = d.boundary_gap;
    sol.report.first_node_gap = d.first_node_gap;
    sol.report.fitted_exponent = d.fitted_exponent;
    sol.report.exponent_defined = d.exponent_defined;
  }
}

}  // namespace

ProblemSpec make_problem(const Grid1D& grid, double sigma, double p, double g_a,
                         double g_b, double h_value, const SingularSource& source) {
  ProblemSpec s;
  s.sigma = sigma;
  s.p = p;
  s.source = source;
  s.g_a = g_a;
  s.g_b = g_b;
  s.ext_samples = Eigen::VectorXd::Constant(grid.ext_count(), h_value);
  s.far_value = h_value;
  s.grid = grid;
  return s;
}

SingularSource constant_source(const Grid1D& grid, double value) {
  return {2.0, Eigen::VectorXd::Constant(grid.n, value)};
}

Eigen::VectorXd source_values(const ProblemSpec& spec) {
  const Eigen::VectorXd delta = boundary_distance(spec.grid).values;
  const double e = spec.source.alpha - 2.0;
  if (e == 0.0) return spec.source.smooth_part;
  return delta.array().pow(e).matrix().cwiseProduct(spec.source.smooth_part);
}

void validate(const ProblemSpec& spec) {
  if (!(spec.sigma > 0.0 && spec.sigma < 1.0)) throw DomainError("sigma must lie in (0,1)");
  if (!(spec.p >= 1.0) || !std::isfinite(spec.p)) throw DomainError("p must be >= 1");
  if (!(spec.source.alpha >= 0.0 && spec.source.alpha <= 2.0))
    throw DomainError("source alpha must lie in [0,2]");
  if (spec.source.smooth_part.size() != spec.grid.n)
    throw GridMismatch("source has the wrong number of nodes");
  if (spec.ext_samples.size() != spec.grid.ext_count())
    throw GridMismatch("exterior samples do not match the grid");
  if (!spec.source.smooth_part.allFinite() || !spec.ext_samples.allFinite() ||
      !std::isfinite(spec.far_value) || !std::isfinite(spec.g_a) || !std::isfinite(spec.g_b))
    throw DomainError("problem data must be finite");
}

int min_level(const Grid1D& grid) {
  int j = 0;
  while (std::ldexp(1.0, -j + 1) >= (grid.b - grid.a) / 2.0) ++j;
  return j;
}

int max_level(const Grid1D& grid) {
  return static_cast<int>(std::floor(std::log2(1.0 / (4.0 * grid.h))));
}

HomogenizedProblem homogenize(const ProblemSpec& spec, const FracLapOperator& op) {
  validate(spec);
  if (!(op.grid == spec.grid)) throw GridMismatch("operator and problem grids differ");
  const Grid1D& g = spec.grid;
  HomogenizedProblem hom;
  hom.original = spec;
  hom.psi = constant_function(g, 0.0);
  const Eigen::VectorXd x = g.nodes();
  hom.psi.interior = (spec.g_a + (spec.g_b - spec.g_a) * (x.array() - g.a) / (g.b - g.a)).matrix();
  hom.psi.trace_a = spec.g_a;
  hom.psi.trace_b = spec.g_b;
  hom.psi.ext_samples = spec.ext_samples;
  hom.psi.far_value = spec.far_value;
  hom.Dspsi = apply(op, hom.psi);
  hom.f = source_values(spec);

  const Eigen::VectorXd delta = boundary_distance(g).values;
  hom.Dspsi_constant = (hom.Dspsi.array().abs() * delta.array().pow(2.0 * spec.sigma)).maxCoeff();
  return hom;
}

Eigen::VectorXd dirichlet_inverse(const Eigen::VectorXd& F, const Grid1D& grid) {
  if (!F.allFinite()) throw DomainError("dirichlet_inverse needs finite data");
  return dirichlet_solve(grid, F);
}

Eigen::VectorXd nonlinear_term(const Eigen::VectorXd& v, const HomogenizedProblem& hom,
                               const FracLapOperator& op, int j) {
  const Eigen::VectorXd eta = eta_values(op.grid, j);
  Eigen::VectorXd t = op.weights * v + hom.Dspsi;
  return eta.cwiseProduct(signed_pow(t, hom.original.p));
}

Eigen::VectorXd nonlinear_term(const ExtendedGridFunction& v, const HomogenizedProblem& hom,
                               const FracLapOperator& op, int j) {
  return nonlinear_term(v.interior, hom, op, j);
}

double equation_residual(const Eigen::VectorXd& v, const HomogenizedProblem& hom,
                         const FracLapOperator& op, int j) {
  const Eigen::VectorXd eta = eta_values(op.grid, j);
  const Eigen::VectorXd r = neg_laplacian(op.grid, v, 0.0, 0.0) + nonlinear_term(v, hom, op, j) -
                            eta.cwiseProduct(hom.f);
  const Eigen::VectorXd delta = boundary_distance(op.grid).values;
  const double cut = std::ldexp(1.0, -j);
  double m = 0.0;
  for (int i = 0; i < r.size(); ++i)
    if (delta(i) > cut) m = std::max(m, std::abs(r(i)));
  return m;
}

Solution regularized_solve(const HomogenizedProblem& hom, const FracLapOperator& op, int j,
                           const SolverOptions& opts, const std::optional<Eigen::VectorXd>& v0) {
  if (!(opts.tol > 0.0)) throw DomainError("tol must be positive");
  if (!(opts.damping > 0.0 && opts.damping <= 1.0)) throw DomainError("damping must lie in (0,1]");
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::VectorXd eta = eta_values(op.grid, j);
  const int n = op.grid.n;

  Eigen::VectorXd v = v0 ? *v0 : Eigen::VectorXd::Zero(n);
  if (v.size() != n) throw GridMismatch("initial iterate has the wrong size");
  Eigen::VectorXd best = v;
  double rbest = std::numeric_limits<double>::infinity();
  double r_prev = rbest;
  double lam = opts.damping;
  int increases = 0, it = 0;
  double r = rbest;
  // a residual that plateaus (period-2 orbits) never trips the increase rule
  int it_mark = 0;
  double r_mark = rbest;
  bool ok = false;

  while (it < opts.max_iter) {
    const Eigen::VectorXd Tv = fixed_point_map(v, hom, op, eta);
    r = (Tv - v).cwiseAbs().maxCoeff();
    ++it;
    if (!std::isfinite(r) || r > opts.blowup) {
      lam *= 0.5;
      v = best;
      increases = 0;
      r_prev = r_mark = std::numeric_limits<double>::infinity();
      it_mark = it;
      if (lam < opts.lambda_min)
        throw Diverged("Picard iteration diverged at level " + std::to_string(j));
      continue;
    }
    if (r < rbest) {
      rbest = r;
      best = v;
    }
    if (r <= opts.tol) {
      ok = true;
      break;
    }
    increases = r > r_prev ? increases + 1 : 0;
    if (increases >= 3) {
      lam *= 0.5;
      increases = 0;
    }
    if (it - it_mark >= 100) {
      if (r > 0.999 * r_mark) lam *= 0.5;
      r_mark = r;
      it_mark = it;
    }
    r_prev = r;
    v = (1.0 - lam) * v + lam * Tv;
  }
  if (!ok)
    throw MaxIterExceeded("no convergence at level " + std::to_string(j) + " after " +
                          std::to_string(it) + " iterations (residual " + std::to_string(r) + ")");

  Solution sol;
  sol.v = zero_extended(op.grid, v);
  sol.j_final = j;
  LevelStats st;
  st.j = j;
  st.iterations = it;
  st.lambda = lam;
  st.fixed_point_residual = r;
  st.equation_residual = equation_residual(v, hom, op, j);
  sol.report.levels.push_back(st);
  sol.report.fixed_point_residual = r;
  sol.report.equation_residual = st.equation_residual;
  finish(sol, hom);
  sol.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

Solution continuation_solve(const HomogenizedProblem& hom, const FracLapOperator& op,
                            const SolverOptions& opts, const std::optional<Eigen::VectorXd>& v0) {
  const auto t0 = std::chrono::steady_clock::now();
  const int jlo = min_level(op.grid), jhi = max_level(op.grid);
  if (jhi - jlo + 1 < 3)
    throw LevelTooFine("grid admits fewer than three cutoff levels");

  Solution cur;
  std::vector<LevelStats> levels;
  std::optional<Eigen::VectorXd> warm = v0;
  for (int j = jlo; j <= jhi; ++j) {
    Solution next = regularized_solve(hom, op, j, opts, warm);
    LevelStats st = next.report.levels.front();
    if (warm && j > jlo) st.increment = (next.v.interior - *warm).cwiseAbs().maxCoeff();
    levels.push_back(st);
    warm = next.v.interior;
    cur = std::move(next);
    if (st.increment >= 0.0 && st.increment <= opts.level_tol) break;
  }
  cur.report.levels = levels;
  cur.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return cur;
}

LargeSolutionSequence solve_large(const ProblemSpec& tmpl, const FracLapOperator& op,
                                  double j_data_max, const SolverOptions& opts) {
  if (!(j_data_max >= 1.0)) throw DomainError("j_data_max must be at least 1");
  const Grid1D& grid = tmpl.grid;
  LargeSolutionSequence seq;

  CalibrationInputs in;
  in.p = tmpl.p;
  in.g_max = j_data_max;
  seq.barrier = calibrate_supersolution(SupersolutionKind::large, grid, op.params, in);

  std::optional<Eigen::VectorXd> prev;
  const int mid = grid.n / 2;
  for (double g = 1.0; g <= j_data_max * (1.0 + 1e-12); g *= 2.0) {
    ProblemSpec s = make_problem(grid, tmpl.sigma, tmpl.p, g, g, 0.0, constant_source(grid, 0.0));
    const HomogenizedProblem hom = homogenize(s, op);
    std::optional<Eigen::VectorXd> v0;
    if (prev) v0 = Eigen::VectorXd(*prev - hom.psi.interior);
    Solution sol = continuation_solve(hom, op, opts, v0);
    const Eigen::VectorXd& u = sol.u.interior;
    const double scale = 1e-9 * std::max(1.0, g);
    if (prev && (u.array() < prev->array() - scale).any()) seq.monotone = false;
    if ((u.array() > seq.barrier.w.interior.array() + scale).any()) seq.dominated = false;
    seq.g_levels.push_back(g);
    seq.midpoint_values.push_back(u(mid));
    prev = u;
    seq.solutions.push_back(std::move(sol));
  }
  seq.limit_estimate = *prev;
  if (!seq.monotone)
    throw MonotonicityViolation("large-solution ladder is not nodewise non-decreasing in g");
  if (!seq.dominated)
    throw MonotonicityViolation("large-solution ladder exceeds the calibrated supersolution");
  return seq;
}

ComparisonResult check_comparison(const ExtendedGridFunction& sub, const ExtendedGridFunction& super,
                                  const ProblemSpec& spec, const FracLapOperator& op) {
  validate(sub);
  validate(super);
  if (!(sub.grid == super.grid) || !(sub.grid == op.grid)) throw GridMismatch("comparison grids differ");
  ComparisonResult res;
  const double tol = 1e-10;

  bool outer = sub.trace_a <= super.trace_a + tol && sub.trace_b <= super.trace_b + tol &&
               sub.far_value <= super.far_value + tol &&
               (sub.ext_samples.array() <= super.ext_samples.array() + tol).all();

  auto L = [&](const ExtendedGridFunction& w) -> Eigen::VectorXd {
    return neg_laplacian(op.grid, w.interior, w.trace_a, w.trace_b) + signed_pow(apply(op, w), spec.p);
  };
  const Eigen::VectorXd Lsub = L(sub), Lsup = L(super);
  const double scale = std::max({1.0, Lsub.cwiseAbs().maxCoeff(), Lsup.cwiseAbs().maxCoeff()});
  for (int i = 0; i < op.grid.n; ++i) {
    if (Lsub(i) > Lsup(i) + 1e-12 * scale) res.inequality_failures.push_back(i);
    if (sub.interior(i) > super.interior(i) + tol) res.violations.push_back(i);
  }
  res.hypotheses_hold = outer && res.inequality_failures.empty();
  res.pass = res.violations.empty();
  return res;
}

double fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = m * sxx - sx * sx;
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / den;
}

BoundaryDiagnostics diagnose_boundary(const Solution& sol, const ProblemSpec& spec) {
  const Grid1D& g = spec.grid;
  BoundaryDiagnostics d;
  const Eigen::VectorXd& u = sol.u.interior;
  const int n = g.n;
  d.first_node_gap = std::max(std::abs(u(0) - spec.g_a), std::abs(u(n - 1) - spec.g_b));

  int k = 0;
  if (sol.j_final > 0 && std::ldexp(1.0, -sol.j_final) >= 4.0 * g.h) {
    const Eigen::VectorXd eta = cutoff_eta(g, sol.j_final).values;
    while (k < n / 2 && eta(k) < 1.0 - 1e-15) ++k;
  }
  d.boundary_gap = std::max(std::abs(u(k) - spec.g_a), std::abs(u(n - 1 - k) - spec.g_b));

  const Eigen::VectorXd delta = boundary_distance(g).values;
  const Eigen::VectorXd x = g.nodes();
  std::vector<double> xs, ys;
  const double lo = 4.0 * g.h, hi = (g.b - g.a) / 8.0;
  for (int i = 0; i < n; ++i) {
    const double psi = spec.g_a + (spec.g_b - spec.g_a) * (x(i) - g.a) / (g.b - g.a);
    const double w = std::abs(u(i) - psi);
    if (delta(i) >= lo && delta(i) <= hi && w > 1e-300) {
      xs.push_back(delta(i));
      ys.push_back(w);
    }
  }
  d.fit_points = static_cast<int>(xs.size());
  if (xs.size() >= 3) {
    d.fitted_exponent = fit_loglog(xs, ys);
    d.exponent_defined = std::isfinite(d.fitted_exponent);
  }
  return d;
}

}  // namespace mixedfrac
