#include "mixedfrac/experiments.hpp"

#include <Eigen/Core>
#include <Eigen/LU>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "mixedfrac/barriers.hpp"
#include "mixedfrac/errors.hpp"
#include "mixedfrac/fraclap.hpp"
#include "mixedfrac/lototsky.hpp"

namespace mixedfrac {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- config helpers ----------------------------------------------------

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw ConfigError("field '" + field + "': " + why);
}

const json* section(const json& j, const char* name) {
  if (!j.contains(name)) return nullptr;
  const json& s = j.at(name);
  if (!s.is_object()) bad(name, "expected an object");
  return &s;
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* n) { return k == n; }))
      bad(where.empty() ? k : where + "." + k, "unknown field");
  }
}

template <class T>
void read(const json* s, const std::string& where, const char* key, T& out) {
  if (!s || !s->contains(key)) return;
  const json& v = s->at(key);
  const std::string field = where + "." + key;
  try {
    if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) bad(field, "expected an integer");
      out = v.get<int>();
    } else if constexpr (std::is_same_v<T, unsigned>) {
      if (!v.is_number_integer() || v.get<long long>() < 0) bad(field, "expected a non-negative integer");
      out = v.get<unsigned>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) bad(field, "expected a number");
      out = v.get<double>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) bad(field, "expected a string");
      out = v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) bad(field, "expected an array of numbers");
      out.clear();
      for (const auto& e : v) {
        if (!e.is_number()) bad(field, "expected an array of numbers");
        out.push_back(e.get<double>());
      }
    } else if constexpr (std::is_same_v<T, std::vector<int>>) {
      if (!v.is_array()) bad(field, "expected an array of integers");
      out.clear();
      for (const auto& e : v) {
        if (!e.is_number_integer()) bad(field, "expected an array of integers");
        out.push_back(e.get<int>());
      }
    }
  } catch (const json::exception& e) {
    bad(field, e.what());
  }
}

void require_sigma(double s, const std::string& field) {
  if (!(s > 0.0 && s < 1.0)) bad(field, "must lie in (0,1), got " + format_number(s));
}

// ---- numerics shared by the drivers ------------------------------------

Grid1D grid_of(const ExperimentConfig& c, int n) { return make_grid(c.a, c.b, n, c.L); }

ProblemSpec spec_of(const ExperimentConfig& c, const Grid1D& g) {
  return make_problem(g, c.sigma, c.p, c.g_a, c.g_b, c.h, make_source(c.source, g));
}

Solution solve_capped(const HomogenizedProblem& hom, const FracLapOperator& op, int level,
                      const SolverOptions& opts, std::vector<LevelStats>* levels = nullptr) {
  std::optional<Eigen::VectorXd> warm;
  Solution sol;
  for (int j = min_level(op.grid); j <= level; ++j) {
    sol = regularized_solve(hom, op, j, opts, warm);
    if (levels) levels->push_back(sol.report.levels.front());
    warm = sol.v.interior;
  }
  return sol;
}

Eigen::VectorXd nodal_residual(const Solution& s, const HomogenizedProblem& hom,
                               const FracLapOperator& op) {
  const Eigen::VectorXd eta = cutoff_eta(op.grid, s.j_final).values;
  return neg_laplacian(op.grid, s.v.interior, 0.0, 0.0) +
         nonlinear_term(s.v.interior, hom, op, s.j_final) - eta.cwiseProduct(hom.f);
}

json report_json(const SolveReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"j", l.j},
                      {"iterations", l.iterations},
                      {"lambda", l.lambda},
                      {"fixed_point_residual", l.fixed_point_residual},
                      {"equation_residual", l.equation_residual},
                      {"increment", l.increment}});
  return {{"levels", levels},
          {"equation_residual", r.equation_residual},
          {"fixed_point_residual", r.fixed_point_residual},
          {"sup_u", r.sup_u},
          {"sup_bound_base", r.sup_bound_base},
          {"bound_constant", r.bound_constant},
          {"sup_bound_ok", r.sup_bound_ok},
          {"boundary_gap", r.boundary_gap},
          {"first_node_gap", r.first_node_gap},
          {"fitted_exponent", r.exponent_defined ? json(r.fitted_exponent) : json(nullptr)},
          {"wall_time", r.wall_time}};
}

Table profile_table(const std::string& name, const Grid1D& g, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v, const Eigen::VectorXd& res) {
  Table t{name, {"x", "delta", "u", "v", "residual"}, {}};
  const Eigen::VectorXd d = boundary_distance(g).values;
  for (int i = 0; i < g.n; ++i)
    t.rows.push_back({format_number(g.x(i)), format_number(d[i]), format_number(u[i]),
                      format_number(v[i]), format_number(res[i])});
  return t;
}

// slope of log u against log delta on [4h, (b-a)/8]
double blowup_slope(const Grid1D& g, const Eigen::VectorXd& u) {
  const Eigen::VectorXd d = boundary_distance(g).values;
  std::vector<double> xs, ys;
  for (int i = 0; i < g.n; ++i)
    if (d[i] >= 4.0 * g.h && d[i] <= (g.b - g.a) / 8.0 && u[i] > 0.0) {
      xs.push_back(d[i]);
      ys.push_back(u[i]);
    }
  return fit_loglog(xs, ys);
}

// ---- evaluate ----------------------------------------------------------

void evaluate_getoor(const ExperimentConfig& c, ReportBundle& rep) {
  const auto t0 = Clock::now();
  const std::vector<double> sigmas = c.sigmas.empty() ? std::vector<double>{0.25, 0.5, 0.75} : c.sigmas;
  Table t{"getoor", {"sigma", "n", "constant", "max_rel_error"}, {}};
  double worst = 0.0;
  const Grid1D g = grid_of(c, c.n);
  for (double s : sigmas) {
    const FracParams P = make_frac_params(s);
    const double ref = closed_form_reference(ReferenceKind::getoor, P, 0.0);
    const Eigen::VectorXd D = eval_all(ball_barrier(g, s, 1.0), P);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i)
      if (std::abs(g.x(i)) <= 0.8) err = std::max(err, std::abs(D[i] - ref) / ref);
    worst = std::max(worst, err);
    t.rows.push_back({format_number(s), std::to_string(g.n), format_number(ref), format_number(err)});
    rep.records.push_back({{"profile", "getoor"}, {"sigma", s}, {"n", g.n}, {"constant", ref}, {"max_rel_error", err}});
    if (s == 0.5)
      rep.verdicts.push_back(make_verdict(1, "Getoor constant at sigma=0.5", ref, 1.0, 1e-12, "within"));
  }
  rep.tables.push_back(t);
  rep.verdicts.push_back(make_verdict(1, "Getoor max relative error on |x|<=0.8", worst, 0.0, 0.02, "<="));
  rep.verdicts.push_back(make_verdict(1, "Getoor runtime [s]", seconds_since(t0), 30.0, 0.0, "<="));
}

void evaluate_gaussian(const ExperimentConfig& c, ReportBundle& rep) {
  const auto t0 = Clock::now();
  const std::vector<double> sigmas = c.sigmas.empty() ? std::vector<double>{0.25, 0.5, 0.75} : c.sigmas;
  const Grid1D g = grid_of(c, c.n);
  Table t{"gaussian", {"sigma", "n", "max_rel_error"}, {}};
  double worst = 0.0;
  auto gauss = [](double x) { return std::exp(-x * x); };
  const auto u = sample_function(g, gauss, gauss, 0.0);
  // periodic reference on nodes-aligned samples; box far larger than the profile
  const SpectralEngine e = make_engine(g.h, 1 << 18);
  const int off = e.modes / 2 - g.n / 2;
  Eigen::VectorXd f(e.modes);
  for (int m = 0; m < e.modes; ++m) f[m] = gauss(g.x(0) + (m - off) * g.h);
  for (double s : sigmas) {
    const Eigen::VectorXd D = eval_all(u, make_frac_params(s));
    const Eigen::VectorXd ref = spectral_fraclap(e, f, s).segment(off, g.n);
    const double err = (D - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
    t.rows.push_back({format_number(s), std::to_string(g.n), format_number(err)});
    rep.records.push_back({{"profile", "gaussian"}, {"sigma", s}, {"n", g.n}, {"max_rel_error", err}});
  }
  rep.tables.push_back(t);
  rep.verdicts.push_back(make_verdict(2, "Gaussian Fourier-oracle relative error", worst, 0.0, 1e-3, "<="));
  rep.verdicts.push_back(make_verdict(2, "Gaussian runtime [s]", seconds_since(t0), 10.0, 0.0, "<="));
}

void evaluate_halfline(const ExperimentConfig& c, ReportBundle& rep) {
  const std::vector<double> sigmas = c.sigmas.empty() ? std::vector<double>{c.sigma} : c.sigmas;
  const std::vector<int> ns = c.ns.empty() ? std::vector<int>{127, 255, 511, 1023} : c.ns;
  Table t{"halfline", {"sigma", "n", "residual", "reduction"}, {}};
  double worst = std::numeric_limits<double>::infinity();
  const double lo = c.a + 0.25 * (c.b - c.a), hi = c.a + 0.75 * (c.b - c.a);
  for (double s : sigmas) {
    const FracParams P = make_frac_params(s);
    double prev = 0.0;
    for (int n : ns) {
      const Grid1D g = grid_of(c, n);
      auto f = [s](double x) { return x > 0.0 ? std::pow(x, s) : 0.0; };
      const auto u = sample_function(g, f, f, 0.0);
      const Eigen::VectorXd D = eval_all(u, P);
      // far field is zero past the truncation edge, so D tracks the missing tail
      const double edge = g.b + g.ext_radius;
      double res = 0.0;
      for (int i = 0; i < n; ++i) {
        const double x = g.x(i);
        if (x < lo || x > hi) continue;
        res = std::max(res, std::abs(D[i] - P.c_norm * halfline_power_tail(x, edge, s)));
      }
      const double red = prev > 0.0 ? prev / res : std::nan("");
      if (prev > 0.0) worst = std::min(worst, red);
      t.rows.push_back({format_number(s), std::to_string(n), format_number(res), format_number(red)});
      rep.records.push_back({{"profile", "halfline_power"}, {"sigma", s}, {"n", n}, {"residual", res}});
      prev = res;
    }
  }
  rep.tables.push_back(t);
  rep.verdicts.push_back(make_verdict(3, "x_+^sigma residual reduction per doubling (min)", worst, 1.5, 0.0, ">=",
                                      std::to_string(ns.size() - 1) + " doublings"));
}

void evaluate_indicator(const ExperimentConfig& c, ReportBundle& rep) {
  const Grid1D g = grid_of(c, c.n);
  const FracParams P = make_frac_params(c.sigma);
  ExtendedGridFunction u = constant_function(g, 0.0);
  u.interior.setOnes();
  u.trace_a = u.trace_b = 1.0;
  const Eigen::VectorXd D = eval_all(u, P);
  double err = 0.0;
  const double R = 0.5 * (c.b - c.a), mid = 0.5 * (c.a + c.b);
  for (int i = 0; i < g.n; ++i) {
    const double ref = closed_form_reference(ReferenceKind::indicator, P, g.x(i) - mid, R);
    err = std::max(err, std::abs(D[i] - ref) / std::abs(ref));
  }
  rep.records.push_back({{"profile", "indicator"}, {"sigma", c.sigma}, {"n", g.n}, {"max_rel_error", err}});
}

// ---- solve checks ------------------------------------------------------

void comparison_check(const ExperimentConfig& c, const Grid1D& g, const FracLapOperator& op, ReportBundle& rep) {
  const ProblemSpec spec = spec_of(c, g);
  const double mid = 0.5 * (c.a + c.b), R = 0.625 * (c.b - c.a);
  const ExtendedGridFunction ball = ball_barrier(g, c.sigma, R, mid);
  std::mt19937 rng(c.seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0), E(1e-3, 1.0), pos(0.0, 1.0);
  int violations = 0, failed_pairs = 0, hyp = 0;
  for (int trial = 0; trial < c.pairs; ++trial) {
    const double c1 = U(rng), c2 = U(rng), c3 = 3.0 * U(rng), k = 1.0 + 3.0 * pos(rng);
    auto w = sample_function(
        g, [&](double x) { return c1 + c2 * std::sin(k * x) + c3 * (x - mid) * (x - mid); },
        [&](double x) { return c1 * std::exp(-(x - mid) * (x - mid)); }, 0.0);
    ExtendedGridFunction super = w;
    const double eps = E(rng);
    super.interior += eps * ball.interior;
    super.trace_a += eps * ball.trace_a;
    super.trace_b += eps * ball.trace_b;
    super.ext_samples += eps * ball.ext_samples;
    super.far_value += eps * ball.far_value;
    const int lo = 1 + static_cast<int>(pos(rng) * (g.n / 2 - 1));
    const int hi = std::min(g.n - 1, lo + 1 + static_cast<int>(pos(rng) * (g.n / 2)));
    for (int i = lo; i < hi; ++i) super.interior[i] += 0.1 * pos(rng);
    const auto res = check_comparison(w, super, spec, op);
    violations += static_cast<int>(res.violations.size());
    failed_pairs += res.pass ? 0 : 1;
    hyp += res.hypotheses_hold ? 1 : 0;
  }
  rep.records.push_back({{"check", "comparison"}, {"pairs", c.pairs}, {"seed", c.seed},
                         {"violations", violations}, {"failed_pairs", failed_pairs},
                         {"pairs_with_operator_ordering", hyp}});
  rep.verdicts.push_back(make_verdict(4, "comparison violations over randomized pairs", violations, 0.0, 0.0, "<=",
                                      std::to_string(c.pairs) + " pairs"));
}

void linear_check(const ExperimentConfig& c, const Grid1D& g, const FracLapOperator& op, ReportBundle& rep) {
  ProblemSpec spec = spec_of(c, g);
  spec.p = 1.0;
  const HomogenizedProblem hom = homogenize(spec, op);
  SolverOptions o = c.solver;
  o.tol = std::min(o.tol, 1e-13);
  const int j = c.check_level;
  const Solution sol = regularized_solve(hom, op, j, o);

  const int n = g.n;
  const double ih2 = 1.0 / (g.h * g.h);
  const Eigen::VectorXd eta = cutoff_eta(g, j).values;
  Eigen::MatrixXd A = eta.asDiagonal() * op.weights;
  for (int i = 0; i < n; ++i) {
    A(i, i) += 2.0 * ih2;
    if (i > 0) A(i, i - 1) -= ih2;
    if (i + 1 < n) A(i, i + 1) -= ih2;
  }
  const Eigen::VectorXd direct = A.partialPivLu().solve(eta.cwiseProduct(hom.f - hom.Dspsi));
  const double diff = (direct - sol.v.interior).cwiseAbs().maxCoeff();
  rep.records.push_back({{"check", "linear_oracle"}, {"n", n}, {"level", j}, {"sup_difference", diff},
                         {"iterations", sol.report.levels.front().iterations}});
  rep.verdicts.push_back(make_verdict(5, "p=1 Picard vs direct linear solve (sup)", diff, 0.0, 1e-8, "<=",
                                      "n=" + std::to_string(n)));
}

void uniqueness_check(const ExperimentConfig& c, const Grid1D& g, ReportBundle& rep) {
  std::vector<UniquenessCase> cases = c.uniqueness_cases;
  if (cases.empty()) cases.push_back({c.sigma, c.p, c.g_a, 0.0});
  double worst = 0.0;
  const int j = c.check_level;
  for (const auto& uc : cases) {
    const FracLapOperator op = assemble_operator(g, make_frac_params(uc.sigma));
    const ProblemSpec spec = make_problem(g, uc.sigma, uc.p, uc.g, uc.g, 0.0, constant_source(g, uc.f));
    const HomogenizedProblem hom = homogenize(spec, op);
    const Solution s0 = regularized_solve(hom, op, j, c.solver);
    const Eigen::VectorXd v0 = dirichlet_inverse(cutoff_eta(g, j).values.cwiseProduct(hom.f), g);
    const Solution s1 = regularized_solve(hom, op, j, c.solver, v0);
    const double diff = (s0.v.interior - s1.v.interior).cwiseAbs().maxCoeff();
    worst = std::max(worst, diff / c.solver.tol);
    rep.records.push_back({{"check", "uniqueness"}, {"sigma", uc.sigma}, {"p", uc.p}, {"g", uc.g}, {"f", uc.f},
                           {"level", j}, {"sup_difference", diff}});
  }
  rep.verdicts.push_back(make_verdict(6, "uniqueness: max |v_a - v_b| / tol", worst, 10.0, 0.0, "<=",
                                      std::to_string(cases.size()) + " configurations"));
}

}  // namespace

// ---- public ------------------------------------------------------------

std::string to_string(GapClass c) {
  switch (c) {
    case GapClass::attains: return "ATTAINS";
    case GapClass::gap: return "GAP";
    case GapClass::undecided: return "UNDECIDED";
    case GapClass::error: return "ERROR";
  }
  return "?";
}

GapClass classify_gaps(const std::vector<double>& gaps, double threshold, double factor) {
  if (gaps.size() < 2) return GapClass::undecided;
  for (double g : gaps)
    if (!std::isfinite(g)) return GapClass::error;
  const double ratio = gaps.back() > 0.0 ? gaps.front() / gaps.back() : std::numeric_limits<double>::infinity();
  if (ratio >= factor) return GapClass::attains;
  if (std::all_of(gaps.begin(), gaps.end(), [&](double g) { return g >= threshold; })) return GapClass::gap;
  return GapClass::undecided;
}

SingularSource make_source(const SourceProfile& p, const Grid1D& g) {
  SingularSource s;
  s.alpha = 2.0;
  s.smooth_part = Eigen::VectorXd::Zero(g.n);
  if (p.name == "zero") return s;
  if (p.name == "one") {
    s.smooth_part.setOnes();
  } else if (p.name == "bump") {
    for (int i = 0; i < g.n; ++i) {
      const double xi = (2.0 * g.x(i) - g.a - g.b) / (g.b - g.a);
      s.smooth_part[i] = std::exp(1.0 - 1.0 / (1.0 - xi * xi));
    }
  } else if (p.name == "delta_power") {
    s.alpha = p.alpha;
    s.smooth_part.setConstant(p.kappa);
  } else {
    throw ConfigError("field 'data.source.profile': unknown profile '" + p.name + "'");
  }
  return s;
}

double halfline_power_tail(double x, double edge, double sigma) {
  const double rho = edge - x;
  if (!(x > 0.0 && rho > 0.0) || x / rho > 0.95) throw DomainError("halfline_power_tail needs 0 < x, x/(edge-x) <= 0.95");
  // binomial series of (1 + x/t)^sigma under t = y - x
  double coef = 1.0, sum = 0.0, pw = std::pow(rho, -sigma);
  for (int k = 0; k < 5000; ++k) {
    const double term = coef * pw / (sigma + k);
    sum += term;
    if (k > 2 && std::abs(term) < 1e-17 * std::abs(sum)) break;
    coef *= (sigma - k) / (k + 1.0);
    pw *= x / rho;
  }
  return sum;
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  check_keys(j, "", {"kind", "name", "geometry", "physics", "data", "solver", "output", "evaluate", "sweep",
                     "rates", "large", "norms", "barriers", "checks", "threads"});
  ExperimentConfig c;
  c.raw = j;
  if (!j.contains("kind")) bad("kind", "missing");
  read(&j, "", "kind", c.kind);
  c.kind = j.at("kind").get<std::string>();
  if (j.contains("name")) {
    if (!j.at("name").is_string()) bad("name", "expected a string");
    c.name = j.at("name").get<std::string>();
  }
  if (j.contains("threads")) {
    if (!j.at("threads").is_number_integer()) bad("threads", "expected an integer");
    c.threads = j.at("threads").get<int>();
  }

  if (const json* s = section(j, "geometry")) {
    check_keys(*s, "geometry", {"a", "b", "n", "L"});
    read(s, "geometry", "a", c.a);
    read(s, "geometry", "b", c.b);
    read(s, "geometry", "n", c.n);
    read(s, "geometry", "L", c.L);
  }
  if (const json* s = section(j, "physics")) {
    check_keys(*s, "physics", {"sigma", "p", "kappa"});
    read(s, "physics", "sigma", c.sigma);
    read(s, "physics", "p", c.p);
    read(s, "physics", "kappa", c.kappa);
  }
  if (const json* s = section(j, "data")) {
    check_keys(*s, "data", {"g_a", "g_b", "g", "h", "source"});
    double g = std::nan("");
    read(s, "data", "g", g);
    if (!std::isnan(g)) c.g_a = c.g_b = g;
    read(s, "data", "g_a", c.g_a);
    read(s, "data", "g_b", c.g_b);
    read(s, "data", "h", c.h);
    if (s->contains("source")) {
      const json& src = s->at("source");
      if (src.is_string()) {
        c.source.name = src.get<std::string>();
      } else if (src.is_object()) {
        check_keys(src, "data.source", {"profile", "alpha", "kappa"});
        read(&src, "data.source", "profile", c.source.name);
        read(&src, "data.source", "alpha", c.source.alpha);
        read(&src, "data.source", "kappa", c.source.kappa);
      } else {
        bad("data.source", "expected a profile name or object");
      }
    }
  }
  if (const json* s = section(j, "solver")) {
    check_keys(*s, "solver", {"tol", "damping", "max_iter", "level", "level_tol"});
    read(s, "solver", "tol", c.solver.tol);
    read(s, "solver", "damping", c.solver.damping);
    read(s, "solver", "max_iter", c.solver.max_iter);
    read(s, "solver", "level", c.level);
    read(s, "solver", "level_tol", c.solver.level_tol);
  }
  if (const json* s = section(j, "output")) {
    check_keys(*s, "output", {"dir", "stem"});
    read(s, "output", "dir", c.out_dir);
    read(s, "output", "stem", c.stem);
  }
  if (const json* s = section(j, "evaluate")) {
    check_keys(*s, "evaluate", {"profile", "sigmas", "ns"});
    read(s, "evaluate", "profile", c.profile);
    read(s, "evaluate", "sigmas", c.sigmas);
    read(s, "evaluate", "ns", c.ns);
  }
  if (const json* s = section(j, "sweep")) {
    check_keys(*s, "sweep", {"sigmas", "ps", "ns", "gap_threshold", "refine_factor"});
    read(s, "sweep", "sigmas", c.sigmas);
    read(s, "sweep", "ps", c.ps);
    read(s, "sweep", "ns", c.ns);
    read(s, "sweep", "gap_threshold", c.gap_threshold);
    read(s, "sweep", "refine_factor", c.refine_factor);
  }
  if (const json* s = section(j, "rates")) {
    check_keys(*s, "rates", {"kind", "ns", "g", "level", "tolerance", "g_max"});
    read(s, "rates", "kind", c.rate_kind);
    read(s, "rates", "ns", c.ns);
    read(s, "rates", "g", c.g_level);
    read(s, "rates", "level", c.level);
    read(s, "rates", "tolerance", c.rate_tolerance);
    read(s, "rates", "g_max", c.g_max);
  }
  if (const json* s = section(j, "large")) {
    check_keys(*s, "large", {"ns", "g_max", "tolerance"});
    read(s, "large", "ns", c.ns);
    read(s, "large", "g_max", c.g_max);
    read(s, "large", "tolerance", c.rate_tolerance);
  }
  if (const json* s = section(j, "norms")) {
    check_keys(*s, "norms", {"ns", "inequality_ns", "family", "family_file", "p", "theta"});
    read(s, "norms", "ns", c.ns);
    read(s, "norms", "inequality_ns", c.inequality_ns);
    read(s, "norms", "family", c.family);
    read(s, "norms", "p", c.norm_p);
    read(s, "norms", "theta", c.norm_theta);
    std::string file;
    read(s, "norms", "family_file", file);
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) bad("norms.family_file", "cannot open '" + file + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      c.family = ss.str();
    }
  }
  if (const json* s = section(j, "barriers")) {
    check_keys(*s, "barriers", {"ns", "alphas", "betas", "radius"});
    read(s, "barriers", "ns", c.ns);
    read(s, "barriers", "alphas", c.alphas);
    read(s, "barriers", "betas", c.betas);
    read(s, "barriers", "radius", c.ball_radius);
  }
  if (const json* s = section(j, "checks")) {
    check_keys(*s, "checks", {"comparison", "linear_oracle", "uniqueness", "seed", "pairs", "level"});
    read(s, "checks", "seed", c.seed);
    read(s, "checks", "pairs", c.pairs);
    read(s, "checks", "level", c.check_level);
    c.check_comparison = s->contains("comparison") && s->at("comparison").get<bool>();
    c.check_linear = s->contains("linear_oracle") && s->at("linear_oracle").get<bool>();
    if (s->contains("uniqueness")) {
      const json& u = s->at("uniqueness");
      if (u.is_boolean()) {
        c.check_uniqueness = u.get<bool>();
      } else if (u.is_array()) {
        c.check_uniqueness = true;
        for (std::size_t k = 0; k < u.size(); ++k) {
          const std::string where = "checks.uniqueness[" + std::to_string(k) + "]";
          if (!u[k].is_object()) bad(where, "expected an object");
          check_keys(u[k], where, {"sigma", "p", "g", "f"});
          UniquenessCase uc;
          read(&u[k], where, "sigma", uc.sigma);
          read(&u[k], where, "p", uc.p);
          read(&u[k], where, "g", uc.g);
          read(&u[k], where, "f", uc.f);
          c.uniqueness_cases.push_back(uc);
        }
      } else {
        bad("checks.uniqueness", "expected a boolean or an array of cases");
      }
    }
  }
  if (c.stem.empty()) c.stem = c.name;
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

void validate(const ExperimentConfig& c) {
  static const std::set<std::string> kinds = {"evaluate", "solve", "dichotomy_sweep", "rates",
                                              "large_solutions", "norms", "verify_barriers"};
  if (!kinds.count(c.kind)) bad("kind", "unknown kind '" + c.kind + "'");
  if (!(c.b > c.a)) bad("geometry.b", "must exceed geometry.a");
  if (c.n < 3) bad("geometry.n", "must be at least 3");
  if (!(c.L >= 0.0)) bad("geometry.L", "must be non-negative");
  require_sigma(c.sigma, "physics.sigma");
  if (!(c.p >= 1.0)) bad("physics.p", "must be >= 1, got " + format_number(c.p));
  if (!(c.kappa > 0.0)) bad("physics.kappa", "must be positive");
  static const std::set<std::string> profiles = {"zero", "one", "bump", "delta_power"};
  if (!profiles.count(c.source.name)) bad("data.source.profile", "unknown profile '" + c.source.name + "'");
  if (!(c.source.alpha >= 0.0 && c.source.alpha <= 2.0)) bad("data.source.alpha", "must lie in [0,2]");
  if (!(c.solver.tol > 0.0)) bad("solver.tol", "must be positive");
  if (!(c.solver.damping > 0.0 && c.solver.damping <= 1.0)) bad("solver.damping", "must lie in (0,1]");
  if (c.solver.max_iter < 1) bad("solver.max_iter", "must be positive");
  if (c.level < 0) bad("solver.level", "must be non-negative");
  for (double s : c.sigmas) require_sigma(s, c.kind == "dichotomy_sweep" ? "sweep.sigmas" : "evaluate.sigmas");
  for (double p : c.ps)
    if (!(p >= 1.0)) bad("sweep.ps", "entries must be >= 1");
  for (int n : c.ns)
    if (n < 3) bad("ns", "entries must be at least 3");
  if (c.threads < 1) bad("threads", "must be at least 1");
  if (!(c.gap_threshold > 0.0)) bad("sweep.gap_threshold", "must be positive");
  if (!(c.refine_factor > 1.0)) bad("sweep.refine_factor", "must exceed 1");
  if (c.kind == "evaluate") {
    static const std::set<std::string> ev = {"getoor", "gaussian", "halfline_power", "indicator"};
    if (!ev.count(c.profile)) bad("evaluate.profile", "unknown profile '" + c.profile + "'");
  }
  if (c.kind == "rates") {
    static const std::set<std::string> rk = {"decay", "blowup", "singular_source"};
    if (!rk.count(c.rate_kind)) bad("rates.kind", "unknown rate kind '" + c.rate_kind + "'");
  }
  if (c.kind == "dichotomy_sweep" && (c.sigmas.empty() || c.ps.empty()))
    bad(c.sigmas.empty() ? "sweep.sigmas" : "sweep.ps", "must be non-empty");
  if (!(c.g_max >= 1.0)) bad("large.g_max", "must be >= 1");
  if (c.pairs < 1) bad("checks.pairs", "must be positive");
  for (const auto& u : c.uniqueness_cases) {
    require_sigma(u.sigma, "checks.uniqueness.sigma");
    if (!(u.p >= 1.0)) bad("checks.uniqueness.p", "must be >= 1");
  }
  if (!c.family.empty()) parse_family(c.family);
}

ReportBundle evaluate_experiment(const ExperimentConfig& c) {
  ReportBundle rep;
  rep.kind = "evaluate";
  if (c.profile == "getoor") evaluate_getoor(c, rep);
  else if (c.profile == "gaussian") evaluate_gaussian(c, rep);
  else if (c.profile == "halfline_power") evaluate_halfline(c, rep);
  else evaluate_indicator(c, rep);
  return rep;
}

ReportBundle solve_experiment(const ExperimentConfig& c) {
  ReportBundle rep;
  rep.kind = "solve";
  const Grid1D g = grid_of(c, c.n);
  const FracLapOperator op = assemble_operator(g, make_frac_params(c.sigma));
  const ProblemSpec spec = spec_of(c, g);
  const HomogenizedProblem hom = homogenize(spec, op);
  Solution sol;
  if (c.level > 0) {
    std::vector<LevelStats> levels;
    sol = solve_capped(hom, op, c.level, c.solver, &levels);
    sol.report.levels = levels;
  } else {
    sol = continuation_solve(hom, op, c.solver);
  }
  json r = report_json(sol.report);
  r["j_final"] = sol.j_final;
  r["n"] = g.n;
  r["Dspsi_constant"] = hom.Dspsi_constant;
  r["u_max_abs"] = sol.u.interior.cwiseAbs().maxCoeff();
  rep.records.push_back(r);
  rep.tables.push_back(profile_table("profile", g, sol.u.interior, sol.v.interior, nodal_residual(sol, hom, op)));

  if (c.check_comparison) comparison_check(c, g, op, rep);
  if (c.check_linear) linear_check(c, g, op, rep);
  if (c.check_uniqueness) uniqueness_check(c, g, rep);
  return rep;
}

ReportBundle dichotomy_sweep(const std::vector<double>& sigmas, const std::vector<double>& ps,
                             const ExperimentConfig& base) {
  if (sigmas.empty() || ps.empty()) throw ConfigError("field 'sweep': sigma and p lists must be non-empty");
  const std::vector<int> ns = base.ns.empty() ? std::vector<int>{127, 511, 2047} : base.ns;
  struct Cell {
    double sigma, p;
    std::vector<double> gaps, first_gaps;
    GapClass cls = GapClass::undecided;
    std::string error;
  };
  const auto t0 = Clock::now();
  std::vector<Cell> cells;
  for (double s : sigmas)
    for (double p : ps) cells.push_back({s, p, {}, {}, GapClass::undecided, ""});

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      Cell& cell = cells[k];
      try {
        for (int n : ns) {
          const Grid1D g = make_grid(base.a, base.b, n, base.L);
          const FracLapOperator op = assemble_operator(g, make_frac_params(cell.sigma));
          const ProblemSpec spec = make_problem(g, cell.sigma, cell.p, 1.0, 1.0, 0.0, constant_source(g, 0.0));
          const Solution sol = continuation_solve(homogenize(spec, op), op, base.solver);
          cell.gaps.push_back(sol.report.boundary_gap);
          cell.first_gaps.push_back(sol.report.first_node_gap);
        }
        cell.cls = classify_gaps(cell.gaps, base.gap_threshold, base.refine_factor);
      } catch (const std::exception& e) {
        cell.cls = GapClass::error;
        cell.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nt = std::max(1, std::min<int>(base.threads, static_cast<int>(cells.size())));
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  ReportBundle rep;
  rep.kind = "dichotomy_sweep";
  Table t{"phase", {"sigma", "p", "sigma_p", "class"}, {}};
  for (int n : ns) t.header.push_back("gap_n" + std::to_string(n));
  for (int n : ns) t.header.push_back("first_node_gap_n" + std::to_string(n));
  for (const Cell& cell : cells) {
    const double sp = cell.sigma * cell.p;
    std::vector<std::string> row = {format_number(cell.sigma), format_number(cell.p), format_number(sp),
                                    to_string(cell.cls)};
    for (std::size_t k = 0; k < ns.size(); ++k)
      row.push_back(k < cell.gaps.size() ? format_number(cell.gaps[k]) : "nan");
    for (std::size_t k = 0; k < ns.size(); ++k)
      row.push_back(k < cell.first_gaps.size() ? format_number(cell.first_gaps[k]) : "nan");
    t.rows.push_back(row);
    json r = {{"sigma", cell.sigma}, {"p", cell.p}, {"sigma_p", sp}, {"class", to_string(cell.cls)},
              {"ns", ns}, {"gaps", cell.gaps}, {"first_node_gaps", cell.first_gaps}};
    if (!cell.error.empty()) r["error"] = cell.error;
    rep.records.push_back(r);

    const std::string where = "(sigma,p)=(" + format_number(cell.sigma) + "," + format_number(cell.p) + ")";
    const double ratio = cell.gaps.size() == ns.size() && cell.gaps.back() > 0.0
                             ? cell.gaps.front() / cell.gaps.back()
                             : std::nan("");
    if (sp < 0.95) {
      Verdict v = make_verdict(8, "ATTAINS " + where + " gap ratio coarse/fine", ratio, base.refine_factor, 0.0, ">=",
                               to_string(cell.cls));
      v.pass = v.pass && cell.cls == GapClass::attains;
      rep.verdicts.push_back(v);
    } else if (sp >= 1.0 - 1e-12) {
      const double mn = cell.gaps.empty() ? std::nan("") : *std::min_element(cell.gaps.begin(), cell.gaps.end());
      Verdict v = make_verdict(8, "GAP " + where + " min gap", mn, base.gap_threshold, 0.0, ">=",
                               to_string(cell.cls) + ", ratio " + format_number(ratio));
      v.pass = v.pass && cell.cls == GapClass::gap;
      rep.verdicts.push_back(v);
    }
  }
  rep.tables.push_back(t);
  rep.verdicts.push_back(make_verdict(8, "sweep runtime [s]", seconds_since(t0), 1200.0, 0.0, "<=",
                                      std::to_string(nt) + " workers"));
  return rep;
}

ReportBundle rates(const std::string& kind, const ExperimentConfig& c) {
  if (kind == "blowup") return large_solutions_experiment(c);
  const auto t0 = Clock::now();
  ReportBundle rep;
  rep.kind = "rates";
  const double sp = c.sigma * c.p;
  if (!(sp < 1.0)) throw OutOfWindow(kind + " needs sigma*p < 1");

  if (kind == "decay") {
    const std::vector<int> ns = c.ns.empty() ? std::vector<int>{512, 1024, 2048} : c.ns;
    const double alpha = c.source.alpha > 0.0 ? c.source.alpha : 0.0;
    if (!(alpha > 0.0)) throw OutOfWindow("decay needs a source exponent alpha > 0");
    const double predicted = std::min({1.0, 2.0 * (1.0 - sp), alpha});
    const double tol = c.rate_tolerance > 0.0 ? c.rate_tolerance : 0.15;
    Table t{"decay", {"n", "fitted_exponent", "predicted", "fit_points", "boundary_gap"}, {}};
    std::vector<double> fits;
    for (int n : ns) {
      const Grid1D g = grid_of(c, n);
      const FracLapOperator op = assemble_operator(g, make_frac_params(c.sigma));
      ExperimentConfig cc = c;
      cc.g_a = cc.g_b = c.g_level;
      const ProblemSpec spec = spec_of(cc, g);
      const Solution sol = continuation_solve(homogenize(spec, op), op, c.solver);
      const BoundaryDiagnostics d = diagnose_boundary(sol, spec);
      const double fit = d.exponent_defined ? d.fitted_exponent : std::nan("");
      fits.push_back(fit);
      t.rows.push_back({std::to_string(n), format_number(fit), format_number(predicted), std::to_string(d.fit_points),
                        format_number(d.boundary_gap)});
      rep.records.push_back({{"n", n}, {"fitted_exponent", fit}, {"predicted", predicted}, {"g", c.g_level},
                             {"solve", report_json(sol.report)}});
      rep.verdicts.push_back(make_verdict(7, "decay exponent n=" + std::to_string(n), fit, predicted, tol, "within"));
    }
    const auto [lo, hi] = std::minmax_element(fits.begin(), fits.end());
    rep.verdicts.push_back(make_verdict(7, "decay exponent spread across n", *hi - *lo, 0.0, tol, "<="));
    rep.verdicts.push_back(make_verdict(7, "decay runtime [s]", seconds_since(t0), 300.0, 0.0, "<="));
    rep.tables.push_back(t);
    return rep;
  }

  // singular source f = kappa delta^-2
  const std::vector<int> ns = c.ns.empty() ? std::vector<int>{256, 512, 1024} : c.ns;
  const int level = c.level > 0 ? c.level : 5;
  const double tol = c.rate_tolerance > 0.0 ? c.rate_tolerance : 0.20;
  Table t{"singular_floor", {"n", "j", "floor"}, {}};
  std::vector<double> floors;
  double min_growth = std::numeric_limits<double>::infinity();
  double lower_margin = std::numeric_limits<double>::infinity();
  for (int n : ns) {
    const Grid1D g = grid_of(c, n);
    const FracLapOperator op = assemble_operator(g, make_frac_params(c.sigma));
    SingularSource src{0.0, Eigen::VectorXd::Constant(n, c.kappa)};
    const ProblemSpec spec = make_problem(g, c.sigma, c.p, c.g_a, c.g_b, c.h, src);
    const HomogenizedProblem hom = homogenize(spec, op);

    CalibrationInputs in;
    in.p = c.p;
    in.kappa = c.kappa;
    const CalibratedSupersolution sub = calibrate_supersolution(SupersolutionKind::singular_sub, g, op.params, in);

    std::optional<Eigen::VectorXd> warm;
    double prev = std::nan("");
    const Eigen::VectorXd x = g.nodes();
    const double third = (c.b - c.a) / 6.0, mid = 0.5 * (c.a + c.b);
    double floor_at_level = std::nan("");
    for (int j = min_level(g); j <= level; ++j) {
      const Solution s = regularized_solve(hom, op, j, c.solver, warm);
      warm = s.v.interior;
      double fl = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i)
        if (std::abs(x[i] - mid) <= third) fl = std::min(fl, s.u.interior[i]);
      t.rows.push_back({std::to_string(n), std::to_string(j), format_number(fl)});
      if (!std::isnan(prev)) min_growth = std::min(min_growth, fl - prev);
      prev = fl;
      if (j == level) {
        floor_at_level = fl;
        // compared on the middle third only: the cut-off source leaves u below eps v_alpha near the boundary
        for (int i = 0; i < n; ++i)
          if (std::abs(x[i] - mid) <= third)
            lower_margin = std::min(lower_margin, s.u.interior[i] - sub.w.interior[i]);
        rep.records.push_back({{"n", n}, {"level", j}, {"floor", fl}, {"eps", sub.eps}, {"alpha", sub.alpha},
                               {"first_node_value", s.u.interior[0]}, {"solve", report_json(s.report)}});
      }
    }
    floors.push_back(floor_at_level);
  }
  const auto [lo, hi] = std::minmax_element(floors.begin(), floors.end());
  rep.verdicts.push_back(make_verdict(9, "singular-source interior floor (min over n)", *lo, 0.0, 0.0, ">="));
  rep.verdicts.back().pass = rep.verdicts.back().pass && *lo > 0.0;
  rep.verdicts.push_back(make_verdict(9, "singular-source floor variation across n", (*hi - *lo) / *lo, 0.0, tol, "<="));
  rep.verdicts.push_back(make_verdict(9, "u - eps v_alpha on the middle third (min)", lower_margin, 0.0, 0.0, ">="));
  rep.verdicts.push_back(make_verdict(9, "floor growth per cutoff level (min)", min_growth, 0.0, 0.0, ">=",
                                      "no finite limit as j grows"));
  rep.tables.push_back(t);
  return rep;
}

ReportBundle large_solutions_experiment(const ExperimentConfig& c) {
  ReportBundle rep;
  rep.kind = "large_solutions";
  const double gam = std::abs(gamma_exponent(c.sigma, c.p));
  const std::vector<int> ns = c.ns.empty() ? std::vector<int>{511, 2047} : c.ns;
  const double tol = c.rate_tolerance > 0.0 ? c.rate_tolerance : 0.20;
  Table t{"ladder", {"n", "g", "midpoint", "first_node", "slope"}, {}};
  for (int n : ns) {
    const Grid1D g = grid_of(c, n);
    const FracLapOperator op = assemble_operator(g, make_frac_params(c.sigma));
    const ProblemSpec tmpl = make_problem(g, c.sigma, c.p, 1.0, 1.0, 0.0, constant_source(g, 0.0));
    const std::string tag = " n=" + std::to_string(n);
    try {
      const LargeSolutionSequence seq = solve_large(tmpl, op, c.g_max, c.solver);
      double slope = std::nan("");
      for (std::size_t k = 0; k < seq.g_levels.size(); ++k) {
        const Eigen::VectorXd& u = seq.solutions[k].u.interior;
        slope = blowup_slope(g, u);
        t.rows.push_back({std::to_string(n), format_number(seq.g_levels[k]), format_number(seq.midpoint_values[k]),
                          format_number(u[0]), format_number(slope)});
      }
      rep.records.push_back({{"n", n}, {"g_levels", seq.g_levels}, {"midpoints", seq.midpoint_values},
                             {"barrier_A", seq.barrier.A}, {"barrier_B", seq.barrier.B}, {"slope", slope},
                             {"gamma", gam}});
      rep.verdicts.push_back(make_verdict(10, "g-ladder monotone" + tag, seq.monotone ? 1 : 0, 1, 0, "=="));
      rep.verdicts.push_back(make_verdict(10, "dominated by calibrated supersolution" + tag, seq.dominated ? 1 : 0, 1, 0, "=="));
      rep.verdicts.push_back(make_verdict(10, "blow-up exponent |slope|" + tag, std::abs(slope), gam, tol * gam, "within"));
    } catch (const MonotonicityViolation& e) {
      rep.records.push_back({{"n", n}, {"error", e.what()}});
      rep.verdicts.push_back(make_verdict(10, "g-ladder ordering" + tag, 0, 1, 0, "==", e.what()));
    }
  }
  rep.tables.push_back(t);
  return rep;
}

ReportBundle norms_experiment(const ExperimentConfig& c) {
  ReportBundle rep;
  rep.kind = "norms";
  const std::vector<FamilyMember> fam = c.family.empty() ? default_family() : parse_family(c.family);
  const std::vector<int> ns = c.ns.empty() ? std::vector<int>{255, 511, 1023} : c.ns;
  const EquivalenceReport eq = norm_equivalence(fam, {0.0, c.norm_p, c.norm_theta}, ns, c.a, c.b);
  Table te{"equivalence", {"n"}, {}};
  for (const auto& m : fam) te.header.push_back(m.name);
  te.header.push_back("C");
  for (std::size_t k = 0; k < ns.size(); ++k) {
    std::vector<std::string> row = {std::to_string(ns[k])};
    for (double r : eq.ratios[k]) row.push_back(format_number(r));
    row.push_back(format_number(eq.constants[k]));
    te.rows.push_back(row);
  }
  rep.tables.push_back(te);
  rep.records.push_back({{"target", "lp_equivalence"}, {"p", c.norm_p}, {"theta", c.norm_theta}, {"ns", ns},
                         {"constants", eq.constants}, {"variation", eq.variation}});
  rep.verdicts.push_back(make_verdict(11, "dyadic/weighted equivalence constant variation", eq.variation, 0.0, 0.10, "<="));

  InequalityOptions o;
  o.a = c.a;
  o.b = c.b;
  o.sigma = c.sigma;
  if (!c.inequality_ns.empty()) o.ns = c.inequality_ns;
  const ConstantsReport cr = verify_inequalities(fam, o);
  Table ti{"inequalities", {"target", "theta", "in_hypothesis", "n", "min_ratio", "max_ratio"}, {}};
  for (const auto& ck : cr.checks) {
    for (std::size_t k = 0; k < ck.ns.size(); ++k)
      ti.rows.push_back({ck.target, format_number(ck.theta), ck.in_hypothesis ? "1" : "0", std::to_string(ck.ns[k]),
                         format_number(ck.min_ratio[k]), format_number(ck.max_ratio[k])});
    rep.records.push_back({{"target", ck.target}, {"theta", ck.theta}, {"in_hypothesis", ck.in_hypothesis},
                           {"ns", ck.ns}, {"min_ratio", ck.min_ratio}, {"max_ratio", ck.max_ratio},
                           {"drift", ck.drift}, {"stable", ck.stable}});
    if (ck.in_hypothesis)
      rep.verdicts.push_back(make_verdict(11, ck.target + " theta=" + format_number(ck.theta) + " ratio drift",
                                          ck.stable ? ck.drift : std::nan(""), 0.0, o.tolerance, "<="));
  }
  rep.tables.push_back(ti);
  return rep;
}

ReportBundle barriers_experiment(const ExperimentConfig& c) {
  ReportBundle rep;
  rep.kind = "verify_barriers";
  const FracParams P = make_frac_params(c.sigma);
  const std::vector<int> ns = c.ns.empty() ? std::vector<int>{1023, 2047, 4095} : c.ns;
  const std::vector<double> alphas = c.alphas.empty() ? std::vector<double>{0.0, 0.25, 0.5} : c.alphas;
  const std::vector<double> betas = c.betas.empty() ? std::vector<double>{-0.4} : c.betas;
  Table t{"barriers", {"kind", "exponent", "n", "target", "rate", "claim", "min_ratio", "max_ratio"}, {}};
  auto run = [&](const std::string& kind, double e) {
    const RefinedBarrierReport r = verify_barrier_refinement(kind, e, c.a, c.b, ns, P);
    double drift = 0.0;
    for (double d : r.drift) drift = std::max(drift, d);
    for (const auto& lvl : r.levels)
      for (const auto& st : lvl.ratios)
        t.rows.push_back({kind, format_number(e), std::to_string(lvl.n), st.target, format_number(st.rate),
                          to_string(st.claim), format_number(st.min_ratio), format_number(st.max_ratio)});
    rep.records.push_back({{"kind", kind}, {"exponent", e}, {"ns", ns}, {"drift", r.drift}, {"stable", r.stable},
                           {"pass", r.pass}});
    Verdict v = make_verdict(12, kind + " " + format_number(e) + " max ratio drift", drift, 0.0, 0.15, "<=");
    v.pass = v.pass && r.pass;
    rep.verdicts.push_back(v);
  };
  for (double a : alphas) run("power", a);
  for (double b : betas) run("blowup", b);

  // -u_sigma'' >= 2 sigma N R^(2 sigma - 2) from the closed form
  const double R = c.ball_radius, bound = 2.0 * c.sigma * std::pow(R, 2.0 * c.sigma - 2.0);
  double margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 2000; ++k) {
    const double x = -R + 2.0 * R * (k + 0.5) / 2001.0;
    margin = std::min(margin, ball_barrier_neg_laplacian(x, c.sigma, R) - bound);
  }
  rep.records.push_back({{"kind", "ball"}, {"radius", R}, {"bound", bound}, {"min_margin", margin}});
  rep.verdicts.push_back(make_verdict(12, "-Lap u_sigma - 2 sigma N R^(2sigma-2) (min)", margin, 0.0, 0.0, ">="));
  rep.tables.push_back(t);
  return rep;
}

ReportBundle run_config(const ExperimentConfig& c) {
  const auto t0 = Clock::now();
  ReportBundle rep;
  if (c.kind == "evaluate") rep = evaluate_experiment(c);
  else if (c.kind == "solve") rep = solve_experiment(c);
  else if (c.kind == "dichotomy_sweep") rep = dichotomy_sweep(c.sigmas, c.ps, c);
  else if (c.kind == "rates") rep = rates(c.rate_kind, c);
  else if (c.kind == "large_solutions") rep = large_solutions_experiment(c);
  else if (c.kind == "norms") rep = norms_experiment(c);
  else rep = barriers_experiment(c);
  rep.metadata = {{"name", c.name},
                  {"kind", c.kind},
                  {"config_hash", config_hash(c.raw)},
                  {"version", kVersion},
                  {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                std::to_string(EIGEN_MINOR_VERSION)},
                  {"threads", c.threads},
                  {"wall_time", seconds_since(t0)}};
  return rep;
}

}  // namespace mixedfrac
