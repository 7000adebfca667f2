#include "mixedfrac/lototsky.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <sstream>
#include <unsupported/Eigen/FFT>

#include "mixedfrac/barriers.hpp"
#include "mixedfrac/errors.hpp"
#include "mixedfrac/fraclap.hpp"

namespace mixedfrac {

namespace {

const std::map<std::string, int>& formula_arity() {
  static const std::map<std::string, int> m = {{"tpow", 1}, {"tpoly", 3}, {"tcos", 2}, {"bump", 0}};
  return m;
}

double discrete_lp(const Eigen::VectorXd& w, double p, double h) {
  return std::pow(h * w.array().abs().pow(p).sum(), 1.0 / p);
}

// central differences with zero boundary values
Eigen::VectorXd first_derivative(const Eigen::VectorXd& u, double h) {
  const int n = static_cast<int>(u.size());
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    const double l = i > 0 ? u[i - 1] : 0.0;
    const double r = i + 1 < n ? u[i + 1] : 0.0;
    d[i] = (r - l) / (2.0 * h);
  }
  return d;
}

double relative_change(double x, double y) {
  return std::abs(y - x) / std::max(std::abs(x), std::numeric_limits<double>::min());
}

void summarize(InequalityCheck& c, double tolerance) {
  bool finite = true;
  for (const auto& row : c.ratios) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double r : row) {
      finite = finite && std::isfinite(r) && r > 0.0;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    c.min_ratio.push_back(lo);
    c.max_ratio.push_back(hi);
  }
  c.drift = 0.0;
  for (std::size_t k = 1; k < c.ratios.size(); ++k) {
    c.drift = std::max(c.drift, relative_change(c.max_ratio[k - 1], c.max_ratio[k]));
    c.drift = std::max(c.drift, relative_change(c.min_ratio[k - 1], c.min_ratio[k]));
  }
  c.stable = finite && c.drift <= tolerance;
  c.pass = c.in_hypothesis ? c.stable : true;
}

}  // namespace

SpectralEngine make_engine(double spacing, int modes) {
  if (!(spacing > 0.0) || modes < 2) throw DomainError("spectral box needs positive spacing and >= 2 modes");
  SpectralEngine e;
  e.spacing = spacing;
  e.modes = modes;
  e.xi.resize(modes);
  const double base = 2.0 * M_PI / (modes * spacing);
  for (int m = 0; m < modes; ++m) e.xi[m] = base * (m <= modes / 2 ? m : m - modes);
  return e;
}

SpectralEngine engine_for_support(double spacing, int support, int padding) {
  int modes = 2;
  while (modes < padding * std::max(support, 1)) modes *= 2;
  return make_engine(spacing, modes);
}

Eigen::VectorXd embed(const SpectralEngine& engine, const Eigen::VectorXd& u) {
  const int m = static_cast<int>(u.size());
  if (m > engine.modes) throw DomainError("samples do not fit in the spectral box");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(engine.modes);
  out.segment((engine.modes - m) / 2, m) = u;
  return out;
}

Eigen::VectorXd apply_symbol(const SpectralEngine& engine, const Eigen::VectorXd& periodic,
                             const std::function<double(double)>& symbol) {
  if (periodic.size() != engine.modes) throw GridMismatch("vector length differs from the box size");
  Eigen::FFT<double> fft;
  std::vector<double> in(periodic.data(), periodic.data() + periodic.size());
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, in);
  for (int m = 0; m < engine.modes; ++m) spec[m] *= symbol(std::abs(engine.xi[m]));
  std::vector<std::complex<double>> back;
  fft.inv(back, spec);
  Eigen::VectorXd out(engine.modes);
  for (int m = 0; m < engine.modes; ++m) out[m] = back[m].real();
  return out;
}

Eigen::VectorXd spectral_fraclap(const SpectralEngine& engine, const Eigen::VectorXd& periodic,
                                 double sigma) {
  return apply_symbol(engine, periodic, [sigma](double k) { return k == 0.0 ? 0.0 : std::pow(k, 2.0 * sigma); });
}

double bessel_norm(const Eigen::VectorXd& u, double s, double p, const SpectralEngine& engine) {
  if (!(s >= 0.0) || !(p >= 1.0)) throw DomainError("bessel_norm needs s >= 0 and p >= 1");
  if (4 * u.size() > engine.modes) throw DomainError("support exceeds a quarter of the spectral box");
  if (s == 0.0) return discrete_lp(u, p, engine.spacing);
  auto symbol = [s](double k) { return std::pow(1.0 + k * k, 0.5 * s); };
  const double v1 = discrete_lp(apply_symbol(engine, embed(engine, u), symbol), p, engine.spacing);
  const SpectralEngine big = make_engine(engine.spacing, 2 * engine.modes);
  const double v2 = discrete_lp(apply_symbol(big, embed(big, u), symbol), p, engine.spacing);
  if (!std::isfinite(v1) || !std::isfinite(v2)) throw DomainError("Bessel norm is not finite");
  if (v2 > 0.0 && std::abs(v2 - v1) >= 5e-3 * v2)
    throw AliasingDetected("Bessel norm moved by " + std::to_string(std::abs(v2 - v1) / v2) +
                           " when the box was doubled");
  return v2;
}

double weighted_lp_norm(const Eigen::VectorXd& u, double p, double theta,
                        const DistanceField& distance, double h, int N) {
  if (!(p >= 1.0)) throw DomainError("weighted_lp_norm needs p >= 1");
  if (!u.allFinite()) throw DomainError("weighted_lp_norm needs finite values");
  const int n = static_cast<int>(u.size());
  if (distance.values.size() != n) throw GridMismatch("distance field size differs");
  const double w = theta - N;
  if (w <= -1.0 && n >= 4) {
    // local power of |u| at each end from the first two nodes (delta = h, 2h)
    for (int side = 0; side < 2; ++side) {
      const double u0 = std::abs(u[side ? n - 1 : 0]);
      const double u1 = std::abs(u[side ? n - 2 : 1]);
      if (u0 == 0.0) continue;
      const double e = u1 > 0.0 ? std::log2(u1 / u0) : 0.0;
      if (p * e + w <= -1.0)
        throw NonIntegrableWeight("|u|^p delta^(theta-N) is not integrable at the boundary");
    }
  }
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::pow(std::abs(u[i]), p) * std::pow(distance.values[i], w);
  return std::pow(h * acc, 1.0 / p);
}

std::vector<double> dyadic_terms(const Eigen::VectorXd& u, const NormSpec& spec,
                                 const DyadicPartition& partition, const Grid1D& grid) {
  if (u.size() != grid.n) throw GridMismatch("function and grid sizes differ");
  std::vector<double> terms;
  for (int k = partition.k_min; k <= partition.k_max; ++k) {
    const Eigen::VectorXd piece = partition.piece(k).cwiseProduct(u);
    if (piece.cwiseAbs().maxCoeff() == 0.0) {
      terms.push_back(0.0);
      continue;
    }
    // u(2^-k y) on the nodes: same samples, spacing 2^k h
    const SpectralEngine eng = engine_for_support(std::ldexp(grid.h, k), grid.n);
    const double nrm = bessel_norm(piece, spec.s, spec.p, eng);
    terms.push_back(std::pow(2.0, -k * spec.theta) * std::pow(nrm, spec.p));
  }
  return terms;
}

double dyadic_weighted_norm(const Eigen::VectorXd& u, const NormSpec& spec,
                            const DyadicPartition& partition, const Grid1D& grid) {
  double acc = 0.0;
  for (double t : dyadic_terms(u, spec, partition, grid)) acc += t;
  return std::pow(acc, 1.0 / spec.p);
}

std::vector<FamilyMember> parse_family(const std::string& text) {
  std::vector<FamilyMember> out;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    FamilyMember m;
    if (!(in >> m.name)) continue;
    if (!(in >> m.formula)) throw ConfigError("family line " + std::to_string(lineno) + ": missing formula id");
    const auto it = formula_arity().find(m.formula);
    if (it == formula_arity().end())
      throw ConfigError("family line " + std::to_string(lineno) + ": unknown formula '" + m.formula + "'");
    double v;
    while (in >> v) m.params.push_back(v);
    if (!in.eof()) throw ConfigError("family line " + std::to_string(lineno) + ": bad parameter");
    if (static_cast<int>(m.params.size()) != it->second)
      throw ConfigError("family line " + std::to_string(lineno) + ": '" + m.formula + "' takes " +
                        std::to_string(it->second) + " parameters");
    out.push_back(std::move(m));
  }
  return out;
}

std::string format_family(const std::vector<FamilyMember>& family) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& m : family) {
    os << m.name << ' ' << m.formula;
    for (double v : m.params) os << ' ' << v;
    os << '\n';
  }
  return os.str();
}

std::vector<FamilyMember> default_family() {
  return parse_family(R"(tau_half   tpow 0.5
tau        tpow 1
tau_3half  tpow 1.5
tau2       tpow 2
tau3       tpow 3
skew1      tpoly 1 0.5 0
skew2      tpoly 2 -0.3 0.4
wave1      tcos 1 3
wave2      tcos 1.5 5
bump       bump
)");
}

Eigen::VectorXd evaluate_member(const FamilyMember& m, const Grid1D& grid) {
  const Eigen::VectorXd tau = torsion_function(grid).values;
  const Eigen::VectorXd x = grid.nodes();
  Eigen::VectorXd out(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double xi = (2.0 * x[i] - grid.a - grid.b) / (grid.b - grid.a);
    const auto& q = m.params;
    if (m.formula == "tpow") out[i] = std::pow(tau[i], q[0]);
    else if (m.formula == "tpoly") out[i] = std::pow(tau[i], q[0]) * (1.0 + q[1] * xi + q[2] * xi * xi);
    else if (m.formula == "tcos") out[i] = std::pow(tau[i], q[0]) * std::cos(q[1] * xi);
    else if (m.formula == "bump") out[i] = std::exp(-1.0 / (1.0 - xi * xi));
    else throw ConfigError("unknown formula '" + m.formula + "'");
  }
  return out;
}

EquivalenceReport norm_equivalence(const std::vector<FamilyMember>& family, const NormSpec& spec,
                                   const std::vector<int>& ns, double a, double b, double tolerance) {
  EquivalenceReport rep;
  rep.spec = spec;
  rep.ns = ns;
  NormSpec s0 = spec;
  s0.s = 0.0;
  for (int n : ns) {
    const Grid1D g = make_grid(a, b, n, 0.0);
    const DyadicPartition part = dyadic_partition(g);
    const DistanceField d = boundary_distance(g);
    std::vector<double> row;
    double C = 0.0;
    for (const auto& m : family) {
      const Eigen::VectorXd u = evaluate_member(m, g);
      const double r = dyadic_weighted_norm(u, s0, part, g) / weighted_lp_norm(u, spec.p, spec.theta, d, g.h, spec.N);
      row.push_back(r);
      C = std::max(C, std::max(r, 1.0 / r));
    }
    rep.ratios.push_back(row);
    rep.constants.push_back(C);
  }
  const auto [lo, hi] = std::minmax_element(rep.constants.begin(), rep.constants.end());
  rep.variation = (*hi - *lo) / *lo;
  rep.pass = std::isfinite(*hi) && rep.variation <= tolerance;
  return rep;
}

ConstantsReport verify_inequalities(const std::vector<FamilyMember>& family, const InequalityOptions& o) {
  const double sg = o.sigma, p = o.p;
  InequalityCheck integer{"integer_order", 0.0, p, 1.0};
  InequalityCheck interp{"interpolation", sg, o.q, 1.0};
  std::vector<InequalityCheck> weighted;
  for (double th : o.thetas) {
    InequalityCheck c{"weighted_fraclap", sg, p, th};
    c.in_hypothesis = th > (1.0 / o.r + 2.0 * sg) * p;
    weighted.push_back(c);
  }
  const double r_prime = (1.0 - sg) * p * o.q / (1.0 - sg * p);

  for (int n : o.ns) {
    const Grid1D g = make_grid(o.a, o.b, n, 0.0);
    const DyadicPartition part = dyadic_partition(g);
    const DistanceField d = boundary_distance(g);
    const FracLapOperator op = assemble_operator(g, make_frac_params(sg));
    std::vector<double> row_int, row_interp;
    std::vector<std::vector<double>> row_w(weighted.size());
    for (const auto& m : family) {
      const Eigen::VectorXd u = evaluate_member(m, g);

      const double lhs_a = dyadic_weighted_norm(u, {1.0, p, 1.0}, part, g);
      const Eigen::VectorXd du = d.values.cwiseProduct(first_derivative(u, g.h));
      const double rhs_a = std::pow(std::pow(weighted_lp_norm(u, p, 1.0, d, g.h), p) +
                                        std::pow(weighted_lp_norm(du, p, 1.0, d, g.h), p),
                                    1.0 / p);
      row_int.push_back(lhs_a / rhs_a);

      ExtendedGridFunction ue = constant_function(g, 0.0);
      ue.interior = u;
      const Eigen::VectorXd ds = apply(op, ue);
      const double lr = discrete_lp(u, o.r, g.h);
      for (std::size_t t = 0; t < weighted.size(); ++t) {
        const double th = weighted[t].theta;
        const double lhs = weighted_lp_norm(ds, p, th, d, g.h);
        const double rhs = dyadic_weighted_norm(u, {2.0 * sg, p, th - 2.0 * sg * p - o.eps}, part, g) + lr;
        row_w[t].push_back(lhs / rhs);
      }

      const double lhs_c = dyadic_weighted_norm(u, {2.0 * sg, p * o.q, 1.0}, part, g);
      const double rhs_c = std::pow(dyadic_weighted_norm(u, {0.0, r_prime, 1.0}, part, g), 1.0 - sg) *
                           std::pow(dyadic_weighted_norm(u, {2.0, o.q, 1.0}, part, g), sg);
      row_interp.push_back(lhs_c / rhs_c);
    }
    integer.ns.push_back(n);
    integer.ratios.push_back(row_int);
    interp.ns.push_back(n);
    interp.ratios.push_back(row_interp);
    for (std::size_t t = 0; t < weighted.size(); ++t) {
      weighted[t].ns.push_back(n);
      weighted[t].ratios.push_back(row_w[t]);
    }
  }

  ConstantsReport rep;
  summarize(integer, o.tolerance);
  rep.checks.push_back(integer);
  for (auto& c : weighted) {
    summarize(c, o.tolerance);
    rep.checks.push_back(c);
  }
  summarize(interp, o.tolerance);
  rep.checks.push_back(interp);
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const InequalityCheck& c) { return c.pass; });
  return rep;
}

}  // namespace mixedfrac
