#include "mixedfrac/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mixedfrac/errors.hpp"

namespace mixedfrac {
namespace {

ExtendedGridFunction zero_outside(const Grid1D& grid) {
  return constant_function(grid, 0.0);
}

ExtendedGridFunction lincomb(double s, const ExtendedGridFunction& u, double t,
                             const ExtendedGridFunction& v) {
  ExtendedGridFunction w = u;
  w.interior = s * u.interior + t * v.interior;
  w.trace_a = s * u.trace_a + t * v.trace_a;
  w.trace_b = s * u.trace_b + t * v.trace_b;
  w.ext_samples = s * u.ext_samples + t * v.ext_samples;
  w.far_value = s * u.far_value + t * v.far_value;
  return w;
}

double signed_power(double t, double p) {
  return std::copysign(std::pow(std::abs(t), p), t);
}

// Nodes with lo <= delta <= hi.
std::vector<int> window_nodes(const Grid1D& grid, double lo, double hi) {
  const auto d = boundary_distance(grid).values;
  std::vector<int> idx;
  for (int i = 0; i < grid.n; ++i) {
    if (d[i] >= lo * (1 - 1e-12) && d[i] <= hi * (1 + 1e-12)) idx.push_back(i);
  }
  return idx;
}

// At least one layer A_k = (2^-k-1, 2^-k+1) inside [4h, hi] with >= 10 nodes.
void require_window(const Grid1D& grid, double hi) {
  const int k = static_cast<int>(std::floor(std::log2(1.0 / (8.0 * grid.h))));
  const double lo_k = std::ldexp(1.0, -k - 1), hi_k = std::ldexp(1.0, -k + 1);
  const auto d = boundary_distance(grid).values;
  int count = 0;
  for (int i = 0; i < grid.n; ++i) {
    if (d[i] > lo_k && d[i] < hi_k && d[i] <= 0.5 * (grid.b - grid.a) && 2 * i < grid.n) ++count;
  }
  if (hi_k > hi * (1 + 1e-12) || count < 10) {
    std::ostringstream os;
    os << "window [" << 4 * grid.h << ", " << hi << "] holds no dyadic layer with 10 nodes (n=" << grid.n << ")";
    throw WindowTooThin(os.str());
  }
}

RatioStat ratio_stat(const std::string& target, double rate, RatioClaim claim,
                     const Eigen::VectorXd& values, const Eigen::VectorXd& d,
                     const std::vector<int>& nodes) {
  RatioStat r;
  r.target = target;
  r.rate = rate;
  r.claim = claim;
  r.min_ratio = std::numeric_limits<double>::infinity();
  r.max_ratio = -std::numeric_limits<double>::infinity();
  for (int i : nodes) {
    const double q = values[i] / std::pow(d[i], rate);
    r.min_ratio = std::min(r.min_ratio, q);
    r.max_ratio = std::max(r.max_ratio, q);
  }
  const bool finite = std::isfinite(r.min_ratio) && std::isfinite(r.max_ratio);
  switch (claim) {
    case RatioClaim::two_sided: r.pass = finite && r.min_ratio > 0.0; break;
    case RatioClaim::upper:
    case RatioClaim::lower: r.pass = finite; break;
  }
  return r;
}

BarrierReport finish(BarrierReport rep) {
  rep.pass = !rep.ratios.empty() &&
             std::all_of(rep.ratios.begin(), rep.ratios.end(), [](const RatioStat& r) { return r.pass; });
  return rep;
}

}  // namespace

TorsionFunction torsion_function(const Grid1D& grid) {
  TorsionFunction t;
  t.grid = grid;
  t.values.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    t.values[i] = 0.5 * (x - grid.a) * (grid.b - x);
  }
  t.closed_form_flag = true;
  return t;
}

TorsionFunction torsion_function_discrete(const Grid1D& grid) {
  TorsionFunction t;
  t.grid = grid;
  t.values = dirichlet_solve(grid, Eigen::VectorXd::Ones(grid.n));
  t.closed_form_flag = false;
  return t;
}

PowerBarrier power_barrier(const Grid1D& grid, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("alpha must lie in [0,1], got " + std::to_string(alpha));
  }
  PowerBarrier pb;
  pb.alpha = alpha;
  pb.u = zero_outside(grid);
  const auto tau = torsion_function(grid).values;
  pb.u.interior = alpha == 0.0 ? Eigen::VectorXd::Ones(grid.n)
                               : Eigen::VectorXd(tau.array().pow(alpha));
  pb.u.trace_a = pb.u.trace_b = alpha == 0.0 ? 1.0 : 0.0;
  return pb;
}

BlowupBarrier blowup_barrier(const Grid1D& grid, double sigma, double beta,
                             double delta0) {
  if (!(beta > -1.0 + sigma && beta < 0.0)) {
    std::ostringstream os;
    os << "beta=" << beta << " outside (-1+sigma, 0) for sigma=" << sigma;
    throw DomainError(os.str());
  }
  const double len = grid.b - grid.a;
  if (delta0 <= 0.0) delta0 = len / 8.0;
  if (delta0 > len / 4.0) throw DomainError("delta0 must be <= (b-a)/4");
  const double R = 0.5 * len, mid = 0.5 * (grid.a + grid.b);
  const double r0 = R - delta0;
  // quartic c0 + c2 r^2 + c4 r^4 matching delta^beta to second order at |r| = r0
  const double q = std::pow(delta0, beta);
  const double q1 = -beta * std::pow(delta0, beta - 1.0);
  const double q2 = beta * (beta - 1.0) * std::pow(delta0, beta - 2.0);
  const double c4 = (q2 - q1 / r0) / (8.0 * r0 * r0);
  const double c2 = (q1 - 4.0 * c4 * r0 * r0 * r0) / (2.0 * r0);
  const double c0 = q - c2 * r0 * r0 - c4 * r0 * r0 * r0 * r0;

  BlowupBarrier vb;
  vb.beta = beta;
  vb.delta0 = delta0;
  vb.u = zero_outside(grid);
  const auto d = boundary_distance(grid).values;
  for (int i = 0; i < grid.n; ++i) {
    const double r = grid.x(i) - mid;
    vb.u.interior[i] = d[i] < delta0 ? std::pow(d[i], beta)
                                     : c0 + c2 * r * r + c4 * r * r * r * r;
  }
  // linear trace with the same cell mean as delta^beta on [0,h]
  const double tr = std::pow(grid.h, beta) * (1.0 - beta) / (1.0 + beta);
  vb.u.trace_a = vb.u.trace_b = tr;
  return vb;
}

ExtendedGridFunction ball_barrier(const Grid1D& grid, double sigma, double R,
                                  double center) {
  auto f = [=](double x) {
    const double q = R * R - (x - center) * (x - center);
    return q > 0.0 ? std::pow(q, sigma) : 0.0;
  };
  return sample_function(grid, f, f, 0.0);
}

double ball_barrier_neg_laplacian(double x, double sigma, double R,
                                  double center) {
  const double y = x - center;
  const double q = R * R - y * y;
  if (!(q > 0.0)) throw DomainError("ball barrier Laplacian needs |x - center| < R");
  return 2.0 * sigma * (q + 2.0 * (1.0 - sigma) * y * y) / std::pow(q, 2.0 - sigma);
}

double gamma_exponent(double sigma, double p) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("sigma must lie in (0,1)");
  const double lo = (3.0 - sigma) / (1.0 + sigma), hi = 1.0 / sigma;
  if (!(p > lo && p < hi)) {
    std::ostringstream os;
    os << "p=" << p << " outside (" << lo << ", " << hi << ")";
    throw OutOfWindow(os.str());
  }
  const double g = -2.0 * (1.0 - sigma * p) / (p - 1.0);
  if (!(g > -1.0 + sigma && g < 0.0) ||
      std::abs((g - 2.0) - (g - 2.0 * sigma) * p) > 1e-12) {
    throw OutOfWindow("gamma identity check failed");
  }
  return g;
}

BarrierReport verify_barrier_bounds(const PowerBarrier& barrier,
                                    const FracParams& params) {
  const auto& g = barrier.u.grid;
  const double alpha = barrier.alpha;
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("bounds are stated for alpha in [0,1)");
  const double hi = (g.b - g.a) / 16.0;
  require_window(g, hi);
  const auto nodes = window_nodes(g, 4.0 * g.h, hi);
  const auto d = boundary_distance(g).values;
  const double s2 = 2.0 * params.sigma;

  BarrierReport rep;
  rep.kind = "power";
  rep.exponent = alpha;
  rep.sigma = params.sigma;
  rep.n = g.n;
  rep.window_lo = 4.0 * g.h;
  rep.window_hi = hi;
  const Eigen::VectorXd frac = eval_all(barrier.u, params);
  if (alpha == 0.0) {
    rep.ratios.push_back(ratio_stat("fractional", -s2, RatioClaim::two_sided, frac, d, nodes));
  } else {
    const Eigen::VectorXd lap = neg_laplacian(g, barrier.u.interior, barrier.u.trace_a, barrier.u.trace_b);
    rep.ratios.push_back(ratio_stat("laplacian", alpha - 2.0, RatioClaim::two_sided, lap, d, nodes));
    rep.ratios.push_back(ratio_stat("fractional", alpha - s2, RatioClaim::upper, frac, d, nodes));
    rep.ratios.push_back(ratio_stat("fractional", -s2, RatioClaim::lower, frac, d, nodes));
  }
  return finish(rep);
}

BarrierReport verify_barrier_bounds(const BlowupBarrier& barrier,
                                    const FracParams& params) {
  const auto& g = barrier.u.grid;
  const double hi = barrier.delta0 / 2.0;
  require_window(g, hi);
  const auto nodes = window_nodes(g, 4.0 * g.h, hi);
  const auto d = boundary_distance(g).values;

  BarrierReport rep;
  rep.kind = "blowup";
  rep.exponent = barrier.beta;
  rep.sigma = params.sigma;
  rep.n = g.n;
  rep.window_lo = 4.0 * g.h;
  rep.window_hi = hi;
  // the strip bound is stated for +Lap V_beta
  const Eigen::VectorXd lap = -neg_laplacian(g, barrier.u.interior, barrier.u.trace_a, barrier.u.trace_b);
  const Eigen::VectorXd frac = eval_all(barrier.u, params);
  rep.ratios.push_back(ratio_stat("laplacian", barrier.beta - 2.0, RatioClaim::two_sided, lap, d, nodes));
  rep.ratios.push_back(ratio_stat("fractional", barrier.beta - 2.0 * params.sigma, RatioClaim::two_sided, frac, d, nodes));
  return finish(rep);
}

RefinedBarrierReport verify_barrier_refinement(const std::string& kind,
                                               double exponent, double a,
                                               double b, const std::vector<int>& ns,
                                               const FracParams& params,
                                               double tolerance) {
  RefinedBarrierReport out;
  for (int n : ns) {
    const auto g = make_grid(a, b, n, 0.0);
    if (kind == "power") {
      out.levels.push_back(verify_barrier_bounds(power_barrier(g, exponent), params));
    } else if (kind == "blowup") {
      out.levels.push_back(verify_barrier_bounds(blowup_barrier(g, params.sigma, exponent), params));
    } else {
      throw DomainError("unknown barrier kind '" + kind + "'");
    }
  }
  out.stable = out.levels.size() >= 2;
  const auto& first = out.levels.front();
  for (std::size_t r = 0; r < first.ratios.size(); ++r) {
    double drift = 0.0;
    for (std::size_t l = 1; l < out.levels.size(); ++l) {
      const auto& p0 = out.levels[l - 1].ratios[r];
      const auto& p1 = out.levels[l].ratios[r];
      auto rel = [](double x, double y) {
        const double m = std::max(std::abs(x), std::abs(y));
        return m == 0.0 ? 0.0 : std::abs(x - y) / m;
      };
      // one-sided claims are compared through their empirical constant
      switch (p0.claim) {
        case RatioClaim::two_sided:
          drift = std::max({drift, rel(p0.min_ratio, p1.min_ratio), rel(p0.max_ratio, p1.max_ratio)});
          break;
        case RatioClaim::upper:
          drift = std::max(drift, rel(std::max(0.0, p0.max_ratio), std::max(0.0, p1.max_ratio)));
          break;
        case RatioClaim::lower:
          drift = std::max(drift, rel(std::max(0.0, -p0.min_ratio), std::max(0.0, -p1.min_ratio)));
          break;
      }
    }
    out.drift.push_back(drift);
    if (drift > tolerance) out.stable = false;
  }
  out.pass = out.stable && std::all_of(out.levels.begin(), out.levels.end(),
                                       [](const BarrierReport& r) { return r.pass; });
  return out;
}

Eigen::VectorXd operator_residual(const ExtendedGridFunction& w,
                                  const FracParams& params, double p,
                                  const Eigen::VectorXd& f) {
  const Eigen::VectorXd lap = neg_laplacian(w.grid, w.interior, w.trace_a, w.trace_b);
  const Eigen::VectorXd ds = eval_all(w, params);
  Eigen::VectorXd r(w.grid.n);
  for (int i = 0; i < w.grid.n; ++i) r[i] = lap[i] + signed_power(ds[i], p) - f[i];
  return r;
}

CalibratedSupersolution calibrate_supersolution(SupersolutionKind kind,
                                                const Grid1D& grid,
                                                const FracParams& params,
                                                const CalibrationInputs& in) {
  const double sg = params.sigma, p = in.p;
  const int n = grid.n;
  CalibratedSupersolution cs;
  cs.kind = kind;
  cs.window_lo = 4.0 * grid.h;
  cs.window_hi = 0.5 * (grid.b - grid.a);
  const auto nodes = window_nodes(grid, cs.window_lo, cs.window_hi);
  const auto d = boundary_distance(grid).values;

  // both pieces of every candidate are fixed; only the coefficients move
  ExtendedGridFunction base1, base2;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  bool want_nonneg = true;
  double alpha = in.alpha < 0.0 ? 0.5 * sg : in.alpha;
  switch (kind) {
    case SupersolutionKind::large: {
      const double gam = gamma_exponent(sg, p);
      base1 = blowup_barrier(grid, sg, gam).u;
      base2 = power_barrier(grid, 0.0).u;
      break;
    }
    case SupersolutionKind::nonexistence_super: {
      if (!(sg * p >= 1.0)) throw OutOfWindow("nonexistence_super needs sigma*p >= 1");
      if (!(in.m > 0.0)) throw DomainError("nonexistence_super needs m > 0");
      if (!(alpha > 0.0 && alpha < sg)) throw DomainError("alpha must lie in (0, sigma)");
      base1 = power_barrier(grid, 0.0).u;
      base2 = power_barrier(grid, alpha).u;
      break;
    }
    case SupersolutionKind::singular_sub: {
      if (!(sg * p < 1.0)) throw OutOfWindow("singular_sub needs sigma*p < 1");
      if (!(in.kappa > 0.0)) throw DomainError("singular_sub needs kappa > 0");
      if (!(alpha > 0.0 && alpha < sg)) throw DomainError("alpha must lie in (0, sigma)");
      base1 = power_barrier(grid, alpha).u;
      base2 = zero_outside(grid);
      for (int i = 0; i < n; ++i) f[i] = in.kappa / (d[i] * d[i]);
      want_nonneg = false;
      break;
    }
  }
  const Eigen::VectorXd lap1 = neg_laplacian(grid, base1.interior, base1.trace_a, base1.trace_b);
  const Eigen::VectorXd lap2 = neg_laplacian(grid, base2.interior, base2.trace_a, base2.trace_b);
  const Eigen::VectorXd ds1 = eval_all(base1, params);
  const Eigen::VectorXd ds2 = eval_all(base2, params);

  std::vector<int> layer;
  if (kind == SupersolutionKind::large) {
    const double edge = std::ldexp(1.0, 1 - static_cast<int>(std::floor(std::log2(1.0 / (4.0 * grid.h)))));
    for (int i = 0; i < n; ++i)
      if (d[i] < edge) layer.push_back(i);
  }

  double worst = 0.0;
  int worst_node = -1;
  for (int t = 0; t <= in.max_doublings; ++t) {
    double c1 = 0.0, c2 = 0.0;
    switch (kind) {
      case SupersolutionKind::large:
        c1 = c2 = std::ldexp(1.0, t);
        break;
      case SupersolutionKind::nonexistence_super:
        if (t == 0) continue;
        c1 = in.m;
        c2 = -in.m * std::ldexp(1.0, -t);
        break;
      case SupersolutionKind::singular_sub:
        if (t == 0) continue;
        c1 = std::ldexp(1.0, -t);
        break;
    }
    Eigen::VectorXd res(n);
    for (int i = 0; i < n; ++i) {
      res[i] = c1 * lap1[i] + c2 * lap2[i] + signed_power(c1 * ds1[i] + c2 * ds2[i], p) - f[i];
    }
    double rmin = std::numeric_limits<double>::infinity(), rmax = -rmin;
    int imin = -1, imax = -1;
    for (int i : nodes) {
      if (res[i] < rmin) { rmin = res[i]; imin = i; }
      if (res[i] > rmax) { rmax = res[i]; imax = i; }
    }
    bool ok = want_nonneg ? rmin >= 0.0 : rmax <= 0.0;
    if (kind == SupersolutionKind::large) {
      // u_g <= g_max in the cutoff layer, so the barrier must cover it there too
      ok = ok && c1 * base1.trace_a + c2 * base2.trace_a >= in.g_max &&
           c1 * base1.trace_b + c2 * base2.trace_b >= in.g_max;
      for (int i : layer) ok = ok && c1 * base1.interior[i] + c2 * base2.interior[i] >= in.g_max;
    }
    worst = want_nonneg ? rmin : rmax;
    worst_node = want_nonneg ? imin : imax;
    if (!ok) continue;
    cs.steps = t;
    cs.w = lincomb(c1, base1, c2, base2);
    cs.residual = res;
    cs.residual_min = rmin;
    cs.residual_max = rmax;
    switch (kind) {
      case SupersolutionKind::large: cs.A = c1; cs.B = c2; break;
      case SupersolutionKind::nonexistence_super: cs.m = in.m; cs.eps = -c2 / in.m; cs.alpha = alpha; break;
      case SupersolutionKind::singular_sub: cs.eps = c1; cs.alpha = alpha; break;
    }
    return cs;
  }
  std::ostringstream os;
  os << to_string(kind) << " failed after " << in.max_doublings
     << " doublings; last worst residual " << worst << " at delta="
     << (worst_node >= 0 ? d[worst_node] : 0.0) << " (sigma*p=" << sg * p << ")";
  throw CalibrationFailed(os.str());
}

std::string to_string(SupersolutionKind kind) {
  switch (kind) {
    case SupersolutionKind::large: return "large";
    case SupersolutionKind::nonexistence_super: return "nonexistence_super";
    case SupersolutionKind::singular_sub: return "singular_sub";
  }
  return "?";
}

std::string to_string(RatioClaim claim) {
  switch (claim) {
    case RatioClaim::two_sided: return "two_sided";
    case RatioClaim::upper: return "upper";
    case RatioClaim::lower: return "lower";
  }
  return "?";
}

}  // namespace mixedfrac
