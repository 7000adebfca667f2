#include "mixedfrac/fraclap.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "mixedfrac/errors.hpp"

namespace mixedfrac {
namespace {

// Gauss-Legendre nodes/weights on [0,1], 8 points.
constexpr std::array<double, 8> kGlX = {
    0.019855071751231856, 0.10166676129318664, 0.2372337950418355,
    0.40828267875217511,  0.59171732124782489, 0.7627662049581645,
    0.89833323870681336,  0.98014492824876814};
constexpr std::array<double, 8> kGlW = {
    0.050614268145188129, 0.11119051722668724, 0.15685332293894364,
    0.18134189168918099,  0.18134189168918099, 0.15685332293894364,
    0.11119051722668724,  0.050614268145188129};

// P[m] = int_0^1 (m+t)^(1-s) (1-t) dt,  Q[m] = int_0^1 (m+t)^(1-s) t dt.
struct Moments {
  std::vector<double> P, Q;
};

Moments kernel_moments(int K, double s) {
  Moments mo;
  mo.P.assign(K + 2, 0.0);
  mo.Q.assign(K + 2, 0.0);
  const double e1 = 2.0 - s, e2 = 3.0 - s;
  for (int m = 0; m <= K + 1; ++m) {
    if (m < 8) {
      const double a = m, b = m + 1.0;
      const double I1 = (std::pow(b, e1) - std::pow(a, e1)) / e1;
      const double I2 = (std::pow(b, e2) - std::pow(a, e2)) / e2;
      mo.P[m] = b * I1 - I2;
      mo.Q[m] = I2 - a * I1;
    } else {
      // closed form cancels badly for large m
      double p = 0.0, q = 0.0;
      for (std::size_t k = 0; k < kGlX.size(); ++k) {
        const double f = kGlW[k] * std::pow(m + kGlX[k], 1.0 - s);
        p += f * (1.0 - kGlX[k]);
        q += f * kGlX[k];
      }
      mo.P[m] = p;
      mo.Q[m] = q;
    }
  }
  return mo;
}

// Sample line: positions 0..M-1 at spacing h starting at a-L. Position
// ext_cells is a, position ext_cells+n+1 is b. Left/right limits differ only
// at a and b (exterior side vs trace).
struct Line {
  std::vector<double> left, right;
};

Line make_line(const ExtendedGridFunction& u) {
  const auto& g = u.grid;
  const int m = g.ext_cells;
  const int M = g.n + 2 + 2 * m;
  Line ln;
  ln.left.resize(M);
  ln.right.resize(M);
  for (int p = 0; p <= m; ++p) ln.left[p] = ln.right[p] = u.ext_samples[p];
  for (int i = 0; i < g.n; ++i) {
    ln.left[m + 1 + i] = ln.right[m + 1 + i] = u.interior[i];
  }
  for (int k = 0; k <= m; ++k) {
    ln.left[m + g.n + 1 + k] = ln.right[m + g.n + 1 + k] = u.ext_samples[m + 1 + k];
  }
  ln.right[m] = u.trace_a;
  ln.left[m + g.n + 1] = u.trace_b;
  return ln;
}

// Quadrature weights of node i, in units of c h^(-s):
//   value = self*u_i - sum_p (wl[p] uL[p] + wr[p] uR[p]) - wf*far.
struct RowWeights {
  std::vector<double> wl, wr;
  double wf = 0.0;
  double self = 0.0;
};

void row_weights(const Grid1D& g, const Moments& mo, double s, int i,
                 RowWeights& rw) {
  const int m = g.ext_cells;
  const int M = g.n + 2 + 2 * m;
  const int I = m + 1 + i;
  rw.wl.assign(M, 0.0);
  rw.wr.assign(M, 0.0);
  rw.wf = 0.0;
  const double singular = 1.0 / (2.0 - s);
  // right side: approach each sample from the left
  const int Kr = M - 1 - I;
  for (int k = 1; k <= Kr; ++k) {
    const double k2 = double(k) * k;
    rw.wl[I + k] += (k == 1) ? singular : mo.Q[k - 1] / k2;
    if (k < Kr) rw.wr[I + k] += mo.P[k] / k2;
  }
  rw.wf += std::pow(double(Kr), -s) / s;
  const int Kl = I;
  for (int k = 1; k <= Kl; ++k) {
    const double k2 = double(k) * k;
    rw.wr[I - k] += (k == 1) ? singular : mo.Q[k - 1] / k2;
    if (k < Kl) rw.wl[I - k] += mo.P[k] / k2;
  }
  rw.wf += std::pow(double(Kl), -s) / s;
  double tot = rw.wf;
  for (int p = 0; p < M; ++p) tot += rw.wl[p] + rw.wr[p];
  rw.self = tot;
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw DomainError("sigma must lie in (0,1), got " + std::to_string(sigma));
  }
}

}  // namespace

double normalization_constant(int N, double sigma) {
  check_sigma(sigma);
  if (N < 1) throw DomainError("dimension must be >= 1");
  const double pi = std::numbers::pi;
  return std::pow(4.0, sigma) * std::tgamma(0.5 * N + sigma) /
         (std::pow(pi, 0.5 * N) * std::abs(std::tgamma(-sigma)));
}

FracParams make_frac_params(double sigma, int N) {
  return FracParams{sigma, N, normalization_constant(N, sigma)};
}

ExtendedGridFunction constant_function(const Grid1D& grid, double value) {
  ExtendedGridFunction u;
  u.grid = grid;
  u.interior = Eigen::VectorXd::Constant(grid.n, value);
  u.trace_a = u.trace_b = value;
  u.ext_samples = Eigen::VectorXd::Constant(grid.ext_count(), value);
  u.far_value = value;
  return u;
}

ExtendedGridFunction sample_function(const Grid1D& grid,
                                     const std::function<double(double)>& inside,
                                     const std::function<double(double)>& outside,
                                     double far_value) {
  ExtendedGridFunction u;
  u.grid = grid;
  u.interior.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) u.interior[i] = inside(grid.x(i));
  u.trace_a = inside(grid.a);
  u.trace_b = inside(grid.b);
  const auto xe = grid.ext_nodes();
  u.ext_samples.resize(xe.size());
  for (Eigen::Index k = 0; k < xe.size(); ++k) u.ext_samples[k] = outside(xe[k]);
  u.far_value = far_value;
  return u;
}

void validate(const ExtendedGridFunction& u) {
  if (u.interior.size() != u.grid.n) {
    throw GridMismatch("interior length does not match the grid");
  }
  if (u.ext_samples.size() != u.grid.ext_count()) {
    throw GridMismatch("ext_samples length does not match ext_nodes");
  }
  if (!u.interior.allFinite() || !u.ext_samples.allFinite() ||
      !std::isfinite(u.trace_a) || !std::isfinite(u.trace_b) ||
      !std::isfinite(u.far_value)) {
    throw DomainError("extended grid function has non-finite values");
  }
}

double eval_pointwise(const ExtendedGridFunction& u, const FracParams& params,
                      int i) {
  validate(u);
  check_sigma(params.sigma);
  const auto& g = u.grid;
  if (i < 0 || i >= g.n) throw DomainError("node index out of range");
  const double s = 2.0 * params.sigma;
  const int M = g.n + 2 + 2 * g.ext_cells;
  const auto mo = kernel_moments(M, s);
  const auto ln = make_line(u);
  RowWeights rw;
  row_weights(g, mo, s, i, rw);
  const double ui = u.interior[i];
  double acc = rw.self * ui - rw.wf * u.far_value;
  for (int p = 0; p < M; ++p) acc -= rw.wl[p] * ln.left[p] + rw.wr[p] * ln.right[p];
  return params.c_norm * std::pow(g.h, -s) * acc;
}

Eigen::VectorXd eval_all(const ExtendedGridFunction& u, const FracParams& params) {
  validate(u);
  check_sigma(params.sigma);
  const auto& g = u.grid;
  const double s = 2.0 * params.sigma;
  const int M = g.n + 2 + 2 * g.ext_cells;
  const auto mo = kernel_moments(M, s);
  const auto ln = make_line(u);
  const double scale = params.c_norm * std::pow(g.h, -s);
  Eigen::VectorXd out(g.n);
  RowWeights rw;
  for (int i = 0; i < g.n; ++i) {
    row_weights(g, mo, s, i, rw);
    double acc = rw.self * u.interior[i] - rw.wf * u.far_value;
    for (int p = 0; p < M; ++p) acc -= rw.wl[p] * ln.left[p] + rw.wr[p] * ln.right[p];
    out[i] = scale * acc;
  }
  return out;
}

FracLapOperator assemble_operator(const Grid1D& grid, const FracParams& params) {
  check_sigma(params.sigma);
  const int n = grid.n, m = grid.ext_cells;
  const int M = n + 2 + 2 * m;
  const double s = 2.0 * params.sigma;
  const double scale = params.c_norm * std::pow(grid.h, -s);
  const auto mo = kernel_moments(M, s);

  FracLapOperator op;
  op.params = params;
  op.grid = grid;
  op.weights = Eigen::MatrixXd::Zero(n, n);
  op.ext_weights = Eigen::MatrixXd::Zero(n, grid.ext_count());
  op.trace_weights = Eigen::MatrixXd::Zero(n, 2);
  op.far_weights = Eigen::VectorXd::Zero(n);

  const int pa = m, pb = m + n + 1;
  RowWeights rw;
  for (int i = 0; i < n; ++i) {
    row_weights(grid, mo, s, i, rw);
    op.weights(i, i) = scale * rw.self;
    op.far_weights[i] = -scale * rw.wf;
    for (int p = 0; p < M; ++p) {
      const double wl = -scale * rw.wl[p], wr = -scale * rw.wr[p];
      if (p < pa) {
        op.ext_weights(i, p) += wl + wr;
      } else if (p == pa) {
        op.ext_weights(i, m) += wl;
        op.trace_weights(i, 0) += wr;
      } else if (p < pb) {
        op.weights(i, p - m - 1) += wl + wr;
      } else if (p == pb) {
        op.trace_weights(i, 1) += wl;
        op.ext_weights(i, m + 1) += wr;
      } else {
        op.ext_weights(i, m + 1 + (p - pb)) += wl + wr;
      }
    }
  }
  return op;
}

Eigen::VectorXd ext_vector(const FracLapOperator& op,
                           const ExtendedGridFunction& u) {
  if (!(u.grid == op.grid)) throw GridMismatch("function and operator grids differ");
  validate(u);
  Eigen::VectorXd e = op.ext_weights * u.ext_samples;
  e += op.trace_weights.col(0) * u.trace_a + op.trace_weights.col(1) * u.trace_b;
  e += op.far_weights * u.far_value;
  return e;
}

Eigen::VectorXd apply(const FracLapOperator& op, const ExtendedGridFunction& u) {
  Eigen::VectorXd e = ext_vector(op, u);
  e.noalias() += op.weights * u.interior;
  return e;
}

double closed_form_reference(ReferenceKind kind, const FracParams& params,
                             double x, double R) {
  check_sigma(params.sigma);
  const double sg = params.sigma;
  const double c = params.c_norm;
  switch (kind) {
    case ReferenceKind::getoor: {
      if (!(R > 0.0) || !(std::abs(x) < R)) {
        throw DomainError("getoor reference needs |x| < R");
      }
      const double N = params.dim;
      const double sphere =
          2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
      const double beta = std::tgamma(sg) * std::tgamma(1.0 - sg);
      return c * beta * sphere / 2.0;
    }
    case ReferenceKind::indicator: {
      if (!(R > 0.0) || !(std::abs(x) < R)) {
        throw DomainError("indicator reference needs |x| < R");
      }
      return c / (2.0 * sg) *
             (std::pow(R - x, -2.0 * sg) + std::pow(R + x, -2.0 * sg));
    }
    case ReferenceKind::halfline_power:
      if (!(x > 0.0)) throw DomainError("halfline reference needs x > 0");
      return 0.0;
  }
  throw DomainError("unknown reference kind");
}

}  // namespace mixedfrac
