#include "mixedfrac/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mixedfrac/errors.hpp"

namespace mixedfrac {

Eigen::VectorXd Grid1D::nodes() const {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = x(i);
  return v;
}

Eigen::VectorXd Grid1D::ext_nodes() const {
  const int m = ext_cells;
  Eigen::VectorXd v(ext_count());
  for (int k = 0; k <= m; ++k) {
    v[k] = a - (m - k) * h;
    v[m + 1 + k] = b + k * h;
  }
  return v;
}

Grid1D make_grid(double a, double b, int n, double ext_radius) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    std::ostringstream os;
    os << "need a < b, got a=" << a << " b=" << b;
    throw InvalidGeometry(os.str());
  }
  if (n < 3) throw InvalidGeometry("need n >= 3, got " + std::to_string(n));
  if (!(ext_radius >= 0.0)) throw InvalidGeometry("ext_radius must be >= 0");
  Grid1D g;
  g.a = a;
  g.b = b;
  g.n = n;
  g.h = (b - a) / (n + 1);
  const double cells = ext_radius / g.h;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) * g.h > 1e-12) {
    std::ostringstream os;
    os << "ext_radius " << ext_radius << " is not a multiple of h=" << g.h;
    throw InvalidGeometry(os.str());
  }
  g.ext_cells = static_cast<int>(rounded);
  g.ext_radius = g.ext_cells * g.h;
  return g;
}

DistanceField boundary_distance(const Grid1D& grid) {
  DistanceField d;
  d.values.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    // index arithmetic keeps the field exactly symmetric
    d.values[i] = std::min(i + 1, grid.n - i) * grid.h;
  }
  return d;
}

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double partition_bump(double t) {
  const double r = std::abs(t);
  return r >= 1.0 ? 0.0 : smoothstep(1.0 - r);
}

CutoffEta cutoff_eta(const Grid1D& grid, int j) {
  const double inner = std::ldexp(1.0, -j);
  if (!(2.0 * inner < 0.5 * (grid.b - grid.a))) {
    throw LevelTooCoarse("plateau of eta_" + std::to_string(j) + " is empty");
  }
  const auto d = boundary_distance(grid);
  CutoffEta eta;
  eta.j = j;
  eta.values.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    eta.values[i] = smoothstep((d.values[i] - inner) / inner);
  }
  return eta;
}

DyadicPartition dyadic_partition(const Grid1D& grid) {
  const auto d = boundary_distance(grid);
  const double dmin = d.values.minCoeff();
  const double dmax = d.values.maxCoeff();
  DyadicPartition part;
  part.k_min = static_cast<int>(std::floor(std::log2(1.0 / dmax)));
  part.k_max = static_cast<int>(std::ceil(std::log2(1.0 / dmin)));
  for (int k = part.k_min; k <= part.k_max; ++k) {
    Eigen::VectorXd z(grid.n);
    for (int i = 0; i < grid.n; ++i) {
      z[i] = partition_bump(std::log2(1.0 / d.values[i]) - k);
    }
    part.pieces.push_back(std::move(z));
  }
  return part;
}

Eigen::VectorXd neg_laplacian(const Grid1D& grid, const Eigen::VectorXd& u,
                              double left, double right) {
  const int n = grid.n;
  const double ih2 = 1.0 / (grid.h * grid.h);
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) {
    const double ul = i > 0 ? u[i - 1] : left;
    const double ur = i + 1 < n ? u[i + 1] : right;
    r[i] = (2.0 * u[i] - ul - ur) * ih2;
  }
  return r;
}

Eigen::VectorXd dirichlet_solve(const Grid1D& grid, const Eigen::VectorXd& F) {
  const int n = grid.n;
  const double h2 = grid.h * grid.h;
  // forward sweep on tridiag(-1, 2, -1)
  Eigen::VectorXd c(n), d(n);
  double denom = 2.0;
  c[0] = -1.0 / denom;
  d[0] = F[0] * h2 / denom;
  for (int i = 1; i < n; ++i) {
    denom = 2.0 + c[i - 1];
    c[i] = -1.0 / denom;
    d[i] = (F[i] * h2 + d[i - 1]) / denom;
  }
  Eigen::VectorXd v(n);
  v[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) v[i] = d[i] - c[i] * v[i + 1];
  return v;
}

}  // namespace mixedfrac
