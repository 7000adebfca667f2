#pragma once

#include <Eigen/Core>
#include <vector>

namespace mixedfrac {

/// Uniform mesh on (a,b) with n interior nodes and an exterior sampling zone
/// of ext_cells cells on each side. Node i (0-based) sits at a + (i+1)h.
struct Grid1D {
  double a = 0.0;
  double b = 1.0;
  int n = 0;
  double h = 0.0;
  double ext_radius = 0.0;
  int ext_cells = 0;

  double x(int i) const { return a + (i + 1) * h; }
  Eigen::VectorXd nodes() const;
  // Left block a-L..a then right block b..b+L; both ends of the zone included.
  Eigen::VectorXd ext_nodes() const;
  int ext_count() const { return 2 * (ext_cells + 1); }

  bool operator==(const Grid1D& o) const {
    return a == o.a && b == o.b && n == o.n && ext_cells == o.ext_cells;
  }
};

struct DistanceField {
  Eigen::VectorXd values;
};

struct CutoffEta {
  int j = 0;
  Eigen::VectorXd values;
};

struct DyadicPartition {
  int k_min = 0;
  int k_max = -1;
  std::vector<Eigen::VectorXd> pieces;  // pieces[k - k_min]

  const Eigen::VectorXd& piece(int k) const { return pieces[k - k_min]; }
};

Grid1D make_grid(double a, double b, int n, double ext_radius);

DistanceField boundary_distance(const Grid1D& grid);

/// Quintic smoothstep 6t^5 - 15t^4 + 10t^3 on t clamped to [0,1].
double smoothstep(double t);

/// Bump with support (-1,1) whose integer translates sum to one.
double partition_bump(double t);

CutoffEta cutoff_eta(const Grid1D& grid, int j);

DyadicPartition dyadic_partition(const Grid1D& grid);

/// 3-point -u'' at interior nodes with boundary values `left`, `right`.
Eigen::VectorXd neg_laplacian(const Grid1D& grid, const Eigen::VectorXd& u,
                              double left, double right);

/// Solves -u'' = F with zero boundary values (Thomas algorithm).
Eigen::VectorXd dirichlet_solve(const Grid1D& grid, const Eigen::VectorXd& F);

}  // namespace mixedfrac
