#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "mixedfrac/barriers.hpp"
#include "mixedfrac/domain.hpp"
#include "mixedfrac/fraclap.hpp"

namespace mixedfrac {

/// f = delta^(alpha-2) * smooth_part. alpha = 0 encodes a delta^-2 source,
/// which sits outside the existence hypothesis.
struct SingularSource {
  double alpha = 2.0;
  Eigen::VectorXd smooth_part;
};

struct ProblemSpec {
  double sigma = 0.5;
  double p = 2.0;
  SingularSource source;
  double g_a = 0.0, g_b = 0.0;
  Eigen::VectorXd ext_samples;  // exterior datum h on the sampling zone
  double far_value = 0.0;       // h beyond the zone
  Grid1D grid;
};

struct HomogenizedProblem {
  ExtendedGridFunction psi;
  Eigen::VectorXd Dspsi;
  Eigen::VectorXd f;
  double Dspsi_constant = 0.0;  // max |Dspsi| delta^(2 sigma)
  ProblemSpec original;
};

struct SolverOptions {
  double damping = 1.0;
  double tol = 1e-10;        // fixed-point residual |T v - v|_inf
  int max_iter = 400000;
  double level_tol = 1e-6;   // continuation early stop on |v_{j+1} - v_j|_inf
  double lambda_min = 1e-8;
  double blowup = 1e6;
};

struct LevelStats {
  int j = 0;
  int iterations = 0;
  double lambda = 1.0;
  double fixed_point_residual = 0.0;
  double equation_residual = 0.0;
  double increment = -1.0;  // |v_j - v_{j-1}|_inf, negative at the first level
};

struct SolveReport {
  std::vector<LevelStats> levels;
  double equation_residual = 0.0;
  double fixed_point_residual = 0.0;
  double sup_u = 0.0;
  double sup_bound_base = 0.0;  // max g+ + sup h+
  double bound_constant = 0.0;  // empirical constant of the f-term, 0 when f+ = 0
  bool sup_bound_ok = true;
  double boundary_gap = 0.0;
  double first_node_gap = 0.0;
  double fitted_exponent = 0.0;
  bool exponent_defined = false;
  double wall_time = 0.0;
};

struct Solution {
  ExtendedGridFunction v;
  ExtendedGridFunction u;
  int j_final = 0;
  SolveReport report;
};

struct BoundaryDiagnostics {
  double boundary_gap = 0.0;    // at the first node where eta_j == 1
  double first_node_gap = 0.0;  // at the nodes adjacent to a and b
  double fitted_exponent = 0.0;
  bool exponent_defined = false;
  int fit_points = 0;
};

struct ComparisonResult {
  bool pass = true;              // sub <= super at every interior node
  std::vector<int> violations;   // interior nodes with sub > super
  bool hypotheses_hold = true;   // operator inequalities and outer ordering
  std::vector<int> inequality_failures;
};

struct LargeSolutionSequence {
  std::vector<double> g_levels;
  std::vector<Solution> solutions;
  CalibratedSupersolution barrier;
  Eigen::VectorXd limit_estimate;  // last member of the ladder
  std::vector<double> midpoint_values;
  bool monotone = true;
  bool dominated = true;
};

ProblemSpec make_problem(const Grid1D& grid, double sigma, double p, double g_a,
                         double g_b, double h_value, const SingularSource& source);

SingularSource constant_source(const Grid1D& grid, double value);

Eigen::VectorXd source_values(const ProblemSpec& spec);

void validate(const ProblemSpec& spec);

int min_level(const Grid1D& grid);
int max_level(const Grid1D& grid);

HomogenizedProblem homogenize(const ProblemSpec& spec, const FracLapOperator& op);

Eigen::VectorXd dirichlet_inverse(const Eigen::VectorXd& F, const Grid1D& grid);

Eigen::VectorXd nonlinear_term(const Eigen::VectorXd& v,
                               const HomogenizedProblem& hom,
                               const FracLapOperator& op, int j);
Eigen::VectorXd nonlinear_term(const ExtendedGridFunction& v,
                               const HomogenizedProblem& hom,
                               const FracLapOperator& op, int j);

/// |-Lap_h v + P_j[v] - eta_j f|_inf over nodes with delta > 2^-j.
double equation_residual(const Eigen::VectorXd& v, const HomogenizedProblem& hom,
                         const FracLapOperator& op, int j);

Solution regularized_solve(const HomogenizedProblem& hom, const FracLapOperator& op,
                           int j, const SolverOptions& opts = {},
                           const std::optional<Eigen::VectorXd>& v0 = std::nullopt);

Solution continuation_solve(const HomogenizedProblem& hom, const FracLapOperator& op,
                            const SolverOptions& opts = {},
                            const std::optional<Eigen::VectorXd>& v0 = std::nullopt);

LargeSolutionSequence solve_large(const ProblemSpec& spec_template,
                                  const FracLapOperator& op, double j_data_max,
                                  const SolverOptions& opts = {});

ComparisonResult check_comparison(const ExtendedGridFunction& sub,
                                  const ExtendedGridFunction& super,
                                  const ProblemSpec& spec,
                                  const FracLapOperator& op);

BoundaryDiagnostics diagnose_boundary(const Solution& u, const ProblemSpec& spec);

/// Least-squares slope of log y against log x.
double fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mixedfrac
