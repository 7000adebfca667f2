#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mixedfrac/domain.hpp"
#include "mixedfrac/fraclap.hpp"

namespace mixedfrac {

struct TorsionFunction {
  Grid1D grid;
  Eigen::VectorXd values;
  bool closed_form_flag = true;
};

/// v_alpha = tau^alpha on the closure of the domain, zero outside.
struct PowerBarrier {
  double alpha = 0.0;
  ExtendedGridFunction u;
};

/// V_beta: delta^beta in the strip delta < delta0, an even quartic fill
/// inside, zero outside.
struct BlowupBarrier {
  double beta = -0.5;
  double delta0 = 0.0;
  ExtendedGridFunction u;
};

enum class SupersolutionKind { large, nonexistence_super, singular_sub };

struct CalibrationInputs {
  double p = 2.0;
  double m = 1.0;       // nonexistence_super: max of g
  double alpha = -1.0;  // torsion power; negative selects sigma/2
  double kappa = 1.0;   // singular_sub: f = kappa * delta^-2
  double g_max = 0.0;   // large: floor on the trace and the finest cutoff layer
  int max_doublings = 20;
};

struct CalibratedSupersolution {
  SupersolutionKind kind = SupersolutionKind::large;
  double A = 0.0, B = 0.0;                // large
  double m = 0.0, eps = 0.0, alpha = 0.0; // nonexistence_super, singular_sub
  int steps = 0;
  ExtendedGridFunction w;
  Eigen::VectorXd residual;  // -Lap w + |Ds w|^(p-1) Ds w - f at every node
  double residual_min = 0.0; // over the validated window
  double residual_max = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
};

enum class RatioClaim { two_sided, upper, lower };

struct RatioStat {
  std::string target;  // "laplacian" or "fractional"
  double rate = 0.0;   // exponent r in delta^r
  RatioClaim claim = RatioClaim::two_sided;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool pass = false;
};

struct BarrierReport {
  std::string kind;  // "power" or "blowup"
  double exponent = 0.0;
  double sigma = 0.0;
  int n = 0;
  double window_lo = 0.0, window_hi = 0.0;
  std::vector<RatioStat> ratios;
  bool pass = false;
};

struct RefinedBarrierReport {
  std::vector<BarrierReport> levels;
  std::vector<double> drift;  // per ratio statistic, max relative change
  bool stable = false;
  bool pass = false;
};

TorsionFunction torsion_function(const Grid1D& grid);

/// Torsion by the tridiagonal Dirichlet solve, for cross-validation.
TorsionFunction torsion_function_discrete(const Grid1D& grid);

PowerBarrier power_barrier(const Grid1D& grid, double alpha);

BlowupBarrier blowup_barrier(const Grid1D& grid, double sigma, double beta,
                             double delta0 = -1.0);

/// (R^2 - (x-center)^2)_+^sigma sampled on the whole line.
ExtendedGridFunction ball_barrier(const Grid1D& grid, double sigma, double R,
                                  double center = 0.0);

/// Exact -u'' of the ball barrier at |x - center| < R.
double ball_barrier_neg_laplacian(double x, double sigma, double R,
                                  double center = 0.0);

double gamma_exponent(double sigma, double p);

BarrierReport verify_barrier_bounds(const PowerBarrier& barrier,
                                    const FracParams& params);
BarrierReport verify_barrier_bounds(const BlowupBarrier& barrier,
                                    const FracParams& params);

/// Builds the barrier on each n in `ns` over (a,b) and requires every ratio
/// statistic to move by at most `tolerance` (relative) between successive grids.
RefinedBarrierReport verify_barrier_refinement(const std::string& kind,
                                               double exponent, double a,
                                               double b, const std::vector<int>& ns,
                                               const FracParams& params,
                                               double tolerance = 0.15);

/// -Lap_h w + |Ds_h w|^(p-1) Ds_h w - f at every interior node.
Eigen::VectorXd operator_residual(const ExtendedGridFunction& w,
                                  const FracParams& params, double p,
                                  const Eigen::VectorXd& f);

CalibratedSupersolution calibrate_supersolution(SupersolutionKind kind,
                                                const Grid1D& grid,
                                                const FracParams& params,
                                                const CalibrationInputs& in);

std::string to_string(SupersolutionKind kind);
std::string to_string(RatioClaim claim);

}  // namespace mixedfrac
