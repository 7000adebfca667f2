#pragma once

#include <Eigen/Core>
#include <functional>

#include "mixedfrac/domain.hpp"

namespace mixedfrac {

struct FracParams {
  double sigma = 0.5;
  int dim = 1;
  double c_norm = 0.0;
};

/// Grid function on all of R: interior nodes, traces at a and b, samples on
/// the exterior zone and a constant beyond it.
struct ExtendedGridFunction {
  Grid1D grid;
  Eigen::VectorXd interior;
  double trace_a = 0.0;
  double trace_b = 0.0;
  Eigen::VectorXd ext_samples;  // laid out as Grid1D::ext_nodes()
  double far_value = 0.0;
};

struct FracLapOperator {
  FracParams params;
  Grid1D grid;
  Eigen::MatrixXd weights;        // n x n, acts on the interior values
  Eigen::MatrixXd ext_weights;    // n x ext_count
  Eigen::MatrixXd trace_weights;  // n x 2, columns a and b
  Eigen::VectorXd far_weights;    // n
};

enum class ReferenceKind { getoor, indicator, halfline_power };

double normalization_constant(int N, double sigma);

FracParams make_frac_params(double sigma, int N = 1);

/// Extended function with u = value everywhere (interior, traces, exterior).
ExtendedGridFunction constant_function(const Grid1D& grid, double value);

/// Samples `inside` on interior nodes and traces, `outside` on the exterior
/// zone (including the exterior-side limits at a and b).
ExtendedGridFunction sample_function(const Grid1D& grid,
                                     const std::function<double(double)>& inside,
                                     const std::function<double(double)>& outside,
                                     double far_value);

void validate(const ExtendedGridFunction& u);

double eval_pointwise(const ExtendedGridFunction& u, const FracParams& params,
                      int i);

Eigen::VectorXd eval_all(const ExtendedGridFunction& u, const FracParams& params);

FracLapOperator assemble_operator(const Grid1D& grid, const FracParams& params);

/// Affine part of the operator: exterior samples, traces and far value.
Eigen::VectorXd ext_vector(const FracLapOperator& op,
                           const ExtendedGridFunction& u);

/// weights * interior + ext_vector.
Eigen::VectorXd apply(const FracLapOperator& op, const ExtendedGridFunction& u);

/// Exact (-Delta)^sigma of the named profile: (R^2-x^2)_+^sigma, the
/// indicator of (-R,R), or x_+^(sigma-1).
double closed_form_reference(ReferenceKind kind, const FracParams& params,
                             double x, double R = 1.0);

}  // namespace mixedfrac
