#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "mixedfrac/domain.hpp"

namespace mixedfrac {

struct NormSpec {
  double s = 0.0;
  double p = 2.0;
  double theta = 1.0;
  int N = 1;
};

/// Periodic box of `modes` samples at `spacing`, with angular frequencies xi.
struct SpectralEngine {
  double spacing = 1.0;
  int modes = 0;
  Eigen::VectorXd xi;

  double half_width() const { return 0.5 * modes * spacing; }
};

SpectralEngine make_engine(double spacing, int modes);

/// Smallest power-of-two box holding `padding` copies of `support` samples.
SpectralEngine engine_for_support(double spacing, int support, int padding = 4);

/// Centres u in a zero box of engine.modes samples.
Eigen::VectorXd embed(const SpectralEngine& engine, const Eigen::VectorXd& u);

/// Multiplies the DFT of a full periodic sample vector by symbol(|xi|).
Eigen::VectorXd apply_symbol(const SpectralEngine& engine, const Eigen::VectorXd& periodic,
                             const std::function<double(double)>& symbol);

/// |xi|^(2 sigma) applied to a full periodic sample vector.
Eigen::VectorXd spectral_fraclap(const SpectralEngine& engine, const Eigen::VectorXd& periodic,
                                 double sigma);

/// Discrete L^p norm of (1 - Lap)^(s/2) u, u given on the engine spacing.
/// Recomputed on a doubled box; a change >= 0.5% raises AliasingDetected.
double bessel_norm(const Eigen::VectorXd& u, double s, double p, const SpectralEngine& engine);

/// (h sum |u|^p delta^(theta-N))^(1/p) over interior nodes.
double weighted_lp_norm(const Eigen::VectorXd& u, double p, double theta,
                        const DistanceField& distance, double h, int N = 1);

/// Per-layer terms 2^(-k theta) |zeta_k(2^-k .) u(2^-k .)|_{s,p}^p, indexed k - k_min.
std::vector<double> dyadic_terms(const Eigen::VectorXd& u, const NormSpec& spec,
                                 const DyadicPartition& partition, const Grid1D& grid);

double dyadic_weighted_norm(const Eigen::VectorXd& u, const NormSpec& spec,
                            const DyadicPartition& partition, const Grid1D& grid);

// Test-function family: one member per line, "name formula_id params...".
// Formulas: tpow a | tpoly a c1 c2 | tcos a w | bump, with tau the torsion
// function and xi the affine map of the domain onto (-1,1).
struct FamilyMember {
  std::string name;
  std::string formula;
  std::vector<double> params;
};

std::vector<FamilyMember> parse_family(const std::string& text);
std::string format_family(const std::vector<FamilyMember>& family);
std::vector<FamilyMember> default_family();

/// Nodal values; every member vanishes at a and b.
Eigen::VectorXd evaluate_member(const FamilyMember& member, const Grid1D& grid);

struct EquivalenceReport {
  NormSpec spec;
  std::vector<int> ns;
  std::vector<std::vector<double>> ratios;  // [resolution][member], dyadic / weighted
  std::vector<double> constants;            // max over members of max(r, 1/r)
  double variation = 0.0;                   // (max C - min C) / min C
  bool pass = false;
};

/// Equivalence of the dyadic s = 0 norm with the weighted L^p norm on (a,b).
EquivalenceReport norm_equivalence(const std::vector<FamilyMember>& family, const NormSpec& spec,
                                   const std::vector<int>& ns, double a = -1.0, double b = 1.0,
                                   double tolerance = 0.10);

struct InequalityCheck {
  std::string target;  // integer_order, weighted_fraclap, interpolation
  double sigma = 0.0, p = 2.0, theta = 0.0;
  bool in_hypothesis = true;
  std::vector<int> ns;
  std::vector<std::vector<double>> ratios;  // [resolution][member], lhs / rhs
  std::vector<double> max_ratio, min_ratio;
  double drift = 0.0;  // relative change of max and min ratio between resolutions
  bool stable = false;
  bool pass = false;   // finite and stable; always true when outside the hypothesis
};

struct ConstantsReport {
  std::vector<InequalityCheck> checks;
  bool pass = false;
};

struct InequalityOptions {
  std::vector<int> ns = {511, 1023};
  double a = -1.0, b = 1.0;
  double sigma = 0.4;
  double p = 2.0;
  double r = 2.0;
  double eps = 0.2;
  std::vector<double> thetas = {3.0, 2.0};  // weighted_fraclap weights
  double q = 2.0;                           // interpolation exponent
  double tolerance = 0.25;
};

ConstantsReport verify_inequalities(const std::vector<FamilyMember>& family,
                                    const InequalityOptions& opts = {});

}  // namespace mixedfrac
