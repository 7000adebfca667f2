#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "mixedfrac/report.hpp"
#include "mixedfrac/solver.hpp"

namespace mixedfrac {

inline constexpr const char* kVersion = "0.1.0";

/// Named right-hand sides: zero, one, bump, delta_power (f = kappa delta^(alpha-2)).
struct SourceProfile {
  std::string name = "zero";
  double alpha = 2.0;
  double kappa = 1.0;
};

struct UniquenessCase {
  double sigma = 0.4, p = 2.0, g = 1.0, f = 0.0;
};

struct ExperimentConfig {
  std::string kind;
  std::string name = "run";

  double a = -1.0, b = 1.0;
  int n = 255;
  double L = 0.0;

  double sigma = 0.5, p = 2.0;
  double kappa = 1.0;

  double g_a = 0.0, g_b = 0.0, h = 0.0;
  SourceProfile source;

  SolverOptions solver;
  int level = 0;  // 0: continuation over every admissible level

  // evaluate
  std::string profile = "getoor";
  std::vector<double> sigmas;
  std::vector<int> ns;

  // dichotomy_sweep
  std::vector<double> ps;
  double gap_threshold = 0.02;
  double refine_factor = 1.5;

  // rates / large_solutions
  std::string rate_kind = "decay";
  double g_level = 4.0;
  double g_max = 128.0;
  double rate_tolerance = -1.0;  // negative: the kind's default

  // norms
  std::string family;  // inline family text; empty selects the default family
  std::vector<int> inequality_ns;
  double norm_p = 2.0, norm_theta = 1.5;

  // verify_barriers
  std::vector<double> alphas, betas;
  double ball_radius = 1.0;

  // solve checks
  bool check_comparison = false, check_linear = false, check_uniqueness = false;
  int pairs = 100;
  unsigned seed = 2024;
  int check_level = 5;
  std::vector<UniquenessCase> uniqueness_cases;

  int threads = 1;
  std::string out_dir = "out";
  std::string stem;  // defaults to name

  nlohmann::json raw = nlohmann::json::object();
};

/// Parses and validates; ConfigError names the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& cfg);

ReportBundle run_config(const ExperimentConfig& cfg);

ReportBundle evaluate_experiment(const ExperimentConfig& cfg);
ReportBundle solve_experiment(const ExperimentConfig& cfg);
ReportBundle dichotomy_sweep(const std::vector<double>& sigmas, const std::vector<double>& ps,
                             const ExperimentConfig& base);
ReportBundle rates(const std::string& kind, const ExperimentConfig& cfg);
ReportBundle large_solutions_experiment(const ExperimentConfig& cfg);
ReportBundle norms_experiment(const ExperimentConfig& cfg);
ReportBundle barriers_experiment(const ExperimentConfig& cfg);

enum class GapClass { attains, gap, undecided, error };
std::string to_string(GapClass c);

/// ATTAINS when gap(coarsest)/gap(finest) >= factor; GAP when every gap is
/// >= threshold and the ratio stays below factor.
GapClass classify_gaps(const std::vector<double>& gaps, double threshold, double factor);

SingularSource make_source(const SourceProfile& profile, const Grid1D& grid);

/// int_edge^inf y^sigma (y-x)^(-1-2 sigma) dy for 0 < x < edge.
double halfline_power_tail(double x, double edge, double sigma);

}  // namespace mixedfrac
