// Command-line runner for the experiment configs.
//
//   mixedfrac run configs/getoor.json
//   mixedfrac sweep --sigma 0.4 0.5 --p 2 2.5 --threads 4
//   mixedfrac rates --kind decay --sigma 0.4 --p 2
//
// Exit status: 0 when every verdict passes, 1 on a failed verdict or an
// experiment error, 2 on a bad config or command line.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mixedfrac/errors.hpp"
#include "mixedfrac/experiments.hpp"

using namespace mixedfrac;

namespace {

int finish(const ReportBundle& rep, const ExperimentConfig& cfg, const std::string& out) {
  const std::string dir = out.empty() ? cfg.out_dir : out;
  for (const auto& p : write_outputs(rep, dir, cfg.stem.empty() ? cfg.name : cfg.stem))
    std::cout << "wrote " << p.string() << "\n";
  for (const auto& v : rep.verdicts)
    std::printf("[%s] %2d  %-55s measured=%-12.6g target=%s%-10.6g tol=%.3g%s%s\n", v.pass ? "PASS" : "FAIL",
                v.criterion, v.label.c_str(), v.measured, v.relation.c_str(), v.target, v.tolerance,
                v.detail.empty() ? "" : "  ", v.detail.c_str());
  if (rep.pass()) return 0;
  std::cerr << "failing criteria:";
  for (int id : rep.failing_criteria()) std::cerr << " " << id;
  std::cerr << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed local/nonlocal boundary value problem experiments"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  int threads = 1;
  std::string out;
  app.add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "output directory (overrides the config)");

  auto* run = app.add_subcommand("run", "run a JSON experiment config");
  std::string config_path;
  run->add_option("config", config_path, "config file")->required();

  auto* sweep = app.add_subcommand("sweep", "dichotomy phase diagram over (sigma, p)");
  std::vector<double> sigmas, ps;
  std::vector<int> sweep_ns;
  sweep->add_option("--sigma", sigmas, "sigma values")->required();
  sweep->add_option("--p", ps, "p values")->required();
  sweep->add_option("--n", sweep_ns, "mesh sizes, coarse to fine");

  auto* rate = app.add_subcommand("rates", "boundary decay, blow-up and singular-source rates");
  std::string kind;
  double sigma = 0.4, p = 2.0, alpha = 1.0, kappa = 1.0;
  std::vector<int> rate_ns;
  rate->add_option("--kind", kind, "decay | blowup | singular_source")
      ->required()
      ->check(CLI::IsMember({"decay", "blowup", "singular_source"}));
  rate->add_option("--sigma", sigma, "fractional order");
  rate->add_option("--p", p, "nonlinearity exponent");
  rate->add_option("--alpha", alpha, "source exponent for decay");
  rate->add_option("--kappa", kappa, "source strength for singular_source");
  rate->add_option("--n", rate_ns, "mesh sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg;
    if (run->parsed()) {
      cfg = load_config(config_path);
      if (app.count("--threads")) cfg.threads = threads;
    } else if (sweep->parsed()) {
      nlohmann::json j = {{"kind", "dichotomy_sweep"},
                          {"name", "sweep"},
                          {"sweep", {{"sigmas", sigmas}, {"ps", ps}}},
                          {"threads", threads}};
      if (!sweep_ns.empty()) j["sweep"]["ns"] = sweep_ns;
      cfg = parse_config(j);
    } else {
      nlohmann::json j = {{"kind", "rates"},
                          {"name", "rates_" + kind},
                          {"physics", {{"sigma", sigma}, {"p", p}, {"kappa", kappa}}},
                          {"rates", {{"kind", kind}}},
                          {"threads", threads}};
      if (kind == "decay") j["data"] = {{"source", {{"profile", "delta_power"}, {"alpha", alpha}, {"kappa", 1.0}}}};
      if (!rate_ns.empty()) j["rates"]["ns"] = rate_ns;
      cfg = parse_config(j);
    }
    return finish(run_config(cfg), cfg, out);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "experiment failed: " << e.what() << "\n";
    return 1;
  }
}
