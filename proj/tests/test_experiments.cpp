#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mixedfrac/errors.hpp"
#include "mixedfrac/experiments.hpp"

using namespace mixedfrac;
using nlohmann::json;

namespace fs = std::filesystem;

namespace {

std::string config_error(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json zero_solve() {
  return {{"kind", "solve"},
          {"name", "zero"},
          {"geometry", {{"a", -1.0}, {"b", 1.0}, {"n", 127}}},
          {"physics", {{"sigma", 0.4}, {"p", 2.0}}},
          {"data", {{"g", 0.0}, {"h", 0.0}, {"source", "zero"}}}};
}

// tail integral after the substitution y - x = rho z^(-1/sigma), which leaves a smooth integrand
double tail_quadrature(double x, double edge, double s) {
  const double rho = edge - x;
  const int m = 4000;
  double acc = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double z = static_cast<double>(k) / m;
    const double w = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    acc += w * std::pow(x * std::pow(z, 1.0 / s) + rho, s);
  }
  return acc / (3.0 * m) * std::pow(rho, -2.0 * s) / s;
}

}  // namespace

TEST_CASE("config validation names the offending field") {
  json j = zero_solve();
  j["physics"]["sigma"] = 1.3;
  CHECK(config_error(j).find("physics.sigma") != std::string::npos);

  j = zero_solve();
  j["geometry"]["n"] = "many";
  CHECK(config_error(j).find("geometry.n") != std::string::npos);

  j = zero_solve();
  j["physics"]["rho"] = 1.0;
  CHECK(config_error(j).find("physics.rho") != std::string::npos);

  j = zero_solve();
  j["data"]["source"] = {{"profile", "sawtooth"}};
  CHECK(config_error(j).find("data.source.profile") != std::string::npos);

  j = zero_solve();
  j["kind"] = "simulate";
  CHECK(config_error(j).find("kind") != std::string::npos);

  j = zero_solve();
  j["physics"]["p"] = 0.5;
  CHECK(config_error(j).find("physics.p") != std::string::npos);

  j = {{"kind", "dichotomy_sweep"}, {"sweep", {{"sigmas", json::array()}, {"ps", {2.0}}}}};
  CHECK(config_error(j).find("sweep.sigmas") != std::string::npos);

  j = {{"kind", "norms"}, {"norms", {{"family", "a tpow\nb nosuch 1\n"}}}};
  CHECK_FALSE(config_error(j).empty());

  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  CHECK(config_error(zero_solve()).empty());
}

TEST_CASE("zero data solve gives u = 0") {
  const ExperimentConfig c = parse_config(zero_solve());
  CHECK(c.stem == "zero");
  const ReportBundle r = run_config(c);
  CHECK(r.pass());
  REQUIRE(r.tables.size() == 1);
  const Table& t = r.tables[0];
  CHECK(t.header == std::vector<std::string>{"x", "delta", "u", "v", "residual"});
  REQUIRE(t.rows.size() == 127);
  for (const auto& row : t.rows) CHECK(std::stod(row[2]) == 0.0);
  CHECK(r.metadata.at("version") == kVersion);
  CHECK(r.metadata.at("config_hash") == config_hash(zero_solve()));
}

TEST_CASE("gap classification") {
  CHECK(classify_gaps({0.2, 0.05, 0.012}, 0.02, 1.5) == GapClass::attains);
  CHECK(classify_gaps({0.30, 0.29, 0.285}, 0.02, 1.5) == GapClass::gap);
  CHECK(classify_gaps({0.015, 0.014}, 0.02, 1.5) == GapClass::undecided);
  CHECK(classify_gaps({0.1}, 0.02, 1.5) == GapClass::undecided);
  CHECK(classify_gaps({0.1, std::nan("")}, 0.02, 1.5) == GapClass::error);
  CHECK(classify_gaps({0.1, 0.0}, 0.02, 1.5) == GapClass::attains);
  CHECK(to_string(GapClass::gap) == "GAP");
}

TEST_CASE("verdict relations") {
  CHECK(make_verdict(1, "a", 0.01, 0.0, 0.02, "<=").pass);
  CHECK_FALSE(make_verdict(1, "a", 0.03, 0.0, 0.02, "<=").pass);
  CHECK(make_verdict(3, "b", 1.6, 1.5, 0.0, ">=").pass);
  CHECK(make_verdict(7, "c", 0.5, 0.4, 0.15, "within").pass);
  CHECK_FALSE(make_verdict(7, "c", 0.56, 0.4, 0.15, "within").pass);
  CHECK_FALSE(make_verdict(7, "c", std::nan(""), 0.4, 0.15, "within").pass);
  CHECK_THROWS_AS(make_verdict(7, "c", 1.0, 1.0, 0.0, "~"), DomainError);

  ReportBundle r;
  r.verdicts = {make_verdict(4, "x", 0, 0, 0, "=="), make_verdict(9, "y", 1, 0, 0, "<="),
                make_verdict(2, "z", 1, 0, 0, "<="), make_verdict(9, "w", 1, 0, 0, "<=")};
  CHECK_FALSE(r.pass());
  CHECK(r.failing_criteria() == std::vector<int>{2, 9});
}

TEST_CASE("csv format and determinism") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-2.5e-12) == "-2.5e-12");
  CHECK(format_number(std::nan("")) == "nan");
  Table t{"t", {"a", "b"}, {{"1", "2"}, {"3", "4"}}};
  CHECK(to_csv(t) == "a,b\n1,2\n3,4\n");

  json j = zero_solve();
  j["data"] = {{"g", 1.0}, {"source", "bump"}};
  j["geometry"]["n"] = 127;
  j["checks"] = {{"comparison", true}, {"pairs", 10}, {"seed", 7}, {"level", 4}};
  const ExperimentConfig c = parse_config(j);
  const ReportBundle r1 = run_config(c), r2 = run_config(c);
  REQUIRE(r1.tables.size() == r2.tables.size());
  for (std::size_t k = 0; k < r1.tables.size(); ++k) CHECK(to_csv(r1.tables[k]) == to_csv(r2.tables[k]));
  CHECK(r1.records[1].dump() == r2.records[1].dump());

  // cell order and contents do not depend on the worker count
  json s = {{"kind", "dichotomy_sweep"},
            {"sweep", {{"sigmas", {0.3, 0.6}}, {"ps", {1.5, 2.0}}, {"ns", {127, 255}}}},
            {"threads", 1}};
  const ReportBundle a = run_config(parse_config(s));
  s["threads"] = 3;
  const ReportBundle b = run_config(parse_config(s));
  CHECK(to_csv(a.tables[0]) == to_csv(b.tables[0]));
  CHECK(a.tables[0].rows.size() == 4);
}

TEST_CASE("atomic output files") {
  const fs::path dir = fs::temp_directory_path() / "mixedfrac_test_out";
  fs::remove_all(dir);
  fs::create_directories(dir);
  atomic_write(dir / "a.txt", "hello\n");
  atomic_write(dir / "a.txt", "world\n");
  CHECK(slurp(dir / "a.txt") == "world\n");
  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) entries += e.is_regular_file() ? 1 : 0;
  CHECK(entries == 1);
  // parent is a regular file
  CHECK_THROWS_AS(atomic_write(dir / "a.txt" / "b.txt", "x"), ExperimentFailure);

  ReportBundle r;
  r.kind = "solve";
  r.tables.push_back({"profile", {"x"}, {{"0.5"}}});
  r.verdicts.push_back(make_verdict(5, "v", 0.0, 0.0, 1e-8, "<="));
  const auto paths = write_outputs(r, dir / "nested", "demo");
  REQUIRE(paths.size() == 2);
  CHECK(slurp(dir / "nested" / "demo_profile.csv") == "x\n0.5\n");
  const json back = json::parse(slurp(dir / "nested" / "demo.json"));
  CHECK(back.at("pass") == true);
  CHECK(back.at("verdicts")[0].at("tolerance") == 1e-8);
  fs::remove_all(dir);
}

TEST_CASE("halfline tail series matches quadrature") {
  for (double s : {0.25, 0.5, 0.75})
    for (double x : {0.25, 0.5, 0.75}) {
      const double series = halfline_power_tail(x, 2.0, s);
      CHECK(series == doctest::Approx(tail_quadrature(x, 2.0, s)).epsilon(1e-9));
    }
  // x = 0 reduces to int_edge^inf y^(-1-sigma) dy
  CHECK(halfline_power_tail(1e-12, 2.0, 0.5) == doctest::Approx(std::pow(2.0, -0.5) / 0.5).epsilon(1e-9));
  CHECK_THROWS_AS(halfline_power_tail(1.9, 2.0, 0.5), DomainError);
}

TEST_CASE("source profiles") {
  const Grid1D g = make_grid(-1.0, 1.0, 31, 0.0);
  CHECK(make_source({"zero", 2.0, 1.0}, g).smooth_part.isZero());
  CHECK(make_source({"one", 2.0, 1.0}, g).smooth_part.isOnes());
  const SingularSource b = make_source({"bump", 2.0, 1.0}, g);
  CHECK(b.smooth_part[15] == doctest::Approx(1.0));
  CHECK(b.smooth_part[0] < 1e-3);
  const SingularSource d = make_source({"delta_power", 0.5, 3.0}, g);
  CHECK(d.alpha == 0.5);
  CHECK(d.smooth_part[7] == 3.0);
  CHECK_THROWS_AS(make_source({"ramp", 2.0, 1.0}, g), ConfigError);
}

TEST_CASE("rates reject parameters outside the window") {
  json j = {{"kind", "rates"}, {"physics", {{"sigma", 0.5}, {"p", 2.5}}}, {"rates", {{"kind", "decay"}}}};
  CHECK_THROWS_AS(run_config(parse_config(j)), OutOfWindow);
  j["rates"]["kind"] = "singular_source";
  CHECK_THROWS_AS(run_config(parse_config(j)), OutOfWindow);
}
