#include "mixedfrac/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "mixedfrac/errors.hpp"

namespace mixedfrac {

bool ReportBundle::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::vector<int> ReportBundle::failing_criteria() const {
  std::set<int> ids;
  for (const auto& v : verdicts)
    if (!v.pass) ids.insert(v.criterion);
  return {ids.begin(), ids.end()};
}

Verdict make_verdict(int criterion, std::string label, double measured, double target,
                     double tolerance, std::string relation, std::string detail) {
  Verdict v{criterion, std::move(label), measured, target, tolerance, std::move(relation), false,
            std::move(detail)};
  if (!std::isfinite(measured)) return v;
  if (v.relation == "<=") v.pass = measured <= target + tolerance;
  else if (v.relation == ">=") v.pass = measured >= target - tolerance;
  else if (v.relation == "within") v.pass = std::abs(measured - target) <= tolerance;
  else if (v.relation == "==") v.pass = measured == target;
  else throw DomainError("unknown verdict relation '" + v.relation + "'");
  return v;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

nlohmann::json to_json(const Verdict& v) {
  return {{"criterion", v.criterion}, {"label", v.label},         {"measured", v.measured},
          {"target", v.target},       {"tolerance", v.tolerance}, {"relation", v.relation},
          {"pass", v.pass},           {"detail", v.detail}};
}

nlohmann::json to_json(const ReportBundle& r) {
  nlohmann::json j;
  j["kind"] = r.kind;
  j["metadata"] = r.metadata;
  j["records"] = r.records;
  j["verdicts"] = nlohmann::json::array();
  for (const auto& v : r.verdicts) j["verdicts"].push_back(to_json(v));
  j["pass"] = r.pass();
  j["failing_criteria"] = r.failing_criteria();
  return j;
}

std::string config_hash(const nlohmann::json& canonical) {
  const std::string s = canonical.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  try {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) throw ExperimentFailure("cannot open " + tmp.string() + " for writing");
      os << content;
      if (!os.flush()) throw ExperimentFailure("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
  } catch (const std::filesystem::filesystem_error& e) {
    throw ExperimentFailure(e.what());
  }
}

std::vector<std::filesystem::path> write_outputs(const ReportBundle& r,
                                                 const std::filesystem::path& dir,
                                                 const std::string& stem) {
  std::vector<std::filesystem::path> written;
  const auto json_path = dir / (stem + ".json");
  atomic_write(json_path, to_json(r).dump(2) + "\n");
  written.push_back(json_path);
  for (const auto& t : r.tables) {
    const auto p = dir / (stem + "_" + t.name + ".csv");
    atomic_write(p, to_csv(t));
    written.push_back(p);
  }
  return written;
}

}  // namespace mixedfrac
