#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace mixedfrac {

/// One pass/fail statement tied to an acceptance criterion id.
struct Verdict {
  int criterion = 0;
  std::string label;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::string relation;  // "<=", ">=", "within", "=="
  bool pass = false;
  std::string detail;
};

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct ReportBundle {
  std::string kind;
  nlohmann::json metadata = nlohmann::json::object();
  nlohmann::json records = nlohmann::json::array();
  std::vector<Verdict> verdicts;
  std::vector<Table> tables;

  bool pass() const;
  std::vector<int> failing_criteria() const;
};

/// Verdict whose pass flag follows from the relation.
Verdict make_verdict(int criterion, std::string label, double measured, double target,
                     double tolerance, std::string relation, std::string detail = "");

/// Fixed-format number for CSV bodies (locale independent, "." separator).
std::string format_number(double v);

std::string to_csv(const Table& t);

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const ReportBundle& r);

/// FNV-1a of the canonical dump, hex.
std::string config_hash(const nlohmann::json& canonical);

/// Writes via a sibling temporary file and rename.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// <dir>/<stem>.json plus <dir>/<stem>_<table>.csv; returns the paths written.
std::vector<std::filesystem::path> write_outputs(const ReportBundle& r,
                                                 const std::filesystem::path& dir,
                                                 const std::string& stem);

}  // namespace mixedfrac
