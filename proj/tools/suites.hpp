#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace sbk::cli {

struct CheckRecord {
  std::string suite;
  std::string check;
  std::string params;
  json inputs;
  json expected;
  json got;
  double tolerance = 0;
  bool pass = true;
};

struct Report {
  std::string name;
  std::vector<CheckRecord> records;

  int failed() const;
};

extern const std::vector<std::string> kSuites;

/// Runs one suite ("pair", "oracle", ..., or "verify" for all of them).
Report run_suite(const std::string& suite, const RunConfig& cfg, int jobs);

extern const std::vector<std::string> kTables;
/// Rows of a table as JSON objects with a fixed key order, sorted.
std::vector<json> emit_table(const std::string& kind, const RunConfig& cfg);

std::string report_json(const Report& r, const RunConfig& cfg);
std::string report_csv(const Report& r);
std::string table_json(const std::string& kind, const std::vector<json>& rows);
std::string table_csv(const std::vector<json>& rows);

json cplx_json(cplx z);

}  // namespace sbk::cli
