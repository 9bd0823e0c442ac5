#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace dispersive::cli {

inline constexpr const char* kReportSchema = "dispersive-report/1";

/// How a record's verdict follows from (predicted, fitted, slack).
enum class Rule {
  kUpper,  ///< fitted <= predicted + slack
  kLower,  ///< fitted >= predicted - slack
  kSharp,  ///< |fitted - predicted| <= slack
};

std::string to_string(Rule rule);

struct Record {
  std::string name;
  double predicted = 0.0;
  double fitted = 0.0;
  double slack = 0.0;
  Rule rule = Rule::kUpper;
  /// "pass", "fail" or "skip" (not applicable; ignored by the aggregate).
  std::string verdict;
  nlohmann::json details = nlohmann::json::object();
};

/// Record whose verdict is computed from the rule.
Record check(std::string name, double predicted, double fitted, double slack, Rule rule,
             nlohmann::json details = nlohmann::json::object());
/// Boolean check encoded as predicted 1, fitted 1 or 0, rule kLower.
Record flag(std::string name, bool ok, nlohmann::json details = nlohmann::json::object());
Record skipped(std::string name, std::string note);

nlohmann::json to_json(const Record& record);

/// Reports keep records as JSON so that merging copies them verbatim.
struct Report {
  std::optional<std::uint64_t> seed;
  std::optional<double> slack;
  std::vector<nlohmann::json> records;

  void add(const Record& record) { records.push_back(to_json(record)); }
  bool pass() const;
  /// "no-data" without records, otherwise "pass" or "fail".
  std::string status() const;
  std::vector<std::string> failing() const;
};

/// {schema, timestamp, seed, slack, status, pass, records}.
nlohmann::json to_json(const Report& report, const std::string& timestamp);

/// Throws std::invalid_argument on a wrong schema or malformed records.
Report report_from_json(const nlohmann::json& doc);

/// Concatenates the records; seed and slack are kept when all inputs agree.
Report merge(const std::vector<Report>& reports);

/// UTC time in ISO 8601.
std::string utc_timestamp();

/// Deterministic serialisation: two-space indent, trailing newline.
std::string dump(const nlohmann::json& doc);

}  // namespace dispersive::cli
