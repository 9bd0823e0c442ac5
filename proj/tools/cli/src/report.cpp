#include "dispersive/cli/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <stdexcept>
#include <utility>

namespace dispersive::cli {

namespace {

bool holds(Rule rule, double predicted, double fitted, double slack) {
  switch (rule) {
    case Rule::kUpper: return fitted <= predicted + slack;
    case Rule::kLower: return fitted >= predicted - slack;
    case Rule::kSharp: return std::abs(fitted - predicted) <= slack;
  }
  return false;
}

}  // namespace

std::string to_string(Rule rule) {
  switch (rule) {
    case Rule::kUpper: return "upper";
    case Rule::kLower: return "lower";
    case Rule::kSharp: return "sharp";
  }
  return "upper";
}

Record check(std::string name, double predicted, double fitted, double slack, Rule rule,
             nlohmann::json details) {
  Record r;
  r.name = std::move(name);
  r.predicted = predicted;
  r.fitted = fitted;
  r.slack = slack;
  r.rule = rule;
  // NaN compares false, so a non-finite fit fails.
  r.verdict = holds(rule, predicted, fitted, slack) ? "pass" : "fail";
  r.details = std::move(details);
  return r;
}

Record flag(std::string name, bool ok, nlohmann::json details) {
  return check(std::move(name), 1.0, ok ? 1.0 : 0.0, 0.0, Rule::kLower, std::move(details));
}

Record skipped(std::string name, std::string note) {
  Record r;
  r.name = std::move(name);
  r.verdict = "skip";
  r.details = {{"note", std::move(note)}};
  return r;
}

nlohmann::json to_json(const Record& record) {
  return {
      {"name", record.name},
      {"predicted", record.predicted},
      {"fitted", record.fitted},
      {"slack", record.slack},
      {"rule", to_string(record.rule)},
      {"verdict", record.verdict},
      {"details", record.details},
  };
}

bool Report::pass() const { return failing().empty(); }

std::string Report::status() const {
  if (records.empty()) return "no-data";
  return pass() ? "pass" : "fail";
}

std::vector<std::string> Report::failing() const {
  std::vector<std::string> names;
  for (const auto& r : records) {
    if (r.at("verdict") == "fail") names.push_back(r.at("name").get<std::string>());
  }
  return names;
}

nlohmann::json to_json(const Report& report, const std::string& timestamp) {
  nlohmann::json doc;
  doc["schema"] = kReportSchema;
  doc["timestamp"] = timestamp;
  doc["seed"] = report.seed ? nlohmann::json(*report.seed) : nlohmann::json();
  doc["slack"] = report.slack ? nlohmann::json(*report.slack) : nlohmann::json();
  doc["status"] = report.status();
  doc["pass"] = report.pass();
  doc["records"] = report.records;
  return doc;
}

Report report_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("schema", "") != kReportSchema) {
    throw std::invalid_argument(std::string("not a report with schema ") + kReportSchema);
  }
  Report report;
  if (doc.contains("seed") && doc["seed"].is_number_unsigned()) report.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("slack") && doc["slack"].is_number()) report.slack = doc["slack"].get<double>();
  if (!doc.contains("records") || !doc["records"].is_array()) {
    throw std::invalid_argument("report has no records array");
  }
  for (const auto& r : doc["records"]) {
    for (const char* key : {"name", "predicted", "fitted", "slack", "verdict"}) {
      if (!r.is_object() || !r.contains(key)) {
        throw std::invalid_argument(std::string("record without '") + key + "'");
      }
    }
    const auto& verdict = r["verdict"];
    if (verdict != "pass" && verdict != "fail" && verdict != "skip") {
      throw std::invalid_argument("record '" + r["name"].dump() + "' has an unknown verdict");
    }
    report.records.push_back(r);
  }
  return report;
}

Report merge(const std::vector<Report>& reports) {
  Report out;
  bool first = true;
  for (const auto& r : reports) {
    if (first) {
      out.seed = r.seed;
      out.slack = r.slack;
      first = false;
    } else {
      if (out.seed != r.seed) out.seed.reset();
      if (out.slack != r.slack) out.slack.reset();
    }
    out.records.insert(out.records.end(), r.records.begin(), r.records.end());
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace dispersive::cli
