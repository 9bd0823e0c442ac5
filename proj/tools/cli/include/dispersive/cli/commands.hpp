#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "dispersive/cli/report.hpp"
#include "json.hpp"

namespace dispersive::cli {

struct Context {
  std::uint64_t seed = 0;
  double slack = 0.1;
  std::filesystem::path out = ".";
  /// File stem for the running job's CSV output; set by run_jobs.
  std::string label = "data";
};

/// A validated scenario, ready to run. Jobs append records to the report
/// and write their CSV files under Context::out.
struct Job {
  std::string command;
  std::string label;
  std::function<void(const Context&, Report&)> run;
};

/// hypotheses, kernel-decay, lowfreq-decay, group-decay, strichartz, hls,
/// nonlinear, bessel-selftest.
const std::vector<std::string>& command_names();

/// Validates the scenario parameters for `command` and binds them into a
/// job. Relative file paths resolve against `base`. Throws ConfigError.
Job parse_scenario(const std::string& command, const nlohmann::json& params, const std::string& location,
                   const std::filesystem::path& base = {});

/// {"scenarios": [{"command": ..., ...}, ...]}; labels are made unique.
std::vector<Job> parse_suite(const nlohmann::json& doc, const std::string& location,
                             const std::filesystem::path& base = {});

/// Runs the jobs in order into one report.
Report run_jobs(const std::vector<Job>& jobs, const Context& context);

}  // namespace dispersive::cli
