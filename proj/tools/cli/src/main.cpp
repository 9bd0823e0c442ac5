#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dispersive/cli/commands.hpp"
#include "dispersive/cli/config.hpp"
#include "dispersive/cli/report.hpp"
#include "json.hpp"

namespace {

using dispersive::cli::ConfigError;
using dispersive::cli::Report;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  double slack = 0.1;
  std::optional<std::string> relation;
  std::optional<int> dim;
  std::vector<std::string> inputs;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Output directory for report.json and CSV files");
  sub->add_option("--seed", o.seed, "Seed for randomised checks");
  sub->add_option("--slack", o.slack, "Default slack for exponent verdicts");
}

std::filesystem::path prepare_out(const std::string& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec || !std::filesystem::is_directory(out)) throw ConfigError(out + ": cannot create output directory");
  const auto probe = std::filesystem::path(out) / ".write-test";
  std::ofstream(probe).put('\n');
  if (!std::filesystem::exists(probe)) throw ConfigError(out + ": output directory is not writable");
  std::filesystem::remove(probe);
  return out;
}

int finish(const Report& report, const std::filesystem::path& out) {
  std::ofstream(out / "report.json", std::ios::binary)
      << dispersive::cli::dump(dispersive::cli::to_json(report, dispersive::cli::utc_timestamp()));
  for (const auto& r : report.records) {
    const std::string verdict = r["verdict"].get<std::string>();
    std::cout << (verdict == "pass" ? "PASS " : verdict == "fail" ? "FAIL " : "SKIP ") << r["name"].get<std::string>()
              << " fitted=" << r["fitted"].dump() << " predicted=" << r["predicted"].dump() << "\n";
  }
  std::cout << "status: " << report.status() << "\n";
  for (const auto& name : report.failing()) std::cerr << "failed: " << name << "\n";
  return report.pass() ? kExitPass : kExitFail;
}

int run_command(const std::string& command, const Options& o) {
  nlohmann::json params = nlohmann::json::object();
  std::string location = "<arguments>";
  std::filesystem::path base;
  if (!o.config.empty()) {
    params = dispersive::cli::load_json(o.config);
    location = o.config;
    base = std::filesystem::path(o.config).parent_path();
  }
  if (o.relation) params["relation"] = *o.relation;
  if (o.dim) params["n"] = *o.dim;
  std::vector<dispersive::cli::Job> jobs;
  if (command == "run") {
    if (o.config.empty()) throw ConfigError("run: --config is required");
    jobs = dispersive::cli::parse_suite(params, location, base);
  } else {
    jobs.push_back(dispersive::cli::parse_scenario(command, params, location, base));
  }
  dispersive::cli::Context ctx;
  ctx.seed = o.seed;
  ctx.slack = o.slack;
  ctx.out = prepare_out(o.out);
  return finish(dispersive::cli::run_jobs(jobs, ctx), ctx.out);
}

int run_merge(const Options& o) {
  std::vector<Report> reports;
  for (const auto& path : o.inputs) {
    try {
      reports.push_back(dispersive::cli::report_from_json(dispersive::cli::load_json(path)));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
  return finish(dispersive::cli::merge(reports), prepare_out(o.out));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of dispersive decay, Strichartz and small-data contraction estimates"};
  app.require_subcommand(1);
  Options o;

  for (const auto& name : dispersive::cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name, "Run the " + name + " scenario");
    sub->add_option("--config", o.config, "Scenario parameters (JSON object)")->check(CLI::ExistingFile);
    add_common(sub, o);
    if (name == "hypotheses" || name == "kernel-decay" || name == "lowfreq-decay" || name == "strichartz") {
      sub->add_option("--relation", o.relation, "Builtin relation name");
    }
    if (name == "kernel-decay" || name == "lowfreq-decay" || name == "group-decay" || name == "nonlinear") {
      sub->add_option("--dim", o.dim, "Spatial dimension");
    }
  }
  CLI::App* run = app.add_subcommand("run", "Run a suite {\"scenarios\": [...]} into one report");
  run->add_option("--config", o.config, "Suite file")->required()->check(CLI::ExistingFile);
  add_common(run, o);
  CLI::App* merge = app.add_subcommand("merge", "Merge reports and recompute the verdict");
  merge->add_option("reports", o.inputs, "Report files");
  merge->add_option("--out", o.out, "Output directory for the merged report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    if (chosen == merge) return run_merge(o);
    return run_command(chosen->get_name(), o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
