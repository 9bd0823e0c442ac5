#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "dispersive/cli/commands.hpp"
#include "dispersive/cli/config.hpp"
#include "dispersive/cli/report.hpp"
#include "dispersive/dispersion.hpp"

using namespace dispersive::cli;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(DISPERSIVE_CLI_SCRATCH) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DISPERSIVE_CLI_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Report report_of(std::initializer_list<Record> records) {
  Report r;
  r.seed = 0;
  r.slack = 0.1;
  for (const auto& rec : records) r.add(rec);
  return r;
}

}  // namespace

TEST_CASE("verdict rules") {
  CHECK(check("a", -0.5, -0.55, 0.1, Rule::kUpper).verdict == "pass");
  CHECK(check("a", -0.5, -0.35, 0.1, Rule::kUpper).verdict == "fail");
  CHECK(check("a", -0.5, -0.75, 0.1, Rule::kSharp).verdict == "fail");
  CHECK(check("a", 4.0, 3.2, 1.0, Rule::kSharp).verdict == "pass");
  CHECK(check("a", 1.0, 0.0, 0.0, Rule::kLower).verdict == "fail");
  CHECK(check("a", 0.0, std::nan(""), 1.0, Rule::kUpper).verdict == "fail");
  CHECK(flag("f", true).verdict == "pass");
  CHECK(flag("f", false).verdict == "fail");
  CHECK(skipped("s", "n/a").verdict == "skip");
}

TEST_CASE("every record carries the recheck fields") {
  const json j = to_json(check("x", 1.5, 1.25, 0.5, Rule::kSharp, {{"k", 2}}));
  for (const char* key : {"name", "predicted", "fitted", "slack", "rule", "verdict", "details"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["details"]["k"] == 2);
}

TEST_CASE("merge of two passing reports passes") {
  const Report a = report_of({check("a", 0, 0, 0, Rule::kUpper)});
  const Report b = report_of({flag("b", true)});
  const Report m = merge({a, b});
  CHECK(m.records.size() == 2);
  CHECK(m.pass());
  CHECK(m.status() == "pass");
  CHECK(m.seed == std::optional<std::uint64_t>(0));
}

TEST_CASE("merge with a failure keeps the failing record verbatim") {
  const Record bad = check("bad", -0.5, -0.1, 0.1, Rule::kUpper, {{"note", "slow"}});
  const Report a = report_of({flag("a", true)});
  const Report b = report_of({bad});
  const Report m = merge({a, b});
  CHECK_FALSE(m.pass());
  CHECK(m.status() == "fail");
  REQUIRE(m.failing().size() == 1);
  CHECK(m.failing()[0] == "bad");
  CHECK(m.records[1] == to_json(bad));
  // Round trip through the serialised form.
  const Report again = report_from_json(json::parse(dump(to_json(m, "t"))));
  CHECK(again.records == m.records);
}

TEST_CASE("merge of zero reports is flagged no-data") {
  const Report m = merge({});
  CHECK(m.records.empty());
  CHECK(m.pass());
  CHECK(m.status() == "no-data");
  const json doc = to_json(m, "t");
  CHECK(doc["status"] == "no-data");
  CHECK(doc["schema"] == kReportSchema);
}

TEST_CASE("merge drops disagreeing seeds") {
  Report a = report_of({});
  Report b = report_of({});
  b.seed = 7;
  CHECK_FALSE(merge({a, b}).seed.has_value());
}

TEST_CASE("malformed reports are rejected") {
  CHECK_THROWS_AS(report_from_json(json{{"schema", "other"}}), std::invalid_argument);
  CHECK_THROWS_AS(report_from_json(json{{"schema", kReportSchema}, {"records", json::array({{{"name", "x"}}})}}),
                  std::invalid_argument);
}

TEST_CASE("params: defaults, infinity, unknown keys") {
  Params p(json{{"p", "inf"}, {"n", 2}, {"extra", true}}, "cfg");
  CHECK(p.number("p", 2.0) == std::numeric_limits<double>::infinity());
  CHECK(p.integer("n", 1) == 2);
  CHECK(p.number("q", 3.0) == 3.0);
  try {
    p.finish();
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("cfg.extra") != std::string::npos);
  }
  Params bad(json{{"n", 1.5}}, "cfg");
  CHECK_THROWS_AS(bad.integer("n", 1), ConfigError);
}

TEST_CASE("params: geometric time ranges") {
  Params p(json{{"times", {{"lo", 1.0}, {"hi", 100.0}, {"count", 3}}}}, "cfg");
  const auto t = p.times("times", 10.0, 1000.0, 16);
  REQUIRE(t.size() == 3);
  CHECK(t[1] == doctest::Approx(10.0).epsilon(1e-14));
  Params q(json{{"times", {3.0, 2.0}}}, "cfg");
  CHECK_THROWS_AS(q.times("times", 1.0, 2.0, 8), ConfigError);
}

TEST_CASE("custom relation from expressions matches the builtin") {
  Params p(json{{"relation",
                 {{"name", "kg_expr"}, {"phi", "sqrt(1 + r^2)"}, {"dphi", "r / sqrt(1 + r^2)"},
                  {"d2phi", "1 / (1 + r^2)^1.5"}, {"m1", 1}, {"m2", 2}, {"alpha1", -1}, {"alpha2", 2}}}},
           "cfg");
  const auto rel = p.relation("relation", "");
  const auto kg = dispersive::builtin("klein_gordon");
  for (double r : {1e-3, 0.5, 2.0, 40.0}) {
    CHECK(rel.phi(r) == doctest::Approx(kg.phi(r)).epsilon(1e-14));
    CHECK(rel.dphi(r) == doctest::Approx(kg.dphi(r)).epsilon(1e-14));
    CHECK(rel.d2phi(r) == doctest::Approx(kg.d2phi(r)).epsilon(1e-14));
  }
  CHECK(rel.alpha1 == kg.alpha1);
  CHECK(rel.alpha2 == kg.alpha2);
  Params broken(json{{"relation", {{"phi", "sqrt(1 +"}, {"dphi", "r"}, {"d2phi", "1"}, {"m1", 1}, {"m2", 1}}}}, "cfg");
  CHECK_THROWS_AS(broken.relation("relation", ""), ConfigError);
}

TEST_CASE("scenario validation names the location") {
  try {
    parse_scenario("hypotheses", json{{"relation", "nope"}}, "cfg");
    FAIL("unknown relation accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("cfg.relation") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_scenario("kernel-decay", json{{"n", 4}}, "cfg"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("group-decay", json{{"group", "kg"}, {"s", 3}}, "cfg"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("nope", json::object(), "cfg"), ConfigError);
  CHECK_THROWS_AS(parse_suite(json{{"scenarios", json::array()}}, "cfg"), ConfigError);
}

TEST_CASE("identical scenarios give byte-identical reports") {
  const json suite = {{"scenarios",
                       {{{"command", "hypotheses"}, {"relation", "beam"}},
                        {{"command", "hls"},
                         {"cases", {{{"gamma1", 0.5}, {"gamma2", 0.5}, {"p", 2}, {"q", 4}}}},
                         {"numeric", {{"trials", 4}}}}}}};
  const auto jobs = parse_suite(suite, "suite");
  Context ctx;
  ctx.out = scratch("determinism_a");
  const std::string a = dump(to_json(run_jobs(jobs, ctx), "t"));
  const std::string csv_a = slurp(ctx.out / "hls.csv");
  ctx.out = scratch("determinism_b");
  const std::string b = dump(to_json(run_jobs(jobs, ctx), "t"));
  CHECK(a == b);
  CHECK(csv_a == slurp(ctx.out / "hls.csv"));
  CHECK_FALSE(csv_a.empty());
}

TEST_CASE("executable: hypotheses on klein_gordon") {
  const fs::path out = scratch("exe_hyp");
  CHECK(run_cli("hypotheses --relation klein_gordon --out " + out.string()) == 0);
  const json doc = json::parse(slurp(out / "report.json"));
  int passing = 0;
  for (const auto& r : doc["records"]) {
    const std::string name = r["name"];
    if (name.find("/H") != std::string::npos && r["verdict"] == "pass") ++passing;
  }
  CHECK(passing == 4);
  CHECK(doc["status"] == "pass");
  CHECK(fs::exists(out / "hypotheses.csv"));
}

TEST_CASE("executable: exit codes") {
  const fs::path out = scratch("exe_codes");
  CHECK(run_cli("hypotheses --relation nope --out " + out.string()) == 2);
  CHECK(run_cli("no-such-command") == 2);
  std::ofstream(out / "tight.json") << R"({"relation": "klein_gordon", "C": 1.01})";
  CHECK(run_cli("hypotheses --config " + (out / "tight.json").string() + " --out " + out.string()) == 1);
  const json failed = json::parse(slurp(out / "report.json"));
  CHECK(failed["pass"] == false);
  fs::copy_file(out / "report.json", out / "failed.json");
  std::ofstream(out / "syntax.json") << "{\"relation\": ";
  CHECK(run_cli("hypotheses --config " + (out / "syntax.json").string() + " --out " + out.string()) == 2);
  CHECK(run_cli("merge --out " + (out / "m").string()) == 0);
  CHECK(run_cli("merge " + (out / "failed.json").string() + " --out " + (out / "m").string()) == 1);
  CHECK(run_cli("merge " + (out / "syntax.json").string() + " --out " + (out / "m").string()) == 2);
}

TEST_CASE("executable: Schroedinger kernel decay") {
  const fs::path out = scratch("exe_kernel");
  CHECK(run_cli("kernel-decay --relation 'power(2)' --dim 1 --out " + out.string()) == 0);
  const json doc = json::parse(slurp(out / "report.json"));
  REQUIRE(doc["records"].size() == 1);
  CHECK(doc["records"][0]["fitted"].get<double>() == doctest::Approx(-0.5).epsilon(0.1));
  std::ifstream csv(out / "kernel-decay.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "n,k,t,s,re,im,abs,err_est");
}
