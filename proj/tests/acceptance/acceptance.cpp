// Acceptance criteria: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dispersive/decay_fit.hpp"
#include "dispersive/dispersion.hpp"
#include "dispersive/nonlinear.hpp"
#include "dispersive/propagator.hpp"
#include "dispersive/special.hpp"
#include "dispersive/strichartz.hpp"
#include "json.hpp"

using namespace dispersive;

namespace {

namespace fs = std::filesystem;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome hypothesis_suite() {
  const auto grid = dyadic_grid(-20, 20, 4);
  bool ok = true;
  std::string detail;
  for (const char* name : {"klein_gordon", "beam", "schrodinger4"}) {
    const auto report = verify_hypotheses(builtin(name), 10.0, grid);
    int passed = 0;
    for (const auto& r : report.records) passed += r.pass ? 1 : 0;
    ok = ok && passed == 4;
    detail += fmt("%s %d/4, ", name, passed);
  }
  const auto wave = verify_hypotheses(builtin("wave"), 10.0, grid);
  const bool wave_ok = wave[Hypothesis::kH1].pass && wave[Hypothesis::kH2].pass &&
                       !wave[Hypothesis::kH3].declared && !wave[Hypothesis::kH4].declared &&
                       !wave[Hypothesis::kH3].pass && !wave[Hypothesis::kH4].pass;
  detail += wave_ok ? "wave H1-H2 pass, H3/H4 lacking" : "wave verdict wrong";
  return {ok && wave_ok, detail};
}

Outcome bessel_suite() {
  using Big = boost::multiprecision::cpp_bin_float_50;
  double worst = 0.0;
  for (int twice : {0, 2, 1, 3}) {
    const BesselOrder nu = BesselOrder::from_twice(twice);
    for (int i = 0; i < 1000; ++i) {
      const double r = 1e-6 * std::pow(1e10, i / 999.0);
      const double ref = static_cast<double>(boost::math::cyl_bessel_j(Big(twice) / 2, Big(r)));
      worst = std::max(worst, std::abs(bessel_j(nu, r) - ref));
    }
  }
  // d/dr (r^-nu J_nu) = -r^-nu J_{nu+1}, checked by central differences.
  double recurrence = 0.0;
  for (int twice : {0, 1, 2, 3}) {
    const BesselOrder nu = BesselOrder::from_twice(twice);
    for (int i = 1; i <= 400; ++i) {
      const double r = 0.125 * i;
      const double h = 1e-4;
      const double lhs = (std::pow(r + h, -nu.value()) * bessel_j(nu, r + h) -
                          std::pow(r - h, -nu.value()) * bessel_j(nu, r - h)) / (2 * h);
      const double rhs = -std::pow(r, -nu.value()) * bessel_j(nu.next(), r);
      recurrence = std::max(recurrence, std::abs(lhs - rhs));
    }
  }
  const BesselOrder zero = BesselOrder::from_twice(0);
  double a = 2.0;
  double b = 3.0;
  for (int i = 0; i < 80; ++i) {
    const double m = 0.5 * (a + b);
    (bessel_j(zero, a) * bessel_j(zero, m) <= 0.0 ? b : a) = m;
  }
  const double root = 0.5 * (a + b);
  const bool ok = worst <= 1e-10 && recurrence <= 1e-6 && std::abs(root - 2.404825557695773) <= 1e-9;
  return {ok, fmt("max abs error %.2e, recurrence %.2e, first zero %.15f", worst, recurrence, root)};
}

Outcome partition_of_unity() {
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double r = i < 5000 ? std::ldexp(1.0, 20) * i / 4999.0 : std::pow(2.0, -20.0 + 40.0 * (i - 5000) / 4999.0);
    double sum = low_symbol(r);
    for (int k = 1; k <= 22; ++k) sum += lp_symbol(k, r);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return {worst < 1e-13, fmt("max deviation %.2e", worst)};
}

Outcome schroedinger_decay() {
  const auto times = geometric_times(10.0, 1000.0, 16);
  const auto s = kernel_decay_sweep(power_relation(2.0), 1, 0, times, -0.5, 0.05, true);
  return {s.pass && std::abs(s.fitted_exponent + 0.5) <= 0.05,
          fmt("slope %.4f (predicted -0.5 +- 0.05)", s.fitted_exponent)};
}

Outcome kg_high_frequency() {
  const auto kg = builtin("klein_gordon");
  const double predicted = best_high_exponents(kg, 3).exponents.time_exp;
  const auto times = geometric_times(10.0, 1000.0, 16);
  const auto s = kernel_decay_sweep(kg, 3, 0, times, -1.5, 0.1, true);
  const std::vector<int> ks = {0, 1, 2, 3, 4};
  const auto dyadic = dyadic_scaling_fit(kg, 3, 200.0, ks);
  const bool time_ok = s.fitted_exponent <= -1.4 && std::abs(s.fitted_exponent + 1.5) <= 0.1;
  const bool freq_ok = std::abs(dyadic.slope - 2.5) <= 0.2;
  return {std::abs(predicted + 1.5) < 1e-12 && time_ok && freq_ok,
          fmt("time slope %.4f (<= -1.4, -1.5 +- 0.1), frequency slope %.4f (2.5 +- 0.2)", s.fitted_exponent,
              dyadic.slope)};
}

Outcome lowfreq_aggregates() {
  // Each aggregate has its own two-minute budget.
  const auto times = geometric_times(10.0, 1000.0, 16);
  auto start = std::chrono::steady_clock::now();
  const auto kg = lowfreq_decay_sweep(builtin("klein_gordon"), 1, times, -0.5, 0.1);
  const double kg_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  start = std::chrono::steady_clock::now();
  const auto beam = lowfreq_decay_sweep(builtin("beam"), 2, times, -0.5, 0.1);
  const double beam_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {kg.fitted_exponent <= -0.4 && beam.fitted_exponent <= -0.4 && kg_time < 120.0 && beam_time < 120.0,
          fmt("klein_gordon n=1 slope %.4f (%.1f s), beam n=2 slope %.4f (%.1f s) (<= -0.4, < 120 s each)",
              kg.fitted_exponent, kg_time, beam.fitted_exponent, beam_time)};
}

GroupDecayResult bump_group(GroupKind kind, int n, double xb, double t_lo, double t_hi, double s_prime) {
  GroupDecayConfig c;
  c.group = kind;
  c.s = 0.0;
  c.s_prime = s_prime;
  c.p = kInf;
  c.q = 2.0;
  c.theta = 1.0;
  c.window_samples = 4;
  c.times = geometric_times(t_lo, t_hi, 16);
  const double L = required_box_length(group_relation(kind), 2 * xb, t_hi);
  std::size_t N = 2;
  while (std::numbers::pi * static_cast<double>(N) / L / 4 < 2 * xb) N *= 2;
  const GridSpec spec{n, N, L};
  return group_decay_check(c, band_limited_field(spec, [xb](double r) { return BumpPair::Phi(r / xb); }));
}

Outcome group_decay() {
  const auto kg = bump_group(GroupKind::kKleinGordon, 1, 1.0, 16.0, 1024.0, 0.5);
  const auto beam = bump_group(GroupKind::kBeam, 2, 0.5, 4.0, 64.0, 0.0);
  GroupDecayConfig control;
  control.group = GroupKind::kFourth;
  control.p = 2.0;
  control.q = 2.0;
  control.times = geometric_times(10.0, 1000.0, 16);
  const GridSpec spec{1, 512, 64.0};
  const auto flat = group_decay_check(control, band_limited_field(spec, [](double r) { return BumpPair::Phi(r / 2); }));
  const double kg_s = kg.series.fitted_exponent;
  const double beam_s = beam.series.fitted_exponent;
  const double flat_s = flat.series.fitted_exponent;
  return {kg_s <= -0.4 && beam_s <= -0.4 && std::abs(flat_s) <= 0.02,
          fmt("KG n=1 slope %.4f, beam n=2 slope %.4f (<= -0.4), p=2 control %.2e (0 +- 0.02)", kg_s, beam_s,
              flat_s)};
}

Outcome small_time_bound() {
  const GridSpec spec{2, 512, 16.0};
  const auto times = geometric_times(1.0 / 64.0, 0.5, 16);
  std::vector<double> widths;
  for (int i = 0; i < 12; ++i) widths.push_back(0.08 * std::pow(25.0, i / 11.0));
  const auto fit = beam_small_time_check(spec, 4.0, times, widths);
  return {fit.residual < 0.15 && std::abs(fit.beta - (1.0 + 2.0 / 4.0 - 1.0)) < 1e-15,
          fmt("c = %.4g, exponent %.3f, log-log residual %.4f (< 0.15)", fit.constant, fit.beta, fit.residual)};
}

double table_number(const nlohmann::json& v) {
  return v.is_string() && v.get<std::string>() == "inf" ? kInf : v.get<double>();
}

Outcome exponent_procedures() {
  std::ifstream in(std::string(DISPERSIVE_TEST_DATA) + "/exponent_truth_table.json");
  const auto table = nlohmann::json::parse(in);
  int total = 0;
  int matched = 0;
  for (const auto& row : table["exponent_set"]) {
    ++total;
    const auto d = classify_exponent_set(table_number(row["q"]), table_number(row["theta1"]),
                                         table_number(row["theta2"]));
    matched += to_string(d.via) == row["expected"].get<std::string>() ? 1 : 0;
  }
  for (const auto& row : table["hls"]) {
    ++total;
    HlsKernelSpec spec{table_number(row["gamma1"]), table_number(row["gamma2"]), table_number(row["p"]),
                       table_number(row["q"]), row["n"].get<int>()};
    matched += to_string(classify_hls(spec).via) == row["expected"].get<std::string>() ? 1 : 0;
  }
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const double k = critical_power_kg(n);
    const double b = critical_power_beam(n);
    worst = std::max(worst, std::abs(n * k * k + (n - 2) * k - 4) / 4.0);
    worst = std::max(worst, std::abs(n * b * b + (n - 4) * b - 8) / 8.0);
  }
  const double k3 = std::abs(critical_power_kg(3) - 1.0);
  return {total == 24 && matched == 24 && worst <= 1e-12 && k3 <= 1e-14,
          fmt("truth table %d/%d, quadratic residual %.1e, |k(3) - 1| = %.1e", matched, total, worst, k3)};
}

Outcome strichartz_bounded_ratio() {
  StrichartzConfig c;
  c.rel = power_relation(2.0);
  c.q = 8.0;
  c.p = 4.0;
  c.eta = 0.0;
  c.profile = interpolated_profile(0.5, 4.0);
  c.trials = 50;
  c.seed = 0;
  const std::vector<double> horizons = {4.0, 8.0, 16.0};
  const auto s = strichartz_stability(c, horizons, 256, 0.3);
  return {s.stable, fmt("max ratio %.4f / %.4f / %.4f (T = 4, 8, 16), %.4f on 2N; worst change %.3f (<= 0.3)",
                        s.max_ratios[0], s.max_ratios[1], s.max_ratios[2], s.refined_max_ratio, s.worst_change)};
}

Outcome contraction() {
  const GridSpec line{1, 512, 64.0};
  NonlinearProblem kg;
  kg.family = Family::kKleinGordon;
  kg.kappa = 3.0;
  kg.u0 = gaussian_field(line, 1.0);
  kg.u1 = gaussian_field(line, 1.0);
  kg.T = 4.0;
  kg.M_t = 128;
  kg.data_scale = 1e-2;
  const auto r = picard_iterate(kg, 6, false);
  bool kg_ok = r.ratios.size() >= 5 && r.contracting;
  double kg_rho = 0.0;
  for (std::size_t j = 0; j < 5 && j < r.ratios.size(); ++j) {
    kg_rho = std::max(kg_rho, r.ratios[j]);
    kg_ok = kg_ok && r.ratios[j] < 0.5;
  }
  const double refinement = time_refinement_ratio(kg);

  const GridSpec plane{2, 128, 32.0};
  NonlinearProblem beam;
  beam.family = Family::kBeam;
  beam.kappa = 3.0;
  beam.s = 2.0;
  beam.u0 = gaussian_field(plane, 1.0);
  beam.u1 = gaussian_field(plane, 1.0);
  beam.T = 2.0;
  beam.M_t = 64;
  beam.data_scale = 1e-2;
  const bool conditions = beam_exponent_conditions(2, 3.0, 2.0).pass;
  const auto rb = picard_iterate(beam, 6, false);
  double beam_rho = 0.0;
  for (double rho : rb.ratios) beam_rho = std::max(beam_rho, rho);
  const bool beam_ok = conditions && rb.contracting && !rb.ratios.empty() && beam_rho < 0.5;
  return {kg_ok && refinement >= 3.0 && refinement <= 5.0 && beam_ok,
          fmt("NLKG max rho %.2e, M_t refinement ratio %.3f ([3, 5]); NLB conditions %s, max rho %.2e", kg_rho,
              refinement, conditions ? "pass" : "fail", beam_rho)};
}

int run_suite(const fs::path& out) {
  const std::string cmd = std::string(DISPERSIVE_CLI_EXE) + " run --seed 0 --config " + DISPERSIVE_SUITE +
                          " --out " + out.string() + " > " + (out.string() + ".log") + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string without_timestamp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("\"timestamp\":") == std::string::npos) out << line << '\n';
  }
  return out.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path root = fs::path(DISPERSIVE_ACCEPTANCE_SCRATCH);
  const fs::path a = root / "run_a";
  const fs::path b = root / "run_b";
  fs::remove_all(root);
  fs::create_directories(root);
  const int code_a = run_suite(a);
  const int code_b = run_suite(b);
  if (code_a == 2 || code_b == 2 || !fs::exists(a / "report.json")) {
    return {false, fmt("suite did not run (exit %d / %d)", code_a, code_b)};
  }
  bool same = without_timestamp(a / "report.json") == without_timestamp(b / "report.json");
  int files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (e.path().extension() != ".csv") continue;
    ++files;
    same = same && slurp(e.path()) == slurp(b / e.path().filename());
  }
  const auto records = nlohmann::json::parse(slurp(a / "report.json"))["records"].size();
  return {same && code_a == code_b,
          fmt("%zu records and %d CSV files %s across two seed-0 runs (exit %d / %d)", records, files,
              same ? "byte-identical" : "DIFFER", code_a, code_b)};
}

struct Criterion {
  int id;
  const char* title;
  double time_limit;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "hypothesis suite", 1.0, hypothesis_suite},
      {2, "Bessel suite", 5.0, bessel_suite},
      {3, "partition of unity", kInf, partition_of_unity},
      {4, "sharp dispersive decay, Schroedinger oracle", 30.0, schroedinger_decay},
      {5, "Klein-Gordon high-frequency decay, n=3", 180.0, kg_high_frequency},
      {6, "low-frequency aggregates", 240.0, lowfreq_aggregates},
      {7, "group decay", 120.0, group_decay},
      {8, "beam small-time bound", kInf, small_time_bound},
      {9, "exponent decision procedures", kInf, exponent_procedures},
      {10, "Strichartz bounded ratio", 180.0, strichartz_bounded_ratio},
      {11, "NLKG / NLB contraction", 300.0, contraction},
      {12, "determinism", kInf, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed < c.time_limit;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::string limit = std::isfinite(c.time_limit) ? fmt(", limit %.0f s", c.time_limit) : "";
    if (!in_time) limit += ", TOO SLOW";
    std::printf("%s criterion %2d: %s: %s [%.1f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(),
                elapsed, limit.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
