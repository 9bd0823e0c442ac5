#include "dispersive/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dispersive/cli/config.hpp"
#include "dispersive/decay_fit.hpp"
#include "dispersive/dispersion.hpp"
#include "dispersive/kernel.hpp"
#include "dispersive/nonlinear.hpp"
#include "dispersive/propagator.hpp"
#include "dispersive/special.hpp"
#include "dispersive/strichartz.hpp"

namespace dispersive::cli {

namespace {

using nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// CSV with 17 significant digits, written when the job finishes.
class Csv {
 public:
  Csv(const Context& ctx, std::string header) : path_(ctx.out / (ctx.label + ".csv")) {
    buf_.precision(17);
    buf_ << header << '\n';
  }

  template <typename... T>
  void row(const T&... values) {
    std::size_t i = 0;
    ((buf_ << (i++ == 0 ? "" : ",") << values), ...);
    buf_ << '\n';
  }

  ~Csv() {
    std::ofstream out(path_, std::ios::binary);
    out << buf_.str();
  }

 private:
  std::filesystem::path path_;
  std::ostringstream buf_;
};

std::string num(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

json fit_details(const DecaySeries& series) {
  json times = json::array();
  json values = json::array();
  for (const auto& s : series.samples) {
    times.push_back(s.t);
    values.push_back(s.M);
  }
  return {{"times", times}, {"values", values}, {"intercept", series.intercept},
          {"residual", series.residual}, {"sharp", series.sharp}};
}

Record series_record(const std::string& name, const DecaySeries& series, json extra = json::object()) {
  json details = fit_details(series);
  details.update(extra);
  return check(name, series.predicted_exponent, series.fitted_exponent, series.slack,
               series.sharp ? Rule::kSharp : Rule::kUpper, std::move(details));
}

SupGridSpec sup_grid(Params grid, SupGridSpec defaults) {
  defaults.near_points = grid.integer("near_points", defaults.near_points);
  defaults.near_radius = grid.number("near_radius", defaults.near_radius);
  defaults.far_points = grid.integer("far_points", defaults.far_points);
  defaults.refine_points = grid.integer("refine_points", defaults.refine_points);
  if (grid.has("s_max")) defaults.s_max = grid.number("s_max");
  grid.finish();
  return defaults;
}

Branch branch_from(Params& p) {
  const std::string b = p.string("branch", "A");
  if (b == "A" || b == "a") return Branch::kA;
  if (b == "B" || b == "b") return Branch::kB;
  p.fail("branch", "expected \"A\" or \"B\"");
}

std::optional<double> slack_of(Params& p) {
  if (!p.has("slack")) return std::nullopt;
  const double s = p.number("slack");
  if (!(s >= 0.0)) p.fail("slack", "must be >= 0");
  return s;
}

// ---------------------------------------------------------------------------

Job hypotheses_job(Params& p) {
  const DispersionRelation rel = p.relation("relation", "klein_gordon");
  const double C = p.number("C", 10.0);
  const int j_lo = p.integer("j_lo", -20);
  const int j_hi = p.integer("j_hi", 20);
  const int per_octave = p.integer("per_octave", 4);
  if (!(C > 1.0)) p.fail("C", "must exceed 1");
  if (j_lo >= j_hi || per_octave < 1) p.fail("j_hi", "need j_lo < j_hi and per_octave >= 1");
  Job job;
  job.run = [=](const Context& ctx, Report& report) {
    const auto grid = dyadic_grid(j_lo, j_hi, per_octave);
    const HypothesisReport hr = verify_hypotheses(rel, C, grid);
    Csv csv(ctx,
            "hypothesis,declared,pass,ratio_min,ratio_max,constant,normalized_min,normalized_max,derivative_bound_max");
    for (const auto& rec : hr.records) {
      const std::string name = "hypotheses/" + rel.name + "/" + std::string(to_string(rec.id));
      csv.row(to_string(rec.id), rec.declared, rec.pass, rec.ratio_min, rec.ratio_max, rec.constant,
              rec.normalized_min, rec.normalized_max, rec.derivative_bound_max);
      if (!rec.declared) {
        report.add(skipped(name, "not declared: " + rec.note));
        continue;
      }
      // Worst normalised deviation from comparability; the hypothesis holds iff it is <= C.
      const double spread = std::max({rec.normalized_max, 1.0 / rec.normalized_min, rec.derivative_bound_max});
      report.add(check(name, C, spread, 0.0, Rule::kUpper,
                       {{"ratio_min", rec.ratio_min}, {"ratio_max", rec.ratio_max}, {"constant", rec.constant},
                        {"normalized_min", rec.normalized_min}, {"normalized_max", rec.normalized_max},
                        {"derivative_bound_max", rec.derivative_bound_max}, {"samples", rec.samples},
                        {"note", rec.note}}));
    }
    report.add(flag("hypotheses/" + rel.name + "/metadata", hr.metadata_consistent,
                    {{"m1", rel.m1}, {"m2", rel.m2},
                     {"alpha1", rel.alpha1 ? json(*rel.alpha1) : json()},
                     {"alpha2", rel.alpha2 ? json(*rel.alpha2) : json()}}));
  };
  return job;
}

Job kernel_decay_job(Params& p) {
  const DispersionRelation rel = p.relation("relation", "power(2)");
  const int n = p.integer("n", 1);
  const int k = p.integer("k", 0);
  if (n < 1 || n > kMaxKernelDimension) p.fail("n", "must be 1, 2 or 3");
  const auto times = p.times("times", 10.0, 1000.0, 16);
  if (times.size() < kMinDecaySamples) p.fail("times", "need at least 8 samples");
  ExponentPair pair = best_high_exponents(rel, n).exponents;
  if (p.has("theta")) pair = predicted_high_exponents(rel, n, p.number("theta"), branch_from(p));
  const double predicted = p.number("predicted", pair.time_exp);
  const bool sharp = p.boolean("sharp", false);
  const auto slack = slack_of(p);
  const SupGridSpec grid = sup_grid(p.child("grid"), {});
  const std::vector<int> ks = p.integers("ks", {});
  const double t_fixed = p.number("t_fixed", 200.0);
  const double freq_predicted = p.number("freq_predicted", pair.freq_exp);
  const double freq_slack = p.number("freq_slack", 0.2);
  if (!ks.empty() && ks.size() < 2) p.fail("ks", "need at least two scales");
  for (int kk : ks) {
    if (kk < 0 || kk > 8) p.fail("ks", "scales must lie in [0, 8]");
  }
  Job job;
  job.run = [=](const Context& ctx, Report& report) {
    const std::string base = "kernel-decay/" + rel.name + "/n" + std::to_string(n);
    Csv csv(ctx, "n,k,t,s,re,im,abs,err_est");
    auto sample = [&](int kk, double t) {
      const SupNorm sup = sup_norm(rel, n, kk, t, grid);
      const KernelSample at = eval_kernel(rel, n, kk, t, sup.argmax);
      csv.row(n, kk, t, sup.argmax, at.value.real(), at.value.imag(), sup.value, at.err_est);
      return sup;
    };
    std::vector<DecaySample> samples;
    bool converged = true;
    for (double t : times) {
      const SupNorm sup = sample(k, t);
      converged = converged && sup.converged;
      samples.push_back({t, sup.value});
    }
    const DecaySeries series = make_decay_series(samples, predicted, slack.value_or(ctx.slack), sharp);
    report.add(series_record(base + "/k" + std::to_string(k), series, {{"converged", converged}}));
    if (ks.empty()) return;
    std::vector<double> values;
    for (int kk : ks) values.push_back(sample(kk, t_fixed).value);
    const ScalingFit fit = fit_dyadic_scaling(ks, values);
    report.add(check(base + "/dyadic-t" + num(t_fixed), freq_predicted, fit.slope, freq_slack, Rule::kSharp,
                     {{"ks", ks}, {"sup", values}, {"residual", fit.residual}}));
  };
  return job;
}

Job lowfreq_decay_job(Params& p) {
  const DispersionRelation rel = p.relation("relation", "klein_gordon");
  const int n = p.integer("n", 1);
  if (n < 1 || n > kMaxKernelDimension) p.fail("n", "must be 1, 2 or 3");
  const auto times = p.times("times", 10.0, 1000.0, 16);
  if (times.size() < kMinDecaySamples) p.fail("times", "need at least 8 samples");
  const double predicted = p.number("predicted", -predicted_lowfreq_aggregate(rel, n));
  const double tol = p.number("tol", 1e-8);
  if (!(tol > 0.0)) p.fail("tol", "must be > 0");
  const auto slack = slack_of(p);
  const SupGridSpec grid = sup_grid(p.child("grid"), {128, 2.0, 256, 64, std::nullopt});
  Job job;
  job.run = [=](const Context& ctx, Report& report) {
    Csv csv(ctx, "n,t,s,abs");
    std::vector<DecaySample> samples;
    for (double t : times) {
      const SupNorm sup = low_freq_sup(rel, n, t, tol, grid);
      csv.row(n, t, sup.argmax, sup.value);
      samples.push_back({t, sup.value});
    }
    const DecaySeries series = make_decay_series(samples, predicted, slack.value_or(ctx.slack), false);
    report.add(series_record("lowfreq-decay/" + rel.name + "/n" + std::to_string(n), series));
  };
  return job;
}

std::size_t pow2_at_least(double v) {
  std::size_t N = 2;
  while (static_cast<double>(N) < v) N *= 2;
  return N;
}

Job group_decay_job(Params& p) {
  const std::string check_kind = p.string("check", "group");
  Job job;
  if (check_kind == "group") {
    GroupDecayConfig c;
    try {
      c.group = group_kind_from_string(p.string("group", "kg"));
    } catch (const std::invalid_argument&) {
      p.fail("group", "expected kg, beam or fourth");
    }
    const int n = p.integer("n", 1);
    if (n < 1 || n > 2) p.fail("n", "must be 1 or 2");
    c.s = p.number("s", 0.0);
    c.s_prime = p.number("s_prime", 0.0);
    c.p = p.number("p", kInf);
    c.q = p.number("q", 2.0);
    c.theta = p.number("theta", 1.0);
    c.times = p.times("times", 16.0, 1024.0, 16);
    c.sharp = p.boolean("sharp", false);
    c.window_samples = p.integer("window_samples", c.group == GroupKind::kFourth ? 1 : 4);
    c.window_length = p.number("window_length", std::numbers::pi);
    const auto slack = slack_of(p);
    Params data = p.child("data");
    const std::string kind = data.string("kind", "bump");
    const double xb = data.number("xb", 1.0);
    const double width = data.number("width", 1.0);
    data.finish();
    if (kind != "bump" && kind != "gaussian") p.fail("data", "kind must be bump or gaussian");
    if (!(xb > 0.0) || !(width > 0.0)) p.fail("data", "xb and width must be positive");
    Params grid = p.child("grid");
    const double xi_max = kind == "bump" ? 2.0 * xb : 6.0 / width;
    const double L = grid.number("L", required_box_length(group_relation(c.group), xi_max, c.times.back()));
    const int N = grid.integer("N", static_cast<int>(pow2_at_least(4.0 * xi_max * L / std::numbers::pi)));
    grid.finish();
    const GridSpec spec{n, static_cast<std::size_t>(N), L};
    try {
      spec.validate();
      predicted_group_exponent(c, n);
    } catch (const std::invalid_argument& e) {
      p.fail("group", e.what());
    }
    job.run = [=](const Context& ctx, Report& report) {
      GroupDecayConfig config = c;
      config.slack = slack.value_or(ctx.slack);
      const GridField g = kind == "bump"
                              ? band_limited_field(spec, [xb](double r) { return BumpPair::Phi(r / xb); })
                              : gaussian_field(spec, width);
      const GroupDecayResult r = group_decay_check(config, g);
      Csv csv(ctx, "t,ratio");
      for (const auto& s : r.series.samples) csv.row(s.t, s.M);
      report.add(series_record("group-decay/" + std::string(to_string(config.group)) + "/n" + std::to_string(n) +
                                   "/p" + num(config.p),
                               r.series,
                               {{"N", spec.N}, {"L", spec.L}, {"data_norm", r.data_norm},
                                {"boundary_fraction", r.boundary_fraction}}));
    };
  } else if (check_kind == "beam-lq") {
    const double q = p.number("q", 4.0);
    const double width = p.number("width", 1.0);
    const auto times = p.times("times", 1.0, 8.0, 8);
    const int window = p.integer("window_samples", 4);
    Params grid = p.child("grid");
    const GridSpec spec{2, static_cast<std::size_t>(grid.integer("N", 512)), grid.number("L", 128.0)};
    grid.finish();
    const auto slack = slack_of(p);
    if (!(q >= 2.0) || !(width > 0.0)) p.fail("q", "need q >= 2 and width > 0");
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      p.fail("grid", e.what());
    }
    job.run = [=](const Context& ctx, Report& report) {
      const DecaySeries s = beam_lq_decay_check(spec, q, width, times, slack.value_or(ctx.slack), window);
      Csv csv(ctx, "t,ratio");
      for (const auto& x : s.samples) csv.row(x.t, x.M);
      report.add(series_record("group-decay/beam-lq/q" + num(q), s, {{"width", width}}));
    };
  } else if (check_kind == "beam-small-time") {
    const double q = p.number("q", 4.0);
    const auto times = p.times("times", 1.0 / 64.0, 0.5, 16);
    Params w = p.child("widths");
    const double w_lo = w.number("lo", 0.08);
    const double w_hi = w.number("hi", 2.0);
    const int w_count = w.integer("count", 12);
    w.finish();
    Params grid = p.child("grid");
    const GridSpec spec{2, static_cast<std::size_t>(grid.integer("N", 512)), grid.number("L", 16.0)};
    grid.finish();
    const double max_residual = p.number("max_residual", 0.15);
    if (!(w_lo > 0.0) || !(w_hi >= w_lo) || w_count < 1) p.fail("widths", "need 0 < lo <= hi and count >= 1");
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      p.fail("grid", e.what());
    }
    job.run = [=](const Context& ctx, Report& report) {
      std::vector<double> widths;
      for (int i = 0; i < w_count; ++i) {
        widths.push_back(w_count == 1 ? w_lo : w_lo * std::pow(w_hi / w_lo, static_cast<double>(i) / (w_count - 1)));
      }
      const EnvelopeFit f = beam_small_time_check(spec, q, times, widths);
      Csv csv(ctx, "t,ratio,envelope");
      for (std::size_t i = 0; i < f.times.size(); ++i) {
        csv.row(f.times[i], f.ratios[i], f.constant * std::pow(f.times[i], f.beta));
      }
      report.add(check("group-decay/beam-small-time/q" + num(q), 0.0, f.residual, max_residual, Rule::kUpper,
                       {{"beta", f.beta}, {"constant", f.constant}, {"free_slope", f.free_slope},
                        {"widths", widths}}));
    };
  } else {
    p.fail("check", "expected group, beam-lq or beam-small-time");
  }
  return job;
}

Job strichartz_job(Params& p) {
  StrichartzConfig c;
  c.rel = p.relation("relation", "power(2)");
  c.q = p.number("q", 8.0);
  c.p = p.number("p", 4.0);
  c.eta = p.number("eta", 0.0);
  const double decay = p.number("decay", 0.5);
  c.profile = interpolated_profile(decay, c.p);
  c.trials = p.integer("trials", 50);
  c.time_nodes = p.integer("time_nodes", 33);
  const auto horizons = p.numbers("horizons", {4.0, 8.0, 16.0});
  const int N = p.integer("N", 256);
  const double tolerance = p.number("tolerance", 0.3);
  if (c.trials < 1 || c.time_nodes < 2) p.fail("trials", "need trials >= 1 and time_nodes >= 2");
  if (horizons.empty()) p.fail("horizons", "need at least one horizon");
  try {
    GridSpec{1, static_cast<std::size_t>(N), 1.0}.validate();
  } catch (const std::invalid_argument& e) {
    p.fail("N", e.what());
  }
  Job job;
  job.run = [=](const Context& ctx, Report& report) {
    StrichartzConfig config = c;
    config.seed = ctx.seed;
    const std::string base = "strichartz/" + c.rel.name + "/q" + num(c.q) + "-p" + num(c.p);
    const Decision d = classify_exponent_set(c.q, c.profile.theta1, c.profile.theta2);
    report.add(flag(base + "/admissible", d.admitted(),
                    {{"case", to_string(d.via)}, {"reason", d.reason}, {"theta1", c.profile.theta1},
                     {"theta2", c.profile.theta2}}));
    if (!d.admitted()) return;
    const StrichartzStability s = strichartz_stability(config, horizons, static_cast<std::size_t>(N), tolerance);
    Csv csv(ctx, "T,N,max_ratio");
    for (std::size_t i = 0; i < s.horizons.size(); ++i) csv.row(s.horizons[i], N, s.max_ratios[i]);
    csv.row(s.horizons.front(), 2 * N, s.refined_max_ratio);
    report.add(check(base + "/stability", 0.0, s.worst_change, tolerance, Rule::kUpper,
                     {{"horizons", s.horizons}, {"max_ratios", s.max_ratios},
                      {"refined_max_ratio", s.refined_max_ratio}, {"trials", c.trials}}));
  };
  return job;
}

AdmissibleCase case_from(Params& p, const std::string& key) {
  static const std::map<std::string, AdmissibleCase> kCases = {
      {"a", AdmissibleCase::kA}, {"b", AdmissibleCase::kB}, {"c", AdmissibleCase::kC},
      {"d", AdmissibleCase::kD}, {"none", AdmissibleCase::kNone}};
  const auto it = kCases.find(p.string(key, ""));
  if (it == kCases.end()) p.fail(key, "expected a, b, c, d or none");
  return it->second;
}

struct HlsCase {
  std::string kind;
  HlsKernelSpec hls;
  double q = 2.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  std::optional<AdmissibleCase> expected;
};

HlsCase parse_hls_case(Params c, const std::string& kind) {
  HlsCase out;
  out.kind = c.string("kind", kind);
  if (out.kind == "hls") {
    out.hls.gamma1 = c.number("gamma1");
    out.hls.gamma2 = c.number("gamma2");
    out.hls.p = c.number("p");
    out.hls.q = c.number("q");
    out.hls.n = c.integer("n", 1);
  } else if (out.kind == "exponent_set") {
    out.q = c.number("q");
    out.theta1 = c.number("theta1");
    out.theta2 = c.number("theta2");
    if (out.theta1 > out.theta2) c.fail("theta1", "must not exceed theta2");
  } else {
    c.fail("kind", "expected hls or exponent_set");
  }
  if (c.has("expected")) out.expected = case_from(c, "expected");
  c.finish();
  return out;
}

Job hls_job(Params& p) {
  std::vector<HlsCase> cases;
  if (p.has("table")) {
    const std::string path = p.path("table").string();
    Params table(load_json(path), path);
    for (auto& c : table.children("hls")) cases.push_back(parse_hls_case(c, "hls"));
    for (auto& c : table.children("exponent_set")) cases.push_back(parse_hls_case(c, "exponent_set"));
    table.finish();
  }
  for (auto& c : p.children("cases")) cases.push_back(parse_hls_case(c, "hls"));
  if (cases.empty()) p.fail("cases", "no cases given (cases or table)");
  Params numeric = p.child("numeric");
  const bool run_numeric = p.has("numeric");
  const int trials = numeric.integer("trials", 20);
  const double tolerance = numeric.number("tolerance", 0.2);
  numeric.finish();
  Job job;
  job.run = [=](const Context& ctx, Report& report) {
    Csv csv(ctx, "index,kind,gamma1,gamma2,p,q,n,theta1,theta2,case,expected");
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const HlsCase& c = cases[i];
      const std::string name = "hls/" + c.kind + "/" + std::to_string(i);
      const Decision d = c.kind == "hls" ? classify_hls(c.hls) : classify_exponent_set(c.q, c.theta1, c.theta2);
      const std::string expected = c.expected ? to_string(*c.expected) : "";
      csv.row(i, c.kind, c.hls.gamma1, c.hls.gamma2, c.hls.p, c.kind == "hls" ? c.hls.q : c.q, c.hls.n, c.theta1,
              c.theta2, to_string(d.via), expected);
      json details = {{"case", to_string(d.via)}, {"reason", d.reason}};
      if (c.kind == "hls") {
        details.update({{"gamma1", c.hls.gamma1}, {"gamma2", c.hls.gamma2}, {"p", c.hls.p}, {"q", c.hls.q},
                        {"n", c.hls.n}});
      } else {
        details.update({{"q", c.q}, {"theta1", c.theta1}, {"theta2", c.theta2}});
      }
      if (c.expected) {
        details["expected"] = expected;
        report.add(flag(name, d.via == *c.expected, details));
      } else {
        report.add(flag(name, d.admitted(), details));
      }
      if (!run_numeric || c.kind != "hls" || !d.admitted()) continue;
      try {
        const HlsCheck h = hls_numeric_check(c.hls, trials, ctx.seed);
        report.add(check(name + "/numeric", 0.0, h.relative_change, tolerance, Rule::kUpper,
                         {{"max_ratio_coarse", h.max_ratio_coarse}, {"max_ratio_fine", h.max_ratio_fine},
                          {"note", h.note}}));
      } catch (const std::invalid_argument& e) {
        report.add(skipped(name + "/numeric", e.what()));
      }
    }
  };
  return job;
}

Job nonlinear_job(Params& p) {
  NonlinearProblem problem;
  try {
    problem.family = family_from_string(p.string("family", "kg"));
  } catch (const std::invalid_argument&) {
    p.fail("family", "expected kg or beam");
  }
  const bool beam = problem.family == Family::kBeam;
  const int n = p.integer("n", beam ? 2 : 1);
  if (n < 1 || n > 2) p.fail("n", "must be 1 or 2");
  problem.kappa = p.number("kappa", 3.0);
  problem.s = p.number("s", 2.0);
  problem.T = p.number("T", beam ? 2.0 : 4.0);
  const int M_t = p.integer("M_t", beam ? 64 : 128);
  if (M_t < 2 || !(problem.T > 0.0)) p.fail("M_t", "need M_t >= 2 and T > 0");
  problem.M_t = static_cast<std::size_t>(M_t);
  problem.data_scale = p.number("data_scale", 1e-2);
  Params data = p.child("data");
  const double width = data.number("width", 1.0);
  const double a0 = data.number("u0_amplitude", 1.0);
  const double a1 = data.number("u1_amplitude", 1.0);
  data.finish();
  Params grid = p.child("grid");
  const GridSpec spec{n, static_cast<std::size_t>(grid.integer("N", beam ? 128 : 512)),
                      grid.number("L", beam ? 32.0 : 64.0)};
  grid.finish();
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    p.fail("grid", e.what());
  }
  const int iterations = p.integer("iterations", 6);
  const double rho_max = p.number("rho_max", 0.5);
  const bool refinement = p.boolean("refinement", !beam);
  const bool threshold = p.has("threshold");
  Params th = p.child("threshold");
  const double th_lo = th.number("lo", 1e-3);
  const double th_hi = th.number("hi", 10.0);
  const int th_steps = th.integer("steps", 12);
  th.finish();
  if (iterations < 2) p.fail("iterations", "need at least 2");
  problem.u0 = gaussian_field(spec, width, a0);
  problem.u1 = gaussian_field(spec, width, a1);

  Job job;
  job.run = [=](const Context& ctx, Report& report) {
    const std::string base = "nonlinear/" + to_string(problem.family) + "/n" + std::to_string(n) + "/kappa" +
                             num(problem.kappa);
    const ConditionReport cond = beam ? beam_exponent_conditions(n, problem.kappa, problem.s)
                                      : kg_exponent_conditions(n, problem.kappa);
    report.add(flag(base + "/conditions", cond.pass,
                    {{"first", cond.first}, {"second", cond.second}, {"sigma", cond.sigma},
                     {"window_ok", cond.window_ok}, {"status", cond.status}}));
    if (!cond.pass) return;
    Csv csv(ctx, "j,increment,ratio,mixed_norm");
    try {
      const PicardResult r = picard_iterate(problem, static_cast<std::size_t>(iterations), false);
      for (std::size_t j = 0; j < r.increments.size(); ++j) {
        csv.row(j + 1, r.increments[j], j < r.ratios.size() ? r.ratios[j] : 0.0,
                j + 1 < r.mixed_norms.size() ? r.mixed_norms[j + 1] : 0.0);
      }
      const double worst = r.ratios.empty() ? kInf : *std::max_element(r.ratios.begin(), r.ratios.end());
      report.add(check(base + "/contraction", rho_max, r.contracting ? worst : kInf, 0.0, Rule::kUpper,
                       {{"increments", r.increments}, {"ratios", r.ratios}, {"data_scale", problem.data_scale},
                        {"contracting", r.contracting}}));
    } catch (const std::overflow_error& e) {
      report.add(check(base + "/contraction", rho_max, kInf, 0.0, Rule::kUpper, {{"error", e.what()}}));
      return;
    }
    if (refinement) {
      const double ratio = time_refinement_ratio(problem);
      report.add(check(base + "/time-refinement", 4.0, ratio, 1.0, Rule::kSharp, {{"M_t", problem.M_t}}));
    }
    if (threshold) {
      const ThresholdTrace t = small_data_threshold(problem, th_lo, th_hi, th_steps);
      json trace = json::array();
      for (const auto& [scale, ok] : t.trace) trace.push_back({scale, ok});
      report.add(flag(base + "/threshold-monotone", t.monotone, {{"threshold", t.threshold}, {"trace", trace}}));
    }
  };
  return job;
}

Job bessel_job(Params& p) {
  const auto orders = p.numbers("orders", {0.0, 1.0, 0.5, 1.5});
  const int points = p.integer("points", 1000);
  const double r_lo = p.number("r_lo", 1e-6);
  const double r_hi = p.number("r_hi", 1e4);
  const double tol = p.number("tol", 1e-10);
  if (points < 2 || !(r_lo > 0.0) || !(r_hi > r_lo)) p.fail("points", "need points >= 2 and 0 < r_lo < r_hi");
  std::vector<BesselOrder> nus;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    try {
      nus.push_back(BesselOrder::from_value(orders[i]));
    } catch (const std::invalid_argument& e) {
      p.fail("orders[" + std::to_string(i) + "]", e.what());
    }
  }
  Job job;
  job.run = [=](const Context& ctx, Report& report) {
    using Big = boost::multiprecision::cpp_bin_float_50;
    Csv csv(ctx, "nu,r,value,reference,abs_error");
    for (const BesselOrder nu : nus) {
      double worst = 0.0;
      double worst_r = r_lo;
      for (int i = 0; i < points; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (points - 1));
        const double value = bessel_j(nu, r);
        const double reference =
            static_cast<double>(boost::math::cyl_bessel_j(Big(nu.twice()) / 2, Big(r)));
        const double err = std::abs(value - reference);
        csv.row(nu.value(), r, value, reference, err);
        if (err > worst) {
          worst = err;
          worst_r = r;
        }
      }
      report.add(check("bessel-selftest/J" + num(nu.value()), 0.0, worst, tol, Rule::kUpper,
                       {{"points", points}, {"worst_r", worst_r}}));
    }
    // d/dr (r^-nu J_nu(r)) = -r^-nu J_{nu+1}(r).
    double worst = 0.0;
    for (const BesselOrder nu : nus) {
      for (int i = 1; i <= 200; ++i) {
        const double r = 0.25 * i;
        const double h = 1e-4 * r;
        const double lhs = (bessel_j_scaled(nu, r + h) - bessel_j_scaled(nu, r - h)) / (2.0 * h);
        const double rhs = -bessel_j_scaled(nu.next(), r) * r;
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
    report.add(check("bessel-selftest/recurrence", 0.0, worst, 1e-6, Rule::kUpper, {{"r_max", 50.0}}));
    // First zero of J_0 by bisection on the bracket [2, 3].
    double a = 2.0;
    double b = 3.0;
    const BesselOrder zero = BesselOrder::from_twice(0);
    for (int i = 0; i < 80; ++i) {
      const double m = 0.5 * (a + b);
      (bessel_j(zero, a) * bessel_j(zero, m) <= 0.0 ? b : a) = m;
    }
    const double reference = boost::math::cyl_bessel_j_zero(0.0, 1);
    report.add(check("bessel-selftest/J0-first-zero", reference, 0.5 * (a + b), 1e-9, Rule::kSharp));
  };
  return job;
}

using Parser = Job (*)(Params&);

const std::map<std::string, Parser>& parsers() {
  static const std::map<std::string, Parser> kParsers = {
      {"hypotheses", hypotheses_job},       {"kernel-decay", kernel_decay_job},
      {"lowfreq-decay", lowfreq_decay_job}, {"group-decay", group_decay_job},
      {"strichartz", strichartz_job},       {"hls", hls_job},
      {"nonlinear", nonlinear_job},         {"bessel-selftest", bessel_job},
  };
  return kParsers;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> kNames = {"hypotheses", "kernel-decay", "lowfreq-decay", "group-decay",
                                                  "strichartz", "hls",          "nonlinear",     "bessel-selftest"};
  return kNames;
}

Job parse_scenario(const std::string& command, const nlohmann::json& params, const std::string& location,
                   const std::filesystem::path& base) {
  const auto it = parsers().find(command);
  if (it == parsers().end()) throw ConfigError(location + ": unknown command '" + command + "'");
  Params p(params, location, base);
  if (p.has("command") && p.string("command", "") != command) {
    p.fail("command", "does not match the subcommand '" + command + "'");
  }
  const std::string label = p.string("label", command);
  Job job = it->second(p);
  p.finish();
  job.command = command;
  job.label = label;
  return job;
}

std::vector<Job> parse_suite(const nlohmann::json& doc, const std::string& location,
                             const std::filesystem::path& base) {
  Params suite(doc, location, base);
  std::vector<Job> jobs;
  std::map<std::string, int> seen;
  for (Params& s : suite.children("scenarios")) {
    const std::string command = s.string("command", "");
    if (command.empty()) s.fail("command", "required");
    Job job = parse_scenario(command, s.raw(), s.location(), base);
    const int count = ++seen[job.label];
    if (count > 1) job.label += "_" + std::to_string(count);
    jobs.push_back(std::move(job));
  }
  suite.finish();
  if (jobs.empty()) throw ConfigError(suite.where("scenarios") + ": no scenarios");
  return jobs;
}

Report run_jobs(const std::vector<Job>& jobs, const Context& context) {
  Report report;
  report.seed = context.seed;
  report.slack = context.slack;
  for (const Job& job : jobs) {
    Context c = context;
    c.label = job.label;
    job.run(c, report);
  }
  return report;
}

}  // namespace dispersive::cli
