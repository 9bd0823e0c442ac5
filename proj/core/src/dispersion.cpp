#include "dispersive/dispersion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dispersive/expression.hpp"

namespace dispersive {

namespace {

DispersionRelation klein_gordon() {
  DispersionRelation rel;
  rel.name = "klein_gordon";
  rel.phi = [](double r) { return std::sqrt(1.0 + r * r); };
  rel.dphi = [](double r) { return r / std::sqrt(1.0 + r * r); };
  rel.d2phi = [](double r) { return 1.0 / std::pow(1.0 + r * r, 1.5); };
  rel.m1 = 1.0;
  rel.alpha1 = -1.0;
  rel.m2 = 2.0;
  rel.alpha2 = 2.0;
  return rel;
}

DispersionRelation beam() {
  DispersionRelation rel;
  rel.name = "beam";
  rel.phi = [](double r) { return std::sqrt(1.0 + r * r * r * r); };
  rel.dphi = [](double r) {
    const double r3 = r * r * r;
    return 2.0 * r3 / std::sqrt(1.0 + r3 * r);
  };
  rel.d2phi = [](double r) {
    const double r2 = r * r;
    const double r4 = r2 * r2;
    return (6.0 * r2 + 2.0 * r4 * r2) / std::pow(1.0 + r4, 1.5);
  };
  rel.m1 = 2.0;
  rel.alpha1 = 2.0;
  rel.m2 = 4.0;
  rel.alpha2 = 4.0;
  return rel;
}

DispersionRelation schrodinger4() {
  DispersionRelation rel;
  rel.name = "schrodinger4";
  rel.phi = [](double r) { return r * r + r * r * r * r; };
  rel.dphi = [](double r) { return 2.0 * r + 4.0 * r * r * r; };
  rel.d2phi = [](double r) { return 2.0 + 12.0 * r * r; };
  rel.m1 = 4.0;
  rel.alpha1 = 4.0;
  rel.m2 = 2.0;
  rel.alpha2 = 2.0;
  return rel;
}

DispersionRelation wave() {
  DispersionRelation rel;
  rel.name = "wave";
  rel.phi = [](double r) { return r; };
  rel.dphi = [](double) { return 1.0; };
  rel.d2phi = [](double) { return 0.0; };
  rel.m1 = 1.0;
  rel.m2 = 1.0;
  return rel;
}

std::string format_order(double m) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, m);
  return std::string(buf, end);
}

double third_derivative(const DispersionRelation& rel, double r) {
  const double h = r * 1e-5;
  return (rel.d2phi(r + h) - rel.d2phi(r - h)) / (2.0 * h);
}

struct HypothesisSpec {
  Hypothesis id;
  bool high;          // r >= 1
  bool curvature;     // second-derivative comparability (H3/H4)
  std::optional<double> order;
};

HypothesisRecord check_one(const DispersionRelation& rel, const HypothesisSpec& spec, double C,
                           std::span<const double> r_grid) {
  HypothesisRecord rec;
  rec.id = spec.id;
  if (!spec.order) {
    rec.declared = false;
    rec.note = "curvature order not declared";
    return rec;
  }
  const double order = *spec.order;

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  bool finite = true;
  std::vector<double> bound_raw;
  for (double r : r_grid) {
    if ((r >= 1.0) != spec.high) continue;
    ++rec.samples;
    double ratio = 0.0;
    if (spec.curvature) {
      ratio = std::abs(rel.d2phi(r)) / std::pow(r, order - 2.0);
    } else {
      ratio = std::abs(rel.dphi(r)) / std::pow(r, order - 1.0);
      const double b2 = std::abs(rel.d2phi(r)) * std::pow(r, 2.0 - order);
      const double b3 = std::abs(third_derivative(rel, r)) * std::pow(r, 3.0 - order);
      bound_raw.push_back(std::max(b2, b3));
      finite = finite && std::isfinite(b2) && std::isfinite(b3);
    }
    finite = finite && std::isfinite(ratio);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }

  if (rec.samples == 0) {
    rec.note = "no samples on this half-line";
    return rec;
  }
  rec.ratio_min = lo;
  rec.ratio_max = hi;
  if (!finite) {
    rec.note = "non-finite derivative sample";
    return rec;
  }
  if (lo <= 0.0) {
    rec.note = spec.curvature ? "second derivative vanishes" : "first derivative vanishes";
    return rec;
  }
  rec.constant = std::sqrt(lo * hi);
  rec.normalized_min = lo / rec.constant;
  rec.normalized_max = hi / rec.constant;
  for (double b : bound_raw) rec.derivative_bound_max = std::max(rec.derivative_bound_max, b / rec.constant);

  rec.pass = rec.normalized_min >= 1.0 / C && rec.normalized_max <= C && rec.derivative_bound_max <= C;
  if (!rec.pass) {
    rec.note = rec.derivative_bound_max > C ? "derivative upper bound exceeds C"
                                            : "comparability ratio drifts beyond C";
  }
  return rec;
}

void check_theta(double theta, double lo, double hi, const char* what) {
  if (!(theta >= lo && theta <= hi)) {
    throw std::invalid_argument(std::string("theta out of range for ") + what + ": need " +
                                format_order(lo) + " <= theta <= " + format_order(hi) +
                                ", got " + format_order(theta));
  }
}

void check_dimension(int n) {
  if (n < 1) throw std::invalid_argument("spatial dimension must be >= 1");
}

ExponentPair predicted(double m, const std::optional<double>& alpha, int n, double theta,
                       Branch branch, const char* curvature_name) {
  check_dimension(n);
  if (branch == Branch::kA) {
    check_theta(theta, 0.0, 0.5 * (n - 1), "branch A");
    return exponents::branch_a(m, n, theta);
  }
  if (!alpha) {
    throw std::invalid_argument(std::string("branch B requires ") + curvature_name +
                                " (curvature order) to be declared");
  }
  check_theta(theta, 0.0, 1.0, "branch B");
  return exponents::branch_b(m, *alpha, n, theta);
}

BestExponents best(double m, const std::optional<double>& alpha, int n) {
  check_dimension(n);
  BestExponents out;
  if (alpha) {
    out.branch = Branch::kB;
    out.theta = 1.0;
    out.exponents = exponents::branch_b(m, *alpha, n, 1.0);
  } else {
    out.branch = Branch::kA;
    out.theta = 0.5 * (n - 1);
    out.exponents = exponents::branch_a(m, n, out.theta);
  }
  return out;
}

}  // namespace

DispersionRelation power_relation(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("power(m) requires m > 0");
  DispersionRelation rel;
  rel.name = "power(" + format_order(m) + ")";
  rel.phi = [m](double r) { return std::pow(r, m); };
  rel.dphi = [m](double r) { return m * std::pow(r, m - 1.0); };
  rel.d2phi = [m](double r) { return m * (m - 1.0) * std::pow(r, m - 2.0); };
  rel.m1 = m;
  rel.m2 = m;
  rel.alpha1 = m;
  rel.alpha2 = m;
  return rel;
}

DispersionRelation builtin(std::string_view name) {
  if (name == "klein_gordon") return klein_gordon();
  if (name == "beam") return beam();
  if (name == "schrodinger4") return schrodinger4();
  if (name == "wave") return wave();
  if (name.starts_with("power(") && name.ends_with(")")) {
    const std::string_view arg = name.substr(6, name.size() - 7);
    double m = 0.0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), m);
    if (ec != std::errc() || ptr != arg.data() + arg.size()) {
      throw std::invalid_argument("malformed power order in '" + std::string(name) + "'");
    }
    return power_relation(m);
  }
  throw std::invalid_argument("unknown dispersion relation '" + std::string(name) +
                              "' (known: klein_gordon, beam, schrodinger4, wave, power(m))");
}

std::vector<std::string> builtin_names() {
  return {"klein_gordon", "beam", "schrodinger4", "wave", "power(m)"};
}

DispersionRelation custom_relation(std::string name, std::string_view phi, std::string_view dphi,
                                   std::string_view d2phi, double m1, double m2,
                                   std::optional<double> alpha1, std::optional<double> alpha2) {
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw std::invalid_argument("m1 and m2 must be positive");
  DispersionRelation rel;
  rel.name = std::move(name);
  rel.phi = Expression::parse(phi);
  rel.dphi = Expression::parse(dphi);
  rel.d2phi = Expression::parse(d2phi);
  rel.m1 = m1;
  rel.m2 = m2;
  rel.alpha1 = alpha1;
  rel.alpha2 = alpha2;
  return rel;
}

std::string_view to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::kH1: return "H1";
    case Hypothesis::kH2: return "H2";
    case Hypothesis::kH3: return "H3";
    case Hypothesis::kH4: return "H4";
  }
  return "?";
}

std::vector<double> dyadic_grid(int j_lo, int j_hi, int per_octave) {
  if (j_hi < j_lo || per_octave < 1) throw std::invalid_argument("degenerate dyadic grid");
  std::vector<double> grid;
  for (int j = j_lo; j <= j_hi; ++j) {
    for (int i = 0; i < per_octave; ++i) {
      if (j == j_hi && i > 0) break;
      grid.push_back(std::exp2(j + static_cast<double>(i) / per_octave));
    }
  }
  return grid;
}

HypothesisReport verify_hypotheses(const DispersionRelation& rel, double comparability_constant,
                                   std::span<const double> r_grid) {
  if (!(comparability_constant > 1.0)) {
    throw std::invalid_argument("comparability constant must exceed 1");
  }
  for (double r : r_grid) {
    if (!(r > 0.0)) {
      throw std::invalid_argument("hypothesis grid must avoid r = 0 (phi is only smooth away from the origin)");
    }
  }

  HypothesisReport report;
  report.relation = rel.name;
  report.comparability_constant = comparability_constant;
  const HypothesisSpec specs[] = {
      {Hypothesis::kH1, true, false, rel.m1},
      {Hypothesis::kH2, false, false, rel.m2},
      {Hypothesis::kH3, true, true, rel.alpha1},
      {Hypothesis::kH4, false, true, rel.alpha2},
  };
  for (const auto& spec : specs) {
    report.records[static_cast<std::size_t>(spec.id)] =
        check_one(rel, spec, comparability_constant, r_grid);
  }

  constexpr double kTol = 1e-12;
  if (report[Hypothesis::kH1].pass && report[Hypothesis::kH3].pass && *rel.alpha1 > rel.m1 + kTol) {
    report.metadata_consistent = false;
  }
  if (report[Hypothesis::kH2].pass && report[Hypothesis::kH4].pass && *rel.alpha2 < rel.m2 - kTol) {
    report.metadata_consistent = false;
  }
  return report;
}

namespace exponents {

ExponentPair branch_a(double m, int n, double theta) {
  return {-theta, n - m * theta};
}

ExponentPair branch_b(double m, double alpha, int n, double theta) {
  const double spread = n - 1 + theta;
  return {-0.5 * spread, n - 0.5 * m * spread - 0.5 * theta * (alpha - m)};
}

}  // namespace exponents

ExponentPair predicted_high_exponents(const DispersionRelation& rel, int n, double theta,
                                      Branch branch) {
  return predicted(rel.m1, rel.alpha1, n, theta, branch, "alpha1");
}

ExponentPair predicted_low_exponents(const DispersionRelation& rel, int n, double theta,
                                     Branch branch) {
  return predicted(rel.m2, rel.alpha2, n, theta, branch, "alpha2");
}

BestExponents best_high_exponents(const DispersionRelation& rel, int n) {
  return best(rel.m1, rel.alpha1, n);
}

BestExponents best_low_exponents(const DispersionRelation& rel, int n) {
  return best(rel.m2, rel.alpha2, n);
}

double predicted_lowfreq_aggregate(const DispersionRelation& rel, int n) {
  check_dimension(n);
  const double volume = n / rel.m2;
  const bool sharp = rel.alpha2 && std::abs(*rel.alpha2 - rel.m2) <= 1e-12;
  return std::min(volume, sharp ? 0.5 * n : 0.5 * (n - 1));
}

}  // namespace dispersive
