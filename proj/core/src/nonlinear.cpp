#include "dispersive/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dispersive {

namespace {

using Complex = std::complex<double>;
using Slice = std::vector<Complex>;

std::string status_of(bool pass, double second) {
  if (std::abs(second - 1.0) <= 1e-12) return "critical";
  return pass ? "pass" : "fail";
}

void check_problem(const NonlinearProblem& p) {
  p.u0.require_same_grid(p.u1);
  if (!(p.T > 0.0)) throw std::invalid_argument("nonlinear problem needs T > 0");
  if (p.M_t < 2) throw std::invalid_argument("nonlinear problem needs M_t >= 2");
  const int n = p.u0.spec().n;
  const ConditionReport r = p.family == Family::kKleinGordon ? kg_exponent_conditions(n, p.kappa)
                                                             : beam_exponent_conditions(n, p.kappa, p.s);
  if (!r.pass) {
    throw std::invalid_argument("exponent conditions fail for " + to_string(p.family) + ", n = " +
                                std::to_string(n) + ", kappa = " + std::to_string(p.kappa));
  }
}

std::vector<double> node_times(const NonlinearProblem& p) {
  std::vector<double> t(p.M_t + 1);
  for (std::size_t j = 0; j <= p.M_t; ++j) t[j] = p.T * static_cast<double>(j) / static_cast<double>(p.M_t);
  return t;
}

std::vector<double> omegas(const NonlinearProblem& p) {
  const std::vector<double> norms = p.u0.spec().frequency_norms();
  std::vector<double> w(norms.size());
  const GroupKind kind = group_of(p.family);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = group_omega(kind, norms[i]);
  return w;
}

double slice_l2(const GridSpec& spec, const Slice& a, const Slice* b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::norm(b == nullptr ? a[i] : a[i] - (*b)[i]);
  return std::sqrt(std::pow(spec.spacing(), spec.n) * sum);
}

}  // namespace

double critical_power_kg(int n) {
  if (n < 1) throw std::invalid_argument("critical power needs n >= 1");
  const double d = n;
  return (2.0 - d + std::sqrt(d * d + 12.0 * d + 4.0)) / (2.0 * d);
}

double critical_power_beam(int n) {
  if (n < 1) throw std::invalid_argument("critical power needs n >= 1");
  const double d = n;
  return (4.0 - d + std::sqrt(d * d + 24.0 * d + 16.0)) / (2.0 * d);
}

std::string to_string(Family f) { return f == Family::kKleinGordon ? "kg" : "beam"; }

Family family_from_string(const std::string& name) {
  if (name == "kg" || name == "klein_gordon") return Family::kKleinGordon;
  if (name == "beam") return Family::kBeam;
  throw std::invalid_argument("unknown family '" + name + "' (expected kg or beam)");
}

GroupKind group_of(Family f) { return f == Family::kKleinGordon ? GroupKind::kKleinGordon : GroupKind::kBeam; }

ConditionReport kg_exponent_conditions(int n, double kappa) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  ConditionReport r;
  r.family = Family::kKleinGordon;
  r.n = n;
  r.kappa = kappa;
  const double k = kappa;
  r.first = (1.0 + k) * k * (n - 2) / (2.0 * (2.0 + k));
  r.second = (1.0 + k) * k * n / (2.0 * (2.0 + k));
  r.sigma = k * (n + 2) / (2.0 * (2.0 + k));
  r.first_ok = r.first < 1.0;
  r.second_ok = r.second > 1.0;
  r.sigma_ok = r.sigma < 1.0;
  r.window_ok = critical_power_kg(n) < k && k < 4.0 / n;
  r.pass = r.first_ok && r.second_ok && r.sigma_ok;
  r.status = status_of(r.pass, r.second);
  return r;
}

ConditionReport beam_exponent_conditions(int n, double kappa, double s) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  ConditionReport r;
  r.family = Family::kBeam;
  r.n = n;
  r.kappa = kappa;
  r.s = s;
  const double k = kappa;
  r.first = (1.0 + k) * (n * k / (2.0 * (2.0 + k)) - 0.5 * s);
  r.second = (1.0 + k) * k * n / (4.0 * (2.0 + k));
  r.sigma = n * k / (2.0 + k) - 2.0 / (1.0 + k);
  r.s2 = s - n * k / (2.0 * (2.0 + k));
  r.first_ok = r.first < 1.0;
  r.second_ok = r.second > 1.0;
  r.sigma_ok = r.sigma < s && s <= 2.0;
  r.window_ok = critical_power_beam(n) < k && k < 8.0 / n && s <= 2.0;
  r.pass = r.first_ok && r.second_ok && r.sigma_ok && k < 8.0 / n;
  r.status = status_of(r.pass, r.second);
  return r;
}

bool kg_conditions_match_window(int n, const std::vector<double>& kappas) {
  for (double k : kappas) {
    const ConditionReport r = kg_exponent_conditions(n, k);
    if (r.pass != r.window_ok) return false;
  }
  return true;
}

SpaceTimeField linear_solution(const NonlinearProblem& p) {
  p.u0.require_same_grid(p.u1);
  const GridSpec& spec = p.u0.spec();
  const Slice h0 = p.u0.spectrum();
  const Slice h1 = p.u1.spectrum();
  const std::vector<double> w = omegas(p);
  SpaceTimeField out{spec, node_times(p), {}};
  out.slices.reserve(out.times.size());
  for (double t : out.times) {
    Slice hat(h0.size());
    for (std::size_t i = 0; i < hat.size(); ++i) {
      hat[i] = p.data_scale * (std::cos(t * w[i]) * h0[i] + std::sin(t * w[i]) / w[i] * h1[i]);
    }
    out.slices.push_back(from_spectrum(spec, std::move(hat)));
  }
  return out;
}

SpaceTimeField duhamel_map(const NonlinearProblem& p, const SpaceTimeField& u) {
  const SpaceTimeField lin = linear_solution(p);
  if (u.slices.size() != lin.slices.size() || !(u.spec == lin.spec)) {
    throw std::invalid_argument("iterate does not match the problem's space-time grid");
  }
  const GridSpec& spec = lin.spec;
  const std::vector<double> w = omegas(p);
  const double dt = p.T / static_cast<double>(p.M_t);
  const double power = 1.0 + p.kappa;

  // sin((t - tau) w) = sin(t w) cos(tau w) - cos(t w) sin(tau w): the
  // trapezoid sums of cos(tau w) F and sin(tau w) F accumulate in t.
  Slice cum_c(spec.size());
  Slice cum_s(spec.size());
  Slice prev_c(spec.size());
  Slice prev_s(spec.size());
  SpaceTimeField out{spec, lin.times, {}};
  out.slices.reserve(lin.times.size());
  for (std::size_t j = 0; j < lin.times.size(); ++j) {
    const double tau = lin.times[j];
    Slice f(spec.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double v = std::pow(std::abs(u.slices[j][i]), power);
      if (!std::isfinite(v)) throw std::overflow_error("|u|^(1+kappa) overflowed: data is not small");
      f[i] = v;
    }
    const Slice fh = to_spectrum(spec, std::move(f));
    Slice cur_c(spec.size());
    Slice cur_s(spec.size());
    for (std::size_t i = 0; i < fh.size(); ++i) {
      cur_c[i] = std::cos(tau * w[i]) * fh[i];
      cur_s[i] = std::sin(tau * w[i]) * fh[i];
    }
    if (j > 0) {
      for (std::size_t i = 0; i < fh.size(); ++i) {
        cum_c[i] += 0.5 * dt * (prev_c[i] + cur_c[i]);
        cum_s[i] += 0.5 * dt * (prev_s[i] + cur_s[i]);
      }
    }
    prev_c = std::move(cur_c);
    prev_s = std::move(cur_s);

    Slice duhamel(spec.size());
    for (std::size_t i = 0; i < duhamel.size(); ++i) {
      duhamel[i] = (std::sin(tau * w[i]) * cum_c[i] - std::cos(tau * w[i]) * cum_s[i]) / w[i];
    }
    Slice values = from_spectrum(spec, std::move(duhamel));
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = lin.slices[j][i] - values[i];
    out.slices.push_back(std::move(values));
  }
  return out;
}

double sup_l2_distance(const SpaceTimeField& a, const SpaceTimeField& b) {
  if (a.slices.size() != b.slices.size() || !(a.spec == b.spec)) {
    throw std::invalid_argument("space-time fields do not match");
  }
  double out = 0.0;
  for (std::size_t j = 0; j < a.slices.size(); ++j) out = std::max(out, slice_l2(a.spec, a.slices[j], &b.slices[j]));
  return out;
}

double mixed_norm_lx(const SpaceTimeField& u, double kappa) {
  std::vector<double> values;
  values.reserve(u.slices.size());
  for (const Slice& s : u.slices) values.push_back(GridField(u.spec, s).lp_norm(2.0 + kappa));
  return time_norm(u.times, values, 1.0 + kappa);
}

PicardResult picard_iterate(const NonlinearProblem& p, std::size_t max_iters, bool keep_iterates) {
  check_problem(p);
  PicardResult out;
  SpaceTimeField current = linear_solution(p);
  out.mixed_norms.push_back(mixed_norm_lx(current, p.kappa));
  if (keep_iterates) out.iterates.push_back(current);
  int streak = 0;
  for (std::size_t it = 0; it < max_iters; ++it) {
    SpaceTimeField next = duhamel_map(p, current);
    const double d = sup_l2_distance(next, current);
    if (!out.increments.empty()) {
      const double prev = out.increments.back();
      const double rho = prev == 0.0 ? 0.0 : d / prev;
      out.ratios.push_back(rho);
      streak = rho >= 1.0 ? streak + 1 : 0;
    }
    out.increments.push_back(d);
    out.mixed_norms.push_back(mixed_norm_lx(next, p.kappa));
    current = std::move(next);
    if (keep_iterates) out.iterates.push_back(current);
    if (streak >= 3) {
      out.contracting = false;
      break;
    }
  }
  if (!keep_iterates) out.iterates.push_back(std::move(current));
  return out;
}

bool contraction_holds(const NonlinearProblem& p) {
  try {
    const PicardResult r = picard_iterate(p, 6, false);
    if (!r.contracting) return false;
    return std::all_of(r.ratios.begin(), r.ratios.end(), [](double rho) { return rho < 0.5; });
  } catch (const std::overflow_error&) {
    return false;
  }
}

ThresholdTrace small_data_threshold(NonlinearProblem p, double lo, double hi, int steps) {
  if (!(lo > 0.0) || !(hi > lo) || steps < 0) throw std::invalid_argument("threshold search needs 0 < lo < hi");
  ThresholdTrace out;
  auto test = [&](double scale) {
    p.data_scale = scale;
    const bool ok = contraction_holds(p);
    out.trace.emplace_back(scale, ok);
    return ok;
  };
  if (test(hi)) {
    out.threshold = hi;
  } else if (!test(lo)) {
    out.threshold = 0.0;
  } else {
    double good = lo;
    double bad = hi;
    for (int i = 0; i < steps; ++i) {
      const double mid = std::sqrt(good * bad);
      if (test(mid)) {
        good = mid;
      } else {
        bad = mid;
      }
    }
    out.threshold = good;
  }
  for (const auto& [scale, ok] : out.trace) {
    if (!ok) continue;
    for (const auto& [other, other_ok] : out.trace) {
      if (other < scale && !other_ok) out.monotone = false;
    }
  }
  return out;
}

double time_refinement_ratio(NonlinearProblem p, std::size_t iterations) {
  std::vector<SpaceTimeField> solutions;
  const std::size_t base = p.M_t;
  for (std::size_t level = 0; level < 3; ++level) {
    p.M_t = base << level;
    solutions.push_back(picard_iterate(p, iterations, false).iterates.back());
  }
  auto coarse_distance = [&](const SpaceTimeField& a, std::size_t stride_a, const SpaceTimeField& b,
                             std::size_t stride_b) {
    double out = 0.0;
    for (std::size_t j = 0; j <= base; ++j) {
      out = std::max(out, slice_l2(a.spec, a.slices[j * stride_a], &b.slices[j * stride_b]));
    }
    return out;
  };
  const double e1 = coarse_distance(solutions[0], 1, solutions[1], 2);
  const double e2 = coarse_distance(solutions[1], 2, solutions[2], 4);
  if (e2 == 0.0) throw std::runtime_error("time refinement produced identical solutions");
  return e1 / e2;
}

}  // namespace dispersive
