#include "dispersive/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dispersive/special.hpp"

namespace dispersive {

namespace {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double cell_volume(const GridSpec& spec) { return std::pow(spec.spacing(), spec.n); }

double lp_of_values(const GridSpec& spec, const std::vector<Complex>& values, double p) {
  return GridField(spec, values).lp_norm(p);
}

void check_exponent(double p, const char* what) {
  if (!(p >= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [1, inf]");
}

double lebesgue_of_multiplied(const GridSpec& spec, const Spectrum& hat, const std::vector<double>& norms,
                              const std::function<double(double)>& symbol, double p, bool* nonzero) {
  Spectrum shell(hat.size());
  bool any = false;
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const double m = symbol(norms[i]);
    shell[i] = m * hat[i];
    any = any || (m != 0.0 && hat[i] != Complex{});
  }
  if (nonzero != nullptr) *nonzero = any;
  if (!any) return 0.0;
  return lp_of_values(spec, from_spectrum(spec, std::move(shell)), p);
}

double besov_from_spectrum(const GridSpec& spec, const Spectrum& hat, const Besov& b,
                           const std::vector<double>& norms) {
  check_exponent(b.p, "Besov p");
  check_exponent(b.q, "Besov q");
  std::vector<double> terms;
  terms.push_back(lebesgue_of_multiplied(spec, hat, norms, BumpPair::Phi, b.p, nullptr));
  const int top = max_shell(spec);
  for (int k = 1; k <= top; ++k) {
    const double shell = lebesgue_of_multiplied(
        spec, hat, norms, [k](double xi) { return BumpPair::psi(std::ldexp(xi, -k)); }, b.p, nullptr);
    terms.push_back(std::exp2(k * b.s) * shell);
  }
  if (std::isinf(b.q)) return *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double v : terms) sum += std::pow(v, b.q);
  return std::pow(sum, 1.0 / b.q);
}

double sobolev_from_spectrum(const GridSpec& spec, const Spectrum& hat, double s) {
  const std::vector<double> norms = spec.frequency_norms();
  double sum = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) {
    sum += std::pow(1.0 + norms[i] * norms[i], s) * std::norm(hat[i]);
  }
  return std::sqrt(cell_volume(spec) * sum / static_cast<double>(spec.size()));
}

double norm_from_spectrum(const GridSpec& spec, const Spectrum& hat, const NormSpec& ns) {
  if (const auto* leb = std::get_if<Lebesgue>(&ns)) {
    check_exponent(leb->p, "Lebesgue p");
    return lp_of_values(spec, from_spectrum(spec, hat), leb->p);
  }
  if (const auto* sob = std::get_if<Sobolev>(&ns)) return sobolev_from_spectrum(spec, hat, sob->s);
  return besov_from_spectrum(spec, hat, std::get<Besov>(ns), spec.frequency_norms());
}

Spectrum multiply(const GridSpec& spec, const Spectrum& hat, const std::function<Complex(double)>& m) {
  const std::vector<double> norms = spec.frequency_norms();
  Spectrum out(hat.size());
  for (std::size_t i = 0; i < hat.size(); ++i) out[i] = m(norms[i]) * hat[i];
  return out;
}

Complex group_symbol(GroupKind kind, double xi, double t, const DispersionRelation& rel) {
  if (kind == GroupKind::kFourth) return std::polar(1.0, t * rel.phi(xi));
  const double w = group_omega(kind, xi);
  return std::sin(t * w) / w;
}

double boundary_fraction(const GridField& field) {
  const GridSpec& spec = field.spec();
  const double edge = 0.5 * spec.L - spec.L / 16.0;
  double outer = 0.0;
  double total = 0.0;
  const auto& v = field.values();
  if (spec.n == 1) {
    for (std::size_t j = 0; j < spec.N; ++j) {
      const double w = std::norm(v[j]);
      total += w;
      if (std::abs(spec.coordinate(j)) > edge) outer += w;
    }
  } else {
    for (std::size_t a = 0; a < spec.N; ++a) {
      const bool row_out = std::abs(spec.coordinate(a)) > edge;
      for (std::size_t b = 0; b < spec.N; ++b) {
        const double w = std::norm(v[a * spec.N + b]);
        total += w;
        if (row_out || std::abs(spec.coordinate(b)) > edge) outer += w;
      }
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------

GridField band_limited_field(const GridSpec& spec, const std::function<double(double)>& symbol) {
  spec.validate();
  const std::vector<double> norms = spec.frequency_norms();
  const double scale = std::pow(static_cast<double>(spec.N) / spec.L, spec.n);
  Spectrum hat(spec.size());
  for (std::size_t i = 0; i < hat.size(); ++i) {
    std::size_t parity = i % spec.N;
    if (spec.n == 2) parity += i / spec.N;
    const double sign = parity % 2 == 0 ? 1.0 : -1.0;
    hat[i] = sign * scale * symbol(norms[i]);
  }
  return GridField::from_spectrum(spec, std::move(hat));
}

GridField gaussian_field(const GridSpec& spec, double width, double amplitude) {
  if (!(width > 0.0)) throw std::invalid_argument("Gaussian width must be positive");
  const double inv = 1.0 / (2.0 * width * width);
  return GridField::sample(spec, [&](double x, double y) {
    return Complex(amplitude * std::exp(-(x * x + y * y) * inv), 0.0);
  });
}

double required_box_length(const DispersionRelation& rel, double xi_max, double t_max) {
  if (!(xi_max > 0.0) || !(t_max >= 0.0)) throw std::invalid_argument("box length needs xi_max > 0, t_max >= 0");
  double peak = 0.0;
  constexpr int kSamples = 513;
  for (int i = 1; i < kSamples; ++i) peak = std::max(peak, std::abs(rel.dphi(xi_max * i / (kSamples - 1))));
  return 8.0 * (1.0 + t_max * peak);
}

GridField evolve(const DispersionRelation& rel, const GridField& field, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("evolve needs finite t");
  if (t == 0.0) {
    for (double xi : field.spec().frequency_norms()) {
      if (!std::isfinite(rel.phi(xi))) throw std::domain_error("phase is not finite on the grid");
    }
    return field;
  }
  return field.apply_radial_multiplier([&](double xi) { return std::polar(1.0, t * rel.phi(xi)); });
}

std::string_view to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::kKleinGordon: return "kg";
    case GroupKind::kBeam: return "beam";
    case GroupKind::kFourth: return "fourth";
  }
  return "?";
}

GroupKind group_kind_from_string(std::string_view name) {
  if (name == "kg" || name == "klein_gordon") return GroupKind::kKleinGordon;
  if (name == "beam") return GroupKind::kBeam;
  if (name == "fourth" || name == "schrodinger4") return GroupKind::kFourth;
  throw std::invalid_argument("unknown group '" + std::string(name) + "' (expected kg, beam or fourth)");
}

double group_omega(GroupKind kind, double xi) {
  switch (kind) {
    case GroupKind::kKleinGordon: return std::sqrt(1.0 + xi * xi);
    case GroupKind::kBeam: return std::sqrt(1.0 + xi * xi * xi * xi);
    case GroupKind::kFourth: break;
  }
  throw std::invalid_argument("the fourth-order Schroedinger group has no second-order frequency");
}

DispersionRelation group_relation(GroupKind kind) {
  switch (kind) {
    case GroupKind::kKleinGordon: return builtin("klein_gordon");
    case GroupKind::kBeam: return builtin("beam");
    case GroupKind::kFourth: return builtin("schrodinger4");
  }
  throw std::invalid_argument("unknown group");
}

GroupState second_order_state(GroupKind kind, const GridField& u0, const GridField& u1, double t) {
  u0.require_same_grid(u1);
  group_omega(kind, 0.0);
  if (t == 0.0) return {u0, u1};
  const GridSpec& spec = u0.spec();
  const Spectrum h0 = u0.spectrum();
  const Spectrum h1 = u1.spectrum();
  const std::vector<double> norms = spec.frequency_norms();
  Spectrum u(h0.size());
  Spectrum ut(h0.size());
  for (std::size_t i = 0; i < h0.size(); ++i) {
    const double w = group_omega(kind, norms[i]);
    const double c = std::cos(t * w);
    const double s = std::sin(t * w);
    u[i] = c * h0[i] + (s / w) * h1[i];
    ut[i] = -w * s * h0[i] + c * h1[i];
  }
  return GroupState{GridField::from_spectrum(spec, std::move(u)), GridField::from_spectrum(spec, std::move(ut))};
}

double group_energy(GroupKind kind, const GroupState& state) {
  const GridSpec& spec = state.u.spec();
  const Spectrum hu = state.u.spectrum();
  const Spectrum hv = state.ut.spectrum();
  const std::vector<double> norms = spec.frequency_norms();
  double sum = 0.0;
  for (std::size_t i = 0; i < hu.size(); ++i) {
    const double w = group_omega(kind, norms[i]);
    sum += w * w * std::norm(hu[i]) + std::norm(hv[i]);
  }
  return cell_volume(spec) * sum / static_cast<double>(spec.size());
}

GridField kg_group(const GridField& u0, const GridField& u1, double t) {
  return second_order_state(GroupKind::kKleinGordon, u0, u1, t).u;
}

GridField beam_group(const GridField& u0, const GridField& u1, double t) {
  return second_order_state(GroupKind::kBeam, u0, u1, t).u;
}

GridField apply_group(GroupKind kind, const GridField& g, double t) {
  const DispersionRelation rel = group_relation(kind);
  return g.apply_radial_multiplier([&](double xi) { return group_symbol(kind, xi, t, rel); });
}

GridField lp_project(const GridField& field, int k) {
  return field.apply_radial_multiplier([k](double xi) { return Complex(BumpPair::psi(std::ldexp(xi, -k)), 0.0); });
}

GridField low_project(const GridField& field) {
  return field.apply_radial_multiplier([](double xi) { return Complex(BumpPair::Phi(xi), 0.0); });
}

int max_shell(const GridSpec& spec) {
  const double top = spec.nyquist() * std::sqrt(static_cast<double>(spec.n));
  int k = 0;
  while (std::ldexp(1.0, k) < top) ++k;
  return k;
}

double norm(const GridField& field, const NormSpec& spec) {
  if (const auto* leb = std::get_if<Lebesgue>(&spec)) {
    check_exponent(leb->p, "Lebesgue p");
    return field.lp_norm(leb->p);
  }
  return norm_from_spectrum(field.spec(), field.spectrum(), spec);
}

double norm_of_spectrum(const GridSpec& grid, const Spectrum& spectrum, const NormSpec& spec) {
  grid.validate();
  if (spectrum.size() != grid.size()) throw std::invalid_argument("spectrum size does not match grid");
  return norm_from_spectrum(grid, spectrum, spec);
}

double time_norm(std::span<const double> times, std::span<const double> values, double q) {
  check_exponent(q, "time exponent q");
  if (times.size() != values.size() || times.empty()) throw std::invalid_argument("time norm needs matching samples");
  if (std::isinf(q)) return *std::max_element(values.begin(), values.end());
  if (times.size() < 2) throw std::invalid_argument("finite-q time norm needs at least two samples");
  double sum = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double dt = times[i] - times[i - 1];
    if (!(dt > 0.0)) throw std::invalid_argument("time samples must be increasing");
    sum += 0.5 * dt * (std::pow(values[i - 1], q) + std::pow(values[i], q));
  }
  return std::pow(sum, 1.0 / q);
}

double mixed_norm(std::span<const TimeSample> samples, double q, const NormSpec& spec) {
  std::vector<double> times;
  std::vector<double> values;
  for (const TimeSample& s : samples) {
    times.push_back(s.t);
    values.push_back(norm(s.field, spec));
  }
  return time_norm(times, values, q);
}

double dual_exponent(double p) {
  check_exponent(p, "exponent");
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInf;
  return p / (p - 1.0);
}

double predicted_group_exponent(const GroupDecayConfig& c, int n) {
  if (!(c.p >= 2.0)) throw std::invalid_argument("group decay needs 2 <= p <= inf");
  const double delta = 0.5 - (std::isinf(c.p) ? 0.0 : 1.0 / c.p);
  switch (c.group) {
    case GroupKind::kKleinGordon:
      if (c.theta < 0.0 || c.theta > 1.0) throw std::invalid_argument("violated: 0 <= theta <= 1");
      if ((n + 1 + c.theta) * delta > 1.0 + c.s_prime - c.s + 1e-12) {
        throw std::invalid_argument("violated: (n+1+theta) delta <= 1 + s' - s");
      }
      return -(n - 1 + c.theta) * delta;
    case GroupKind::kBeam:
      if (2.0 + c.s_prime - c.s < 0.0) throw std::invalid_argument("violated: 0 <= 2 + s' - s");
      return -0.5 * n * delta;
    case GroupKind::kFourth:
      if (c.s_prime - c.s < -2.0 * n * delta) throw std::invalid_argument("violated: -2 n delta <= s' - s");
      return -n * delta;
  }
  throw std::invalid_argument("unknown group");
}

GroupDecayResult group_decay_check(const GroupDecayConfig& config, const GridField& data) {
  const GridSpec& spec = data.spec();
  const double predicted = predicted_group_exponent(config, spec.n);
  if (config.window_samples < 1 || !(config.window_length >= 0.0)) {
    throw std::invalid_argument("group decay window needs at least one sample and a non-negative length");
  }
  const DispersionRelation rel = group_relation(config.group);
  const Spectrum hat = data.spectrum();
  const std::vector<double> norms = spec.frequency_norms();

  GroupDecayResult result;
  result.data_norm = norm_from_spectrum(spec, hat, Besov{config.s_prime, dual_exponent(config.p), config.q});
  if (!(result.data_norm > 0.0)) throw std::invalid_argument("group decay needs non-zero data");

  auto evolved_at = [&](double t) {
    Spectrum out(hat.size());
    for (std::size_t i = 0; i < hat.size(); ++i) out[i] = group_symbol(config.group, norms[i], t, rel) * hat[i];
    return out;
  };

  std::vector<DecaySample> samples;
  for (double t : config.times) {
    double best = 0.0;
    for (int j = 0; j < config.window_samples; ++j) {
      const double tau = t + config.window_length * j / config.window_samples;
      best = std::max(best, besov_from_spectrum(spec, evolved_at(tau), Besov{config.s, config.p, config.q}, norms));
    }
    samples.push_back({t, best / result.data_norm});
  }
  if (!config.times.empty()) {
    result.boundary_fraction = boundary_fraction(GridField::from_spectrum(spec, evolved_at(config.times.back())));
  }
  result.series = make_decay_series(std::move(samples), predicted, config.slack, config.sharp);
  return result;
}

EnvelopeFit fit_envelope(std::span<const double> times, std::span<const double> ratios, double beta) {
  if (times.size() != ratios.size() || times.size() < 2) throw std::invalid_argument("envelope fit needs >= 2 samples");
  EnvelopeFit fit;
  fit.times.assign(times.begin(), times.end());
  fit.ratios.assign(ratios.begin(), ratios.end());
  fit.beta = beta;
  double mean = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !(ratios[i] > 0.0)) throw std::invalid_argument("envelope fit needs positive samples");
    mean += std::log(ratios[i]) - beta * std::log(times[i]);
  }
  mean /= static_cast<double>(times.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double d = std::log(ratios[i]) - beta * std::log(times[i]) - mean;
    ss += d * d;
  }
  fit.constant = std::exp(mean);
  fit.residual = std::sqrt(ss / static_cast<double>(times.size()));
  fit.free_slope = fit_power_law(times, ratios).slope;
  return fit;
}

EnvelopeFit beam_small_time_check(const GridSpec& spec, double q, std::span<const double> times,
                                  std::span<const double> widths) {
  if (!(q >= 2.0) || std::isinf(q)) throw std::invalid_argument("small-time check needs 2 <= q < inf");
  if (widths.empty()) throw std::invalid_argument("small-time check needs at least one width");
  const double q_dual = dual_exponent(q);
  std::vector<Spectrum> spectra;
  std::vector<double> data_norms;
  for (double w : widths) {
    const GridField u1 = gaussian_field(spec, w);
    data_norms.push_back(u1.lp_norm(q_dual));
    spectra.push_back(u1.spectrum());
  }
  std::vector<double> ratios;
  for (double t : times) {
    double best = 0.0;
    for (std::size_t i = 0; i < widths.size(); ++i) {
      Spectrum h = multiply(spec, spectra[i], [&](double xi) {
        const double w = group_omega(GroupKind::kBeam, xi);
        return Complex(std::sin(t * w) / w, 0.0);
      });
      const double out = lp_of_values(spec, from_spectrum(spec, std::move(h)), q);
      best = std::max(best, out / data_norms[i]);
    }
    ratios.push_back(best);
  }
  const double beta = 1.0 + spec.n / q - 0.5 * spec.n;
  return fit_envelope(times, ratios, beta);
}

DecaySeries beam_lq_decay_check(const GridSpec& spec, double q, double width, std::span<const double> times,
                                double slack, int window_samples, double window_length) {
  if (!(q >= 2.0) || std::isinf(q)) throw std::invalid_argument("L^q decay check needs 2 <= q < inf");
  if (window_samples < 1 || !(window_length >= 0.0)) {
    throw std::invalid_argument("decay window needs at least one sample and a non-negative length");
  }
  const GridField u1 = gaussian_field(spec, width);
  const double data_norm = u1.lp_norm(dual_exponent(q));
  const Spectrum hat = u1.spectrum();
  std::vector<DecaySample> samples;
  for (double t : times) {
    double peak = 0.0;
    for (int j = 0; j < window_samples; ++j) {
      const double tau = t + window_length * j / window_samples;
      Spectrum h = multiply(spec, hat, [&](double xi) {
        const double w = group_omega(GroupKind::kBeam, xi);
        return Complex(std::sin(tau * w) / w, 0.0);
      });
      peak = std::max(peak, lp_of_values(spec, from_spectrum(spec, std::move(h)), q) / data_norm);
    }
    samples.push_back({t, peak});
  }
  const double predicted = spec.n / (2.0 * q) - spec.n / 4.0;
  return make_decay_series(std::move(samples), predicted, slack, false);
}

}  // namespace dispersive
