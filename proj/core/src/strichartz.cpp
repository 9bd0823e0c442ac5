#include "dispersive/strichartz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dispersive/fft.hpp"
#include "dispersive/propagator.hpp"

namespace dispersive {

namespace {

constexpr double kEps = 1e-12;

bool close(double a, double b) { return std::abs(a - b) <= kEps * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

double reciprocal(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Antiderivative of the two-piece kernel on [0, y].
double kernel_primitive(const HlsKernelSpec& s, double y) {
  if (y <= 1.0) return std::pow(y, 1.0 - s.gamma1) / (1.0 - s.gamma1);
  const double inner = 1.0 / (1.0 - s.gamma1);
  if (s.gamma2 == 1.0) return inner + std::log(y);
  return inner + (std::pow(y, 1.0 - s.gamma2) - 1.0) / (1.0 - s.gamma2);
}

double kernel_cell_average(const HlsKernelSpec& s, double a, double b) {
  if (a >= 0.0) return (kernel_primitive(s, b) - kernel_primitive(s, a)) / (b - a);
  if (b <= 0.0) return (kernel_primitive(s, -a) - kernel_primitive(s, -b)) / (b - a);
  return (kernel_primitive(s, b) + kernel_primitive(s, -a)) / (b - a);
}

double discrete_lp(std::span<const double> v, double h, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double sum = 0.0;
  for (double x : v) sum += std::pow(std::abs(x), p);
  return std::pow(h * sum, 1.0 / p);
}

std::vector<double> random_bumps(std::mt19937_64& rng, double h, double half_width) {
  std::normal_distribution<double> amp(0.0, 1.0);
  std::uniform_real_distribution<double> centre(-0.25 * half_width, 0.25 * half_width);
  std::uniform_real_distribution<double> width(0.5, 2.0);
  std::array<double, 9> params{};
  for (std::size_t i = 0; i < params.size(); i += 3) {
    params[i] = amp(rng);
    params[i + 1] = centre(rng);
    params[i + 2] = width(rng);
  }
  const auto count = static_cast<std::size_t>(std::llround(2.0 * half_width / h)) + 1;
  std::vector<double> f(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double x = -half_width + static_cast<double>(j) * h;
    double v = 0.0;
    for (std::size_t i = 0; i < params.size(); i += 3) {
      const double d = (x - params[i + 1]) / params[i + 2];
      v += params[i] * std::exp(-0.5 * d * d);
    }
    f[j] = v;
  }
  return f;
}

std::vector<double> time_nodes(double T, int count) {
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = -T + 2.0 * T * i / (count - 1);
  return t;
}

double box_for_horizon(const DispersionRelation& rel, std::size_t N, int n, double T) {
  double L = 16.0;
  for (int iter = 0; iter < 200; ++iter) {
    const GridSpec trial{n, N, L};
    const double needed = required_box_length(rel, 0.25 * trial.nyquist() * std::sqrt(static_cast<double>(n)), T);
    if (L >= needed) return L;
    L *= 1.05;
  }
  throw std::runtime_error("could not size the Strichartz box");
}

}  // namespace

std::string to_string(AdmissibleCase c) {
  switch (c) {
    case AdmissibleCase::kNone: return "none";
    case AdmissibleCase::kA: return "a";
    case AdmissibleCase::kB: return "b";
    case AdmissibleCase::kC: return "c";
    case AdmissibleCase::kD: return "d";
  }
  return "?";
}

Decision classify_hls(const HlsKernelSpec& s) {
  if (s.n < 1) throw std::invalid_argument("HLS dimension must be >= 1");
  if (!(s.p >= 1.0) || !(s.q >= 1.0)) throw std::invalid_argument("HLS exponents must lie in [1, inf]");
  const double n = s.n;
  const double r = 1.0 - reciprocal(s.p) + reciprocal(s.q);
  const bool strict_pq = s.p > 1.0 && s.p < s.q && !std::isinf(s.q);
  std::string why;

  if (close(s.gamma1, s.gamma2) && s.gamma1 > 0.0 && s.gamma1 < n && strict_pq && close(r, s.gamma1 / n)) {
    return {AdmissibleCase::kA, "(a) 0 < gamma1 = gamma2 < n, 1 < p < q < inf, 1 - 1/p + 1/q = gamma1/n"};
  }
  why += "(a) fails";
  const bool ordered = s.gamma1 < s.gamma2 && !close(s.gamma1, s.gamma2);
  if (ordered && s.gamma1 > 0.0 && s.gamma1 < n && strict_pq && close(r, s.gamma1 / n)) {
    return {AdmissibleCase::kB, "(b) gamma1 < gamma2, 0 < gamma1 < n, 1 < p < q < inf, 1 - 1/p + 1/q = gamma1/n"};
  }
  why += "; (b) fails";
  if (ordered && s.gamma2 > 0.0 && s.gamma2 < n && strict_pq && close(r, s.gamma2 / n)) {
    return {AdmissibleCase::kC, "(c) gamma1 < gamma2, 0 < gamma2 < n, 1 < p < q < inf, 1 - 1/p + 1/q = gamma2/n"};
  }
  why += "; (c) fails";
  if (ordered && s.p <= s.q && s.gamma1 / n < r && r < s.gamma2 / n && !close(r, s.gamma1 / n) &&
      !close(r, s.gamma2 / n)) {
    return {AdmissibleCase::kD, "(d) gamma1 < gamma2, 1 <= p <= q <= inf, gamma1/n < 1 - 1/p + 1/q < gamma2/n"};
  }
  why += "; (d) fails";
  if (!ordered) why += " (needs gamma1 < gamma2 for b-d)";
  if (s.p > s.q) why += " (needs p <= q)";
  why += "; 1 - 1/p + 1/q = " + fmt(r);
  return {AdmissibleCase::kNone, why};
}

bool hls_admissible(const HlsKernelSpec& spec) { return classify_hls(spec).admitted(); }

Decision classify_exponent_set(double q, double theta1, double theta2) {
  if (theta1 > theta2) throw std::invalid_argument("exponent set needs theta1 <= theta2");
  if (!(q >= 1.0)) throw std::invalid_argument("time exponent q must lie in [1, inf]");
  const double two_over_q = 2.0 * reciprocal(q);
  std::string why;
  if (close(theta1, theta2) && theta1 > 0.0 && theta1 < 1.0 && close(two_over_q, theta1)) {
    return {AdmissibleCase::kA, "(a) 0 < theta1 = theta2 < 1, q = 2/theta1"};
  }
  why += "(a) needs 0 < theta1 = theta2 < 1 and q = 2/theta1";
  const bool ordered = theta1 < theta2 && !close(theta1, theta2);
  if (ordered && theta1 > 0.0 && theta1 < 1.0 && close(two_over_q, theta1)) {
    return {AdmissibleCase::kB, "(b) theta1 < theta2, 0 < theta1 < 1, q = 2/theta1"};
  }
  why += "; (b) needs theta1 < theta2, 0 < theta1 < 1, q = 2/theta1";
  if (ordered && theta2 > 0.0 && theta2 < 1.0 && close(two_over_q, theta2)) {
    return {AdmissibleCase::kC, "(c) theta1 < theta2, 0 < theta2 < 1, q = 2/theta2"};
  }
  why += "; (c) needs theta1 < theta2, 0 < theta2 < 1, q = 2/theta2";
  if (ordered && q >= 2.0 && theta1 < two_over_q && two_over_q < theta2 && !close(two_over_q, theta1) &&
      !close(two_over_q, theta2)) {
    return {AdmissibleCase::kD, "(d) theta1 < theta2, 2 <= q <= inf, theta1 < 2/q < theta2"};
  }
  why += "; (d) needs theta1 < theta2, q >= 2, theta1 < 2/q < theta2";
  return {AdmissibleCase::kNone, why};
}

bool in_exponent_set(double q, double theta1, double theta2) {
  return classify_exponent_set(q, theta1, theta2).admitted();
}

DecayProfile interpolated_profile(double decay, double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("interpolated profile needs p >= 2");
  const double theta = decay * (1.0 - 2.0 * reciprocal(p));
  return DecayProfile{theta, theta, 0.0, p};
}

double hls_ratio(const HlsKernelSpec& spec, std::span<const double> f, double h) {
  if (spec.n != 1) throw std::invalid_argument("numeric HLS check is one-dimensional");
  if (!(spec.gamma1 < 1.0)) throw std::invalid_argument("kernel singularity is not integrable (gamma1 >= 1)");
  if (!(h > 0.0) || f.empty()) throw std::invalid_argument("hls_ratio needs samples and h > 0");
  const double fp = discrete_lp(f, h, spec.p);
  if (fp == 0.0) return 0.0;

  const std::size_t M = f.size();
  std::size_t P = 1;
  while (P < 3 * M) P *= 2;
  std::vector<std::complex<double>> a(P);
  std::vector<std::complex<double>> k(P);
  for (std::size_t j = 0; j < M; ++j) a[j] = f[j];
  // Kernel offsets d = -(M-1) .. M-1 stored at index d + M - 1.
  for (std::size_t i = 0; i + 1 < 2 * M; ++i) {
    const double d = static_cast<double>(i) - static_cast<double>(M - 1);
    k[i] = kernel_cell_average(spec, (d - 0.5) * h, (d + 0.5) * h);
  }
  const std::array<std::size_t, 1> dims{P};
  fft::forward(a, dims);
  fft::forward(k, dims);
  for (std::size_t i = 0; i < P; ++i) a[i] *= k[i];
  fft::inverse(a, dims);
  std::vector<double> conv(M);
  for (std::size_t i = 0; i < M; ++i) conv[i] = h * a[i + M - 1].real();
  return discrete_lp(conv, h, spec.q) / fp;
}

HlsCheck hls_numeric_check(const HlsKernelSpec& spec, int trials, std::uint64_t seed, double h, double half_width) {
  const Decision d = classify_hls(spec);
  if (!d.admitted()) throw std::invalid_argument("inadmissible kernel: " + d.reason);
  if (!(spec.p > 1.0) || std::isinf(spec.q) || spec.p > spec.q) {
    throw std::invalid_argument("numeric HLS check is restricted to 1 < p <= q < inf");
  }
  if (trials < 1) throw std::invalid_argument("HLS check needs at least one trial");
  HlsCheck out;
  std::mt19937_64 coarse_rng(seed);
  std::mt19937_64 fine_rng(seed);
  for (int i = 0; i < trials; ++i) {
    out.max_ratio_coarse = std::max(out.max_ratio_coarse, hls_ratio(spec, random_bumps(coarse_rng, h, half_width), h));
    out.max_ratio_fine =
        std::max(out.max_ratio_fine, hls_ratio(spec, random_bumps(fine_rng, 0.5 * h, half_width), 0.5 * h));
  }
  out.relative_change = std::abs(out.max_ratio_fine / out.max_ratio_coarse - 1.0);
  out.stable = out.relative_change <= 0.2;
  out.note = "via " + d.reason + "; domain [-" + fmt(half_width) + ", " + fmt(half_width) + "], h = " + fmt(h) +
             " and " + fmt(0.5 * h);
  return out;
}

GridField random_band_limited(const GridSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const std::vector<double> norms = spec.frequency_norms();
  const double inner = spec.nyquist() / 8.0;
  const double outer = spec.nyquist() / 4.0;
  std::vector<std::complex<double>> hat(spec.size());
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    if (norms[i] <= inner) hat[i] = {re, im};
  }
  const GridField raw = GridField::from_spectrum(spec, std::move(hat));
  const double width = spec.L / 16.0;
  const GridField window = gaussian_field(spec, width);
  std::vector<std::complex<double>> product(raw.values());
  for (std::size_t i = 0; i < product.size(); ++i) product[i] *= window.values()[i];
  std::vector<std::complex<double>> spectrum = to_spectrum(spec, std::move(product));
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (norms[i] > outer) spectrum[i] = 0.0;
  }
  return GridField::from_spectrum(spec, std::move(spectrum));
}

double strichartz_ratio(const StrichartzConfig& c, const GridField& h) {
  if (c.time_nodes < 2) throw std::invalid_argument("Strichartz ratio needs at least two time nodes");
  if (!(c.T > 0.0)) throw std::invalid_argument("Strichartz ratio needs T > 0");
  const GridSpec& spec = h.spec();
  const std::vector<std::complex<double>> hat = h.spectrum();
  const double denom = norm_of_spectrum(spec, hat, Sobolev{c.eta});
  if (denom == 0.0) return 0.0;
  const std::vector<double> norms = spec.frequency_norms();
  const std::vector<double> times = time_nodes(c.T, c.time_nodes);
  const Besov target{c.eta + 0.5 * c.profile.alpha, c.p, 2.0};
  std::vector<double> values;
  values.reserve(times.size());
  for (double t : times) {
    std::vector<std::complex<double>> evolved(hat.size());
    for (std::size_t i = 0; i < hat.size(); ++i) evolved[i] = std::polar(1.0, t * c.rel.phi(norms[i])) * hat[i];
    values.push_back(norm_of_spectrum(spec, evolved, target));
  }
  return time_norm(times, values, c.q) / denom;
}

StrichartzCheck strichartz_ratio_check(const StrichartzConfig& c, const GridSpec& grid) {
  const Decision d = classify_exponent_set(c.q, c.profile.theta1, c.profile.theta2);
  if (!d.admitted()) throw std::invalid_argument("q = " + fmt(c.q) + " is not in E(theta1, theta2): " + d.reason);
  if (c.trials < 1) throw std::invalid_argument("Strichartz check needs at least one trial");
  StrichartzCheck out;
  for (int i = 0; i < c.trials; ++i) {
    const GridField h = random_band_limited(grid, c.seed + static_cast<std::uint64_t>(i));
    out.ratios.push_back(strichartz_ratio(c, h));
  }
  out.max_ratio = *std::max_element(out.ratios.begin(), out.ratios.end());
  return out;
}

StrichartzStability strichartz_stability(StrichartzConfig c, std::span<const double> horizons, std::size_t N,
                                         double tolerance) {
  if (horizons.empty()) throw std::invalid_argument("stability check needs at least one horizon");
  const double t_max = *std::max_element(horizons.begin(), horizons.end());
  const GridSpec grid{1, N, box_for_horizon(c.rel, N, 1, t_max)};
  StrichartzStability out;
  out.horizons.assign(horizons.begin(), horizons.end());
  for (double T : horizons) {
    c.T = T;
    out.max_ratios.push_back(strichartz_ratio_check(c, grid).max_ratio);
  }
  c.T = horizons.front();
  for (int i = 0; i < c.trials; ++i) {
    const GridField h = spectral_refine(random_band_limited(grid, c.seed + static_cast<std::uint64_t>(i)));
    out.refined_max_ratio = std::max(out.refined_max_ratio, strichartz_ratio(c, h));
  }
  const double base = out.max_ratios.front();
  for (double r : out.max_ratios) out.worst_change = std::max(out.worst_change, std::abs(r / base - 1.0));
  out.worst_change = std::max(out.worst_change, std::abs(out.refined_max_ratio / base - 1.0));
  out.stable = out.worst_change <= tolerance;
  return out;
}

}  // namespace dispersive
