#include "dispersive/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dispersive/oscillatory.hpp"
#include "dispersive/special.hpp"

namespace dispersive {

namespace {

void check_dimension(int n) {
  if (n < 1 || n > kMaxKernelDimension) {
    throw std::invalid_argument("kernel dimension must be 1, 2 or 3 (got " + std::to_string(n) + ")");
  }
}

double radial_moment(int n) {
  OscillatoryIntegral moment;
  moment.amplitude = [n](double r) { return BumpPair::psi(r) * std::pow(r, n - 1); };
  moment.phase = [](double) { return 0.0; };
  moment.phase_derivative = [](double) { return 0.0; };
  moment.lo = 0.5;
  moment.hi = 2.0;
  return gauss_legendre_panels(moment, 128).real();
}

double kernel_constant(int n) {
  if (n == 1) return 2.0 * BumpPair::kPsiIntegral;
  static const double kMoments[] = {radial_moment(2), radial_moment(3)};
  return kMoments[n - 2] * bessel_j_scaled(BesselOrder::for_dimension(n), 0.0);
}

KernelQuery make_query(const DispersionRelation& rel, int n, int k, double t, double x) {
  return KernelQuery{rel.name, n, k, t, x};
}

std::vector<double> sup_grid(const SupGridSpec& spec, double s_max) {
  if (spec.near_points < 2 || spec.near_radius <= 0.0 || spec.refine_points < 0 || spec.far_points < 0) {
    throw std::invalid_argument("degenerate sup-norm grid");
  }
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(spec.near_points + spec.far_points));
  for (int i = 0; i < spec.near_points; ++i) {
    grid.push_back(spec.near_radius * i / (spec.near_points - 1));
  }
  if (s_max > spec.near_radius && spec.far_points > 0) {
    const double ratio = std::log(s_max / spec.near_radius);
    for (int i = 1; i <= spec.far_points; ++i) {
      grid.push_back(spec.near_radius * std::exp(ratio * i / spec.far_points));
    }
  }
  return grid;
}

SupNorm grid_sup(const std::function<KernelSample(double)>& eval, const SupGridSpec& spec,
                 double s_max) {
  if (!(s_max >= 0.0) || !std::isfinite(s_max)) throw std::invalid_argument("invalid sup-norm range");
  const std::vector<double> grid = sup_grid(spec, s_max);

  SupNorm out;
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const KernelSample sample = eval(grid[i]);
    ++out.evaluations;
    out.converged = out.converged && sample.converged;
    const double mag = std::abs(sample.value);
    if (mag > out.value) {
      out.value = mag;
      out.argmax = grid[i];
      best = i;
    }
  }

  if (spec.refine_points > 0 && grid.size() > 1) {
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    for (int i = 1; i <= spec.refine_points; ++i) {
      const double s = lo + (hi - lo) * i / (spec.refine_points + 1);
      const KernelSample sample = eval(s);
      ++out.evaluations;
      out.converged = out.converged && sample.converged;
      const double mag = std::abs(sample.value);
      if (mag > out.value) {
        out.value = mag;
        out.argmax = s;
      }
    }
  }
  out.normalized = out.value;
  return out;
}

}  // namespace

double KernelSample::normalized_abs() const {
  return std::ldexp(std::abs(value), -query.k * query.n);
}

double default_kernel_tolerance(int n, int k) { return std::ldexp(1e-10, k * n); }

double trivial_kernel_bound(int n, int k) {
  check_dimension(n);
  return std::ldexp(kernel_constant(n), k * n);
}

KernelSample eval_kernel_1d(const DispersionRelation& rel, int k, double t, double x,
                            std::optional<double> tol) {
  const double scale = std::ldexp(1.0, k);
  const double abs_tol = tol.value_or(default_kernel_tolerance(1, k));
  const double wave_number = scale * x;

  // The two half-lines combine into 2 cos(2^k x xi) psi(xi), leaving t phi as the phase.
  OscillatoryIntegral integral;
  integral.amplitude = [&](double xi) {
    return std::complex<double>(2.0 * BumpPair::psi(xi) * std::cos(wave_number * xi), 0.0);
  };
  integral.phase = [&](double xi) { return t * rel.phi(scale * xi); };
  integral.phase_derivative = [&](double xi) { return t * scale * rel.dphi(scale * xi); };
  integral.lo = 0.5;
  integral.hi = 2.0;
  // Tolerances are relative to the unscaled integral; the 2^k prefactor is applied afterwards.
  integral.tol = abs_tol / scale;
  integral.extra_variation = std::abs(wave_number) * (integral.hi - integral.lo);

  const QuadratureResult q = integrate(integral);
  KernelSample sample;
  sample.query = make_query(rel, 1, k, t, x);
  sample.value = scale * q.value;
  sample.err_est = scale * q.err_est;
  sample.converged = q.converged;
  return sample;
}

KernelSample eval_kernel_radial(const DispersionRelation& rel, int n, int k, double t, double s,
                                std::optional<double> tol) {
  check_dimension(n);
  if (n < 2) throw std::invalid_argument("radial kernel needs n >= 2");
  if (!(s >= 0.0)) throw std::invalid_argument("radial kernel needs s >= 0");
  const BesselOrder order = BesselOrder::for_dimension(n);
  const double scale = std::ldexp(1.0, k);
  const double volume = std::ldexp(1.0, k * n);
  const double sigma = scale * s;
  const double abs_tol = tol.value_or(default_kernel_tolerance(n, k));

  OscillatoryIntegral integral;
  integral.amplitude = [&](double r) {
    return std::complex<double>(BumpPair::psi(r) * std::pow(r, n - 1) * bessel_j_scaled(order, r * sigma), 0.0);
  };
  integral.phase = [&](double r) { return t * rel.phi(scale * r); };
  integral.phase_derivative = [&](double r) { return t * scale * rel.dphi(scale * r); };
  integral.lo = 0.5;
  integral.hi = 2.0;
  integral.tol = abs_tol / volume;
  integral.extra_variation = sigma * (integral.hi - integral.lo);

  const QuadratureResult q = integrate(integral);
  KernelSample sample;
  sample.query = make_query(rel, n, k, t, s);
  sample.value = volume * q.value;
  sample.err_est = volume * q.err_est;
  sample.converged = q.converged;
  return sample;
}

KernelSample eval_kernel(const DispersionRelation& rel, int n, int k, double t, double s,
                         std::optional<double> tol) {
  check_dimension(n);
  if (n == 1) return eval_kernel_1d(rel, k, t, s, tol);
  return eval_kernel_radial(rel, n, k, t, s, tol);
}

double stationary_band_limit(const DispersionRelation& rel, int k, double t) {
  const double scale = std::ldexp(1.0, k);
  double peak = 0.0;
  constexpr int kSamples = 257;
  for (int i = 0; i < kSamples; ++i) {
    const double r = 0.5 + 1.5 * i / (kSamples - 1);
    peak = std::max(peak, std::abs(rel.dphi(scale * r)));
  }
  return 4.0 * std::abs(t) * peak;
}

SupNorm sup_norm(const DispersionRelation& rel, int n, int k, double t, const SupGridSpec& grid) {
  check_dimension(n);
  if (t == 0.0) throw std::invalid_argument("sup_norm needs t != 0");
  const double s_max = grid.s_max.value_or(stationary_band_limit(rel, k, t));
  SupNorm out = grid_sup([&](double s) { return eval_kernel(rel, n, k, t, s); }, grid, s_max);
  out.normalized = std::ldexp(out.value, -k * n);
  return out;
}

KernelSample low_freq_kernel(const DispersionRelation& rel, int n, double t, double s, double tol) {
  check_dimension(n);
  if (!(tol > 0.0)) throw std::invalid_argument("low_freq_kernel needs tol > 0");
  const double c = kernel_constant(n);
  const double tail_factor = 1.0 / (1.0 - std::ldexp(1.0, -n));

  KernelSample sum;
  sum.query = make_query(rel, n, 0, t, s);
  sum.value = 0.0;
  const double term_tol = tol / 64.0;
  for (int k = 0;; --k) {
    const KernelSample term = eval_kernel(rel, n, k, t, s, term_tol);
    sum.value += term.value;
    sum.err_est += term.err_est;
    sum.converged = sum.converged && term.converged;
    const double tail = c * std::ldexp(1.0, (k - 1) * n) * tail_factor;
    if (tail < 0.5 * tol) {
      sum.err_est += tail;
      break;
    }
  }
  return sum;
}

SupNorm low_freq_sup(const DispersionRelation& rel, int n, double t, double tol,
                     const SupGridSpec& grid) {
  check_dimension(n);
  if (t == 0.0) throw std::invalid_argument("low_freq_sup needs t != 0");
  double peak = 0.0;
  constexpr int kSamples = 257;
  for (int i = 1; i < kSamples; ++i) {
    peak = std::max(peak, std::abs(rel.dphi(2.0 * i / (kSamples - 1))));
  }
  const double s_max = grid.s_max.value_or(4.0 * std::abs(t) * peak);
  return grid_sup([&](double s) { return low_freq_kernel(rel, n, t, s, tol); }, grid, s_max);
}

}  // namespace dispersive
