#include "dispersive/oscillatory.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dispersive {

namespace {

constexpr int kOrder = 16;

struct GaussLegendre {
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};
};

// Newton iteration on P_16 from the Chebyshev initial guesses.
GaussLegendre make_rule() {
  GaussLegendre rule;
  for (int i = 0; i < kOrder; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int n = 2; n <= kOrder; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussLegendre& rule() {
  static const GaussLegendre kRule = make_rule();
  return kRule;
}

std::complex<double> pairwise_sum(std::span<const std::complex<double>> values) {
  if (values.empty()) return {};
  if (values.size() == 1) return values[0];
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

void validate(const OscillatoryIntegral& integral) {
  if (!(integral.lo < integral.hi)) throw std::invalid_argument("oscillatory integral needs lo < hi");
  if (!(integral.tol > 0.0)) throw std::invalid_argument("oscillatory integral needs tol > 0");
  if (!integral.amplitude || !integral.phase || !integral.phase_derivative) {
    throw std::invalid_argument("oscillatory integral needs amplitude, phase and phase derivative");
  }
}

}  // namespace

double estimate_phase_variation(const OscillatoryIntegral& integral) {
  constexpr int kSamples = 257;
  const double h = (integral.hi - integral.lo) / (kSamples - 1);
  double sum = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double w = (i == 0 || i == kSamples - 1) ? 0.5 : 1.0;
    sum += w * std::abs(integral.phase_derivative(integral.lo + i * h));
  }
  return sum * h + std::abs(integral.extra_variation);
}

std::size_t panel_count(double phase_variation) {
  const double periods = std::ceil(phase_variation / (2.0 * std::numbers::pi));
  if (!std::isfinite(periods)) throw std::domain_error("phase variation is not finite");
  return std::max<std::size_t>(32, static_cast<std::size_t>(periods));
}

std::complex<double> gauss_legendre_panels(const OscillatoryIntegral& integral, std::size_t panels) {
  validate(integral);
  if (panels == 0) throw std::invalid_argument("need at least one panel");
  const GaussLegendre& gl = rule();
  const double width = (integral.hi - integral.lo) / static_cast<double>(panels);
  const double half = 0.5 * width;
  std::vector<std::complex<double>> sums(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = integral.lo + (static_cast<double>(p) + 0.5) * width;
    std::complex<double> acc = 0.0;
    for (int i = 0; i < kOrder; ++i) {
      const double r = mid + half * gl.nodes[i];
      const std::complex<double> f = integral.amplitude(r) * std::polar(1.0, integral.phase(r));
      if (!std::isfinite(f.real()) || !std::isfinite(f.imag())) {
        throw std::domain_error("non-finite integrand sample at r = " + std::to_string(r));
      }
      acc += gl.weights[i] * f;
    }
    sums[p] = acc * half;
  }
  return pairwise_sum(sums);
}

QuadratureResult integrate(const OscillatoryIntegral& integral) {
  validate(integral);
  QuadratureResult result;
  result.phase_variation = estimate_phase_variation(integral);
  std::size_t panels = panel_count(result.phase_variation);

  std::complex<double> coarse = gauss_legendre_panels(integral, panels);
  for (int doubling = 0; doubling < 2; ++doubling) {
    panels *= 2;
    const std::complex<double> fine = gauss_legendre_panels(integral, panels);
    result.value = fine;
    result.err_est = std::abs(fine - coarse);
    result.panels = panels;
    if (result.err_est <= integral.tol) {
      result.converged = true;
      return result;
    }
    coarse = fine;
  }
  result.converged = false;
  return result;
}

}  // namespace dispersive
