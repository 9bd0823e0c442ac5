#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "dispersive/decay_fit.hpp"
#include "dispersive/kernel.hpp"
#include "dispersive/oscillatory.hpp"
#include "dispersive/special.hpp"

using namespace dispersive;
using Complex = std::complex<double>;

namespace {

// Trapezoid over [lo, hi]; integrands here vanish to all orders at both ends.
template <class F>
Complex dense(F f, double lo, double hi, int m) {
  const double h = (hi - lo) / m;
  Complex sum = 0.0;
  for (int i = 0; i <= m; ++i) sum += (i == 0 || i == m ? 0.5 : 1.0) * Complex(f(lo + i * h));
  return sum * h;
}

// Two-sided 1-D kernel over xi in [-2, 2] without the even/odd split.
Complex kernel_1d_oracle(const DispersionRelation& rel, double t, double x) {
  return dense([&](double xi) { return psi_bump(std::abs(xi)) * std::polar(1.0, x * xi + t * rel.phi(std::abs(xi))); },
               -2.0, 2.0, 400000);
}

}  // namespace

TEST_CASE("zero phase kernel equals twice the bump integral") {
  const auto v = eval_kernel_1d(builtin("power(2)"), 0, 0.0, 0.0);
  const Complex oracle = 2.0 * dense([](double r) { return psi_bump(r); }, 0.5, 2.0, 200000);
  CHECK(std::abs(v.value - oracle) < 1e-12);
  CHECK(std::abs(v.value - 1.5) < 1e-12);
}

TEST_CASE("radial kernel at the origin") {
  const auto v = eval_kernel_radial(builtin("klein_gordon"), 3, 0, 0.0, 0.0);
  const double limit = 1.0 / (std::sqrt(2.0) * std::tgamma(1.5));
  const Complex oracle = limit * dense([](double r) { return psi_bump(r) * r * r; }, 0.5, 2.0, 200000);
  CHECK(std::abs(v.value - oracle) < 1e-12);
}

TEST_CASE("one-dimensional kernel against a two-sided dense oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> tdist(-50.0, 50.0);
  std::uniform_real_distribution<double> xdist(-60.0, 60.0);
  for (const char* name : {"klein_gordon", "power(2)"}) {
    const auto rel = builtin(name);
    for (int i = 0; i < 10; ++i) {
      const double t = tdist(rng);
      const double x = xdist(rng);
      CAPTURE(name);
      CAPTURE(t);
      CAPTURE(x);
      CHECK(std::abs(eval_kernel_1d(rel, 0, t, x).value - kernel_1d_oracle(rel, t, x)) < 1e-9);
    }
  }
}

TEST_CASE("dyadic rescaling bookkeeping") {
  const auto rel = builtin("beam");
  for (int k : {0, 1, 3}) {
    for (int n : {2, 3}) {
      const double t = 0.37;
      const double s = 1.9;
      const double sigma = std::ldexp(s, k);
      const auto order = BesselOrder::for_dimension(n);
      OscillatoryIntegral I;
      I.amplitude = [&](double r) { return Complex(psi_bump(r) * std::pow(r, n - 1) * bessel_j_scaled(order, r * sigma)); };
      I.phase = [&](double r) { return t * rel.phi(std::ldexp(r, k)); };
      I.phase_derivative = [&](double r) { return t * std::ldexp(rel.dphi(std::ldexp(r, k)), k); };
      I.lo = 0.5;
      I.hi = 2.0;
      I.tol = 1e-14;
      I.extra_variation = 1.5 * sigma;
      const Complex direct = std::ldexp(1.0, k * n) * integrate(I).value;
      const Complex via = eval_kernel_radial(rel, n, k, t, s).value;
      CHECK(std::abs(via - direct) <= 1e-10 * std::abs(direct));
    }
  }
}

TEST_CASE("trivial bound on random queries") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> kdist(-3, 4);
  std::uniform_int_distribution<int> ndist(1, 3);
  std::uniform_real_distribution<double> tdist(-20.0, 20.0);
  std::uniform_real_distribution<double> sdist(0.0, 30.0);
  const auto rel = builtin("klein_gordon");
  for (int i = 0; i < 100; ++i) {
    const int n = ndist(rng);
    const int k = kdist(rng);
    const auto v = eval_kernel(rel, n, k, tdist(rng), sdist(rng));
    CHECK(std::abs(v.value) <= trivial_kernel_bound(n, k) * (1 + 1e-12));
  }
  CHECK(trivial_kernel_bound(1, 0) == doctest::Approx(1.5));
  CHECK(trivial_kernel_bound(1, 3) == doctest::Approx(12.0));
}

TEST_CASE("trivial anchor scales by 2^n per dyadic step") {
  const auto rel = builtin("klein_gordon");
  for (int n = 1; n <= 3; ++n) {
    for (int k = 0; k < 3; ++k) {
      const double a = std::abs(eval_kernel(rel, n, k, 0.0, 0.0).value);
      const double b = std::abs(eval_kernel(rel, n, k + 1, 0.0, 0.0).value);
      CHECK(b / a == doctest::Approx(std::ldexp(1.0, n)).epsilon(1e-10));
    }
  }
}

TEST_CASE("free Schroedinger sup norm decays like t^-1/2") {
  // Stationary phase: sup_x |I_0| ~ sqrt(pi/t) max psi = sqrt(pi/t).
  const auto rel = builtin("power(2)");
  for (double t : {10.0, 100.0, 1000.0}) {
    const auto sup = sup_norm(rel, 1, 0, t);
    CAPTURE(t);
    CHECK(sup.converged);
    CHECK(std::abs(sup.value - std::abs(kernel_1d_oracle(rel, t, sup.argmax))) < 1e-8);
    CHECK(sup.value * std::sqrt(t) > 0.5 * std::sqrt(std::numbers::pi));
    CHECK(sup.value * std::sqrt(t) < 2.0 * std::sqrt(std::numbers::pi));
  }
  CHECK(sup_norm(rel, 1, 0, 1000.0).value * std::sqrt(1000.0) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(0.05));
}

TEST_CASE("sup norm is even in t") {
  for (const char* name : {"klein_gordon", "beam"}) {
    for (int n = 1; n <= 3; ++n) {
      const auto rel = builtin(name);
      CHECK(sup_norm(rel, n, 1, 7.5).value == doctest::Approx(sup_norm(rel, n, 1, -7.5).value).epsilon(1e-12));
    }
  }
}

TEST_CASE("non-stationary tail decays fast") {
  const auto rel = builtin("klein_gordon");
  const double band = stationary_band_limit(rel, 0, 100.0) / 4.0;
  double prev = std::abs(eval_kernel(rel, 3, 0, 100.0, 200.0, 1e-16).value);
  CHECK(200.0 > 2 * band);
  for (double s : {400.0, 800.0}) {
    const double cur = std::abs(eval_kernel(rel, 3, 0, 100.0, s, 1e-16).value);
    CHECK(cur <= prev / 10.0);
    prev = cur;
  }
}

TEST_CASE("wave in two dimensions decays like t^-1/2") {
  const auto times = geometric_times(10.0, 300.0, 8);
  const auto series = kernel_decay_sweep(builtin("wave"), 2, 0, times, -0.5, 0.1, true);
  CHECK(series.pass);
  CHECK(series.fitted_exponent == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("low-frequency sum at the origin") {
  // sum_{k <= 0} psi(2^-k r) = Phi(r), so the n = 1 sum is int Phi(|xi|) dxi = 3.
  const auto v1 = low_freq_kernel(builtin("klein_gordon"), 1, 0.0, 0.0, 1e-10);
  CHECK(std::abs(v1.value - 3.0) < 1e-9);
  CHECK(v1.err_est > 0.0);
  CHECK(v1.err_est < 1e-10);

  const double limit = 1.0 / (std::sqrt(2.0) * std::tgamma(1.5));
  const Complex oracle = limit * dense([](double r) { return phi_bump(r) * r * r; }, 0.0, 2.0, 400000);
  const auto v3 = low_freq_kernel(builtin("beam"), 3, 0.0, 0.0, 1e-10);
  CHECK(std::abs(v3.value - oracle) < 1e-9);
}

TEST_CASE("kernel input validation") {
  const auto rel = builtin("klein_gordon");
  CHECK_THROWS_AS(eval_kernel(rel, 4, 0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(eval_kernel_radial(rel, 1, 0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(eval_kernel_radial(rel, 2, 0, 1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(sup_norm(rel, 1, 0, 0.0), std::invalid_argument);
  SupGridSpec degenerate;
  degenerate.near_points = 1;
  CHECK_THROWS_AS(sup_norm(rel, 1, 0, 1.0, degenerate), std::invalid_argument);
  CHECK_THROWS_AS(low_freq_kernel(rel, 1, 1.0, 0.0, 0.0), std::invalid_argument);
}
