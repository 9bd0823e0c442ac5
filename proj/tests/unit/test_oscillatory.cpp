#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "dispersive/oscillatory.hpp"
#include "dispersive/special.hpp"

using namespace dispersive;
using Complex = std::complex<double>;

namespace {

OscillatoryIntegral chirp(double t) {
  OscillatoryIntegral I;
  I.amplitude = [](double r) { return Complex(psi_bump(r), 0.0); };
  I.phase = [t](double r) { return t * r * r; };
  I.phase_derivative = [t](double r) { return 2 * t * r; };
  I.lo = 0.5;
  I.hi = 2.0;
  return I;
}

// psi vanishes to all orders at both ends, so the trapezoid rule converges
// faster than any power of the step.
Complex dense_trapezoid(const OscillatoryIntegral& I, int m) {
  const double h = (I.hi - I.lo) / m;
  Complex sum = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double r = I.lo + i * h;
    sum += (i == 0 || i == m ? 0.5 : 1.0) * I.amplitude(r) * std::polar(1.0, I.phase(r));
  }
  return sum * h;
}

}  // namespace

TEST_CASE("constant integrand") {
  OscillatoryIntegral I;
  I.amplitude = [](double) { return Complex(1.0, 0.0); };
  I.phase = [](double) { return 0.0; };
  I.phase_derivative = [](double) { return 0.0; };
  I.lo = 0.5;
  I.hi = 2.0;
  const auto q = integrate(I);
  CHECK(q.converged);
  CHECK(std::abs(q.value - 1.5) < 1e-14);
}

TEST_CASE("linear phase has a closed antiderivative") {
  const double lambda = 100.0;
  OscillatoryIntegral I;
  I.amplitude = [](double) { return Complex(1.0, 0.0); };
  I.phase = [=](double r) { return lambda * r; };
  I.phase_derivative = [=](double) { return lambda; };
  I.lo = 0.0;
  I.hi = 1.0;
  const auto q = integrate(I);
  const Complex exact = (std::polar(1.0, lambda) - 1.0) / Complex(0.0, lambda);
  CHECK(std::abs(q.value - exact) < 1e-13);
}

TEST_CASE("fast chirp matches a dense trapezoid oracle") {
  auto I = chirp(1e4);
  I.tol = 1e-10;
  const auto q = integrate(I);
  CHECK(q.converged);
  CHECK(std::abs(q.value - dense_trapezoid(I, 1000000)) < 1e-8);
}

TEST_CASE("error contract on a small corpus") {
  for (double t : {0.0, 1.0, 30.0, 1e3, 1e5}) {
    auto I = chirp(t);
    I.tol = 1e-9;
    const auto q = integrate(I);
    const Complex truth = dense_trapezoid(I, 2000000);
    CAPTURE(t);
    CHECK(std::abs(q.value - truth) <= std::max(I.tol, 10 * q.err_est) + 1e-12);
  }
}

TEST_CASE("linearity") {
  auto a1 = chirp(500.0);
  auto a2 = chirp(500.0);
  a2.amplitude = [](double r) { return Complex(0.0, r * psi_bump(r)); };
  auto sum = chirp(500.0);
  const Complex alpha(2.0, -1.0);
  const Complex beta(-0.5, 3.0);
  sum.amplitude = [&](double r) { return alpha * a1.amplitude(r) + beta * a2.amplitude(r); };
  const auto q1 = integrate(a1);
  const auto q2 = integrate(a2);
  const auto qs = integrate(sum);
  CHECK(std::abs(qs.value - (alpha * q1.value + beta * q2.value)) <= 10 * (qs.err_est + q1.err_est + q2.err_est) + 1e-13);
}

TEST_CASE("conjugation symmetry") {
  auto I = chirp(2000.0);
  I.amplitude = [](double r) { return Complex(psi_bump(r), r * psi_bump(r)); };
  auto J = I;
  J.amplitude = [](double r) { return Complex(psi_bump(r), -r * psi_bump(r)); };
  J.phase = [](double r) { return -2000.0 * r * r; };
  J.phase_derivative = [](double r) { return -4000.0 * r; };
  CHECK(std::abs(integrate(J).value - std::conj(integrate(I).value)) < 1e-13);
}

TEST_CASE("panel doubling converges geometrically") {
  const auto I = chirp(400.0);
  const Complex v1 = gauss_legendre_panels(I, 16);
  const Complex v2 = gauss_legendre_panels(I, 32);
  const Complex v3 = gauss_legendre_panels(I, 64);
  CHECK(std::abs(v2 - v1) > 1e-6);
  CHECK(std::abs(v3 - v2) <= 0.25 * std::abs(v2 - v1));
}

TEST_CASE("panel count rule") {
  CHECK(panel_count(0.0) == 32);
  CHECK(panel_count(2 * 3.141592653589793 * 1000.5) == 1001);
  CHECK_THROWS_AS(panel_count(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("failures are reported") {
  auto I = chirp(10.0);
  I.tol = 0.0;
  CHECK_THROWS_AS(integrate(I), std::invalid_argument);
  I.tol = 1e-300;
  CHECK_FALSE(integrate(I).converged);
  I.tol = 1e-10;
  I.lo = 2.0;
  I.hi = 0.5;
  CHECK_THROWS_AS(integrate(I), std::invalid_argument);
  auto bad = chirp(10.0);
  bad.amplitude = [](double r) { return Complex(r > 1.0 ? std::nan("") : 1.0, 0.0); };
  CHECK_THROWS_AS(integrate(bad), std::domain_error);
}
