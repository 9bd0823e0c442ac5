#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "dispersive/special.hpp"

using namespace dispersive;
using Float50 = boost::multiprecision::cpp_bin_float_50;

namespace {

double oracle_j(double nu, double r) {
  return static_cast<double>(boost::math::cyl_bessel_j(Float50(nu), Float50(r)));
}

}  // namespace

TEST_CASE("bessel examples") {
  CHECK(bessel_j(BesselOrder::from_value(0.0), 0.0) == 1.0);
  CHECK(std::abs(bessel_j(BesselOrder::from_value(0.5), std::numbers::pi)) < 1e-15);
  CHECK(std::abs(bessel_j(BesselOrder::from_value(0.0), 2.404825557695773)) < 1e-9);
}

TEST_CASE("first zero of J0 by bisection") {
  const auto j0 = BesselOrder::from_value(0.0);
  double lo = 2.0;
  double hi = 3.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j(j0, mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(std::abs(0.5 * (lo + hi) - 2.404825557695773) < 1e-9);
}

TEST_CASE("bessel matches a 50-digit oracle on [1e-6, 1e4]") {
  for (double nu : {0.0, 1.0, 0.5, 1.5}) {
    const auto order = BesselOrder::from_value(nu);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double r = 1e-6 * std::pow(1e10, i / 999.0);
      worst = std::max(worst, std::abs(bessel_j(order, r) - oracle_j(nu, r)));
    }
    CAPTURE(nu);
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("higher supported orders match the oracle") {
  for (int twice = 0; twice <= BesselOrder::kMaxTwiceOrder; ++twice) {
    const auto order = BesselOrder::from_twice(twice);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double r = 1e-3 * std::pow(1e7, i / 199.0);
      worst = std::max(worst, std::abs(bessel_j(order, r) - oracle_j(order.value(), r)));
    }
    CAPTURE(order.value());
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("small-argument envelope") {
  for (double nu : {0.0, 0.5, 1.0, 1.5}) {
    const auto order = BesselOrder::from_value(nu);
    for (double r = 1e-6; r <= 1.0; r *= 1.1) {
      CHECK(std::abs(bessel_j(order, r)) <= 1.1 * std::pow(r, nu));
    }
  }
}

TEST_CASE("large-argument envelope") {
  for (double nu : {0.0, 0.5, 1.0, 1.5}) {
    const auto order = BesselOrder::from_value(nu);
    double peak = 0.0;
    for (double r = 1.0; r <= 1e4; r *= 1.001) peak = std::max(peak, std::sqrt(r) * std::abs(bessel_j(order, r)));
    CAPTURE(nu);
    CHECK(peak <= 1.0);
  }
}

TEST_CASE("derivative recurrence") {
  for (double nu : {0.0, 0.5, 1.0, 1.5}) {
    const auto order = BesselOrder::from_value(nu);
    auto g = [&](double r) { return std::pow(r, -nu) * bessel_j(order, r); };
    for (double r : {0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) {
      const double h = 1e-4;
      const double lhs = (g(r + h) - g(r - h)) / (2 * h);
      const double rhs = -std::pow(r, -nu) * bessel_j(order.next(), r);
      CAPTURE(nu);
      CAPTURE(r);
      CHECK(std::abs(lhs - rhs) < 1e-6);
    }
  }
}

TEST_CASE("scaled bessel at the origin") {
  for (int twice = 0; twice <= 4; ++twice) {
    const auto order = BesselOrder::from_twice(twice);
    const double nu = order.value();
    CHECK(bessel_j_scaled(order, 0.0) == doctest::Approx(1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0))).epsilon(1e-15));
    CHECK(bessel_j_scaled(order, 0.7) == doctest::Approx(oracle_j(nu, 0.7) / std::pow(0.7, nu)).epsilon(1e-13));
    CHECK(bessel_j_scaled(order, 30.0) == doctest::Approx(oracle_j(nu, 30.0) / std::pow(30.0, nu)).epsilon(1e-9));
  }
}

TEST_CASE("bessel input validation") {
  CHECK_THROWS_AS(bessel_j(BesselOrder::from_value(1.0), -1.0), std::invalid_argument);
  CHECK_THROWS_AS(BesselOrder::from_value(0.3), std::invalid_argument);
  CHECK_THROWS_AS(BesselOrder::from_value(7.0), std::invalid_argument);
  CHECK_THROWS_AS(BesselOrder::from_value(-1.0), std::invalid_argument);
  CHECK(BesselOrder::for_dimension(3) == BesselOrder::from_value(0.5));
}

TEST_CASE("bump examples") {
  CHECK(phi_bump(0.5) == 1.0);
  CHECK(psi_bump(0.25) == 0.0);
  CHECK(std::abs(phi_bump(3.0) + psi_bump(3.0 / 2) + psi_bump(3.0 / 4) - 1.0) < 1e-14);
  CHECK(phi_bump(2.0) == 0.0);
  CHECK(phi_bump(1.0) == 1.0);
  CHECK_THROWS_AS(phi_bump(-0.1), std::invalid_argument);
}

TEST_CASE("bump range, support and symmetry") {
  for (double r = 0.0; r <= 3.0; r += 1.0 / 1024) {
    CHECK(phi_bump(r) >= 0.0);
    CHECK(phi_bump(r) <= 1.0);
    if (r < 0.5 || r > 2.0) CHECK(psi_bump(r) == 0.0);
    CHECK(std::abs(phi_bump(3.0 - r) - (1.0 - phi_bump(r))) < 1e-15);
  }
}

TEST_CASE("psi integrates to three quarters") {
  const int m = 200000;
  const double h = 1.5 / m;
  double sum = 0.0;
  for (int i = 0; i <= m; ++i) sum += (i == 0 || i == m ? 0.5 : 1.0) * psi_bump(0.5 + i * h);
  CHECK(sum * h == doctest::Approx(BumpPair::kPsiIntegral).epsilon(1e-12));
}

TEST_CASE("partition of unity") {
  const int K = 20;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double r = i == 0 ? 0.0 : std::pow(2.0, -20.0 + 40.0 * i / 9999.0);
    double sum = phi_bump(r);
    for (int k = 1; k <= K; ++k) sum += lp_symbol(k, r);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("dyadic symbol") {
  CHECK(lp_symbol(3, 4.0) == 0.0);
  CHECK(lp_symbol(0, 1.0) == 1.0);
  for (int k = -5; k <= 10; ++k) CHECK(lp_symbol(k, std::ldexp(1.3, k)) == psi_bump(1.3));
  CHECK(low_symbol(0.9) == 1.0);
}
