#include "dispersive/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dispersive {

BesselOrder BesselOrder::from_twice(int twice_nu) {
  if (twice_nu < -1 || twice_nu > kMaxTwiceOrder) {
    throw std::invalid_argument("unsupported Bessel order " + std::to_string(0.5 * twice_nu) +
                                " (supported: integers and half-integers in [-1/2, 6])");
  }
  return BesselOrder(twice_nu);
}

BesselOrder BesselOrder::from_value(double nu) {
  const double twice = 2.0 * nu;
  if (twice != std::round(twice)) {
    throw std::invalid_argument("Bessel order must be an integer or half-integer");
  }
  return from_twice(static_cast<int>(twice));
}

BesselOrder BesselOrder::for_dimension(int n) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  return from_twice(n - 2);
}

namespace {

// Sum_k (-z^2/4)^k / (k! Gamma(nu + k + 1)), i.e. (z/2)^-nu J_nu(z).
double reduced_series(double nu, double z) {
  const double q = -0.25 * z * z;
  double term = 1.0 / std::tgamma(nu + 1.0);
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (k * (nu + k));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && k > 0.5 * z) break;
  }
  return sum;
}

double series(double nu, double r) {
  if (r == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  return std::pow(0.5 * r, nu) * reduced_series(nu, r);
}

// Hankel expansion; converges asymptotically, truncated at the smallest term.
double hankel_asymptotic(double nu, double r) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * r);
    const double mag = std::abs(term);
    if (mag > last) break;
    last = mag;
    // term_k contributes to P (even k) or Q (odd k) with alternating signs.
    switch (k % 4) {
      case 0: p += term; break;
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
    }
    if (mag < 1e-17) break;
  }
  const double chi = r - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * r)) * (p * std::cos(chi) - q * std::sin(chi));
}

// Miller's algorithm, normalised by J_0 + 2 sum J_2k = 1.
double miller_backward(int order, double r) {
  const int start = 2 * ((static_cast<int>(r) + order + 40) / 2);
  double next = 0.0;
  double cur = 1e-30;
  double norm = 0.0;
  double wanted = 0.0;
  for (int k = start; k >= 1; --k) {
    const double prev = 2.0 * k / r * cur - next;
    next = cur;
    cur = prev;  // cur now holds J_{k-1} up to scale
    if (k - 1 == order) wanted = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      wanted *= 1e-250;
    }
  }
  norm += cur;  // J_0
  return wanted / norm;
}

double integer_order(int order, double r) {
  const double nu = order;
  if (r <= std::max(12.0, 2.0 * nu)) return series(nu, r);
  if (r >= std::max(25.0, 2.0 * nu * nu)) return hankel_asymptotic(nu, r);
  return miller_backward(order, r);
}

double half_integer_order(int twice_nu, double r) {
  const double nu = 0.5 * twice_nu;
  if (r == 0.0) return 0.0 * nu;  // J_nu(0) = 0 for nu > 0; nu = -1/2 diverges
  if (r < std::max(1.0, 2.0 * nu)) return series(nu, r);
  const double scale = std::sqrt(2.0 / (std::numbers::pi * r));
  double prev = scale * std::cos(r);  // J_{-1/2}
  double cur = scale * std::sin(r);   // J_{1/2}
  if (twice_nu == -1) return prev;
  for (int twice = 1; twice < twice_nu; twice += 2) {
    const double order = 0.5 * twice;
    const double next = 2.0 * order / r * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double smooth_step_kernel(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

}  // namespace

double bessel_j(BesselOrder nu, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("bessel_j requires r >= 0");
  if (nu.is_integer()) return integer_order(nu.twice() / 2, r);
  if (r == 0.0 && nu.twice() == -1) return std::numeric_limits<double>::infinity();
  return half_integer_order(nu.twice(), r);
}

double bessel_j_scaled(BesselOrder nu, double z) {
  if (!(z >= 0.0)) throw std::invalid_argument("bessel_j_scaled requires z >= 0");
  const double order = nu.value();
  if (z < 1.0) return std::exp2(-order) * reduced_series(order, z);
  return bessel_j(nu, z) * std::pow(z, -order);
}

double BumpPair::Phi(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double a = smooth_step_kernel(2.0 - r);
  const double b = smooth_step_kernel(r - 1.0);
  return a / (a + b);
}

double BumpPair::psi(double r) { return Phi(r) - Phi(2.0 * r); }

double phi_bump(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("phi_bump requires r >= 0");
  return BumpPair::Phi(r);
}

double psi_bump(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("psi_bump requires r >= 0");
  return BumpPair::psi(r);
}

double lp_symbol(int k, double xi_norm) {
  if (!(xi_norm >= 0.0)) throw std::invalid_argument("lp_symbol requires |xi| >= 0");
  return BumpPair::psi(std::ldexp(xi_norm, -k));
}

double low_symbol(double xi_norm) {
  if (!(xi_norm >= 0.0)) throw std::invalid_argument("low_symbol requires |xi| >= 0");
  return BumpPair::Phi(xi_norm);
}

}  // namespace dispersive
