#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace dispersive {

/// The integral of a(r) exp(i p(r)) over [lo, hi].
///
/// `extra_variation` is added to the phase-variation estimate for
/// oscillation carried by the amplitude (e.g. a Bessel factor J(r sigma)
/// contributes sigma * (hi - lo)).
struct OscillatoryIntegral {
  std::function<std::complex<double>(double)> amplitude;
  std::function<double(double)> phase;
  std::function<double(double)> phase_derivative;
  double lo = 0.0;
  double hi = 1.0;
  double tol = 1e-10;
  double extra_variation = 0.0;
};

struct QuadratureResult {
  std::complex<double> value;
  double err_est = 0.0;
  bool converged = true;
  std::size_t panels = 0;
  double phase_variation = 0.0;
};

/// Trapezoid estimate of int |p'(r)| dr from 257 equispaced samples, plus
/// `extra_variation`.
double estimate_phase_variation(const OscillatoryIntegral& integral);

/// Base panel count for a given total phase variation: one 16-point
/// Gauss-Legendre panel per full period of the phase, at least 32.
std::size_t panel_count(double phase_variation);

/// Composite 16-point Gauss-Legendre rule on `panels` equal panels. Panel
/// sums are combined with a fixed pairwise tree.
std::complex<double> gauss_legendre_panels(const OscillatoryIntegral& integral, std::size_t panels);

/// Composite Gauss-Legendre with an N / 2N error estimate, doubling at most
/// twice. Returns the finest value; `converged` is false if the estimate
/// still exceeds `tol`. Throws std::domain_error on a non-finite sample and
/// std::invalid_argument on an empty interval or non-positive tolerance.
QuadratureResult integrate(const OscillatoryIntegral& integral);

}  // namespace dispersive
