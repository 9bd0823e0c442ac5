#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>

#include "dispersive/dispersion.hpp"

namespace dispersive {

/// One evaluation point of the frequency-localised propagator kernel.
/// `x` is the physical spatial coordinate: signed for n = 1, the radius |x|
/// for n >= 2.
struct KernelQuery {
  std::string relation;
  int n = 1;
  int k = 0;
  double t = 0.0;
  double x = 0.0;
};

struct KernelSample {
  KernelQuery query;
  std::complex<double> value;
  double err_est = 0.0;
  bool converged = true;

  /// 2^(-kn) |value|, comparable across dyadic scales.
  double normalized_abs() const;
};

/// Supported dimensions are 1, 2, 3.
constexpr int kMaxKernelDimension = 3;

/// Default absolute quadrature tolerance at scale k: 1e-10 * 2^(kn).
double default_kernel_tolerance(int n, int k);

/// I_k(x) = 2^k int e^{i 2^k x xi} e^{i t phi(2^k |xi|)} psi(|xi|) dxi, evaluated
/// as one oscillatory integral over [1/2, 2] with amplitude
/// 2 cos(2^k x xi) psi(xi) and phase t phi(2^k xi).
KernelSample eval_kernel_1d(const DispersionRelation& rel, int k, double t, double x,
                            std::optional<double> tol = std::nullopt);

/// II_k(sigma) = 2^(kn) int_{1/2}^{2} e^{i t phi(2^k r)} psi(r) r^(n-1)
///               (r sigma)^(-(n-2)/2) J_{(n-2)/2}(r sigma) dr,  sigma = 2^k s,
/// for n in {2, 3}; `s` is the physical radius.
KernelSample eval_kernel_radial(const DispersionRelation& rel, int n, int k, double t, double s,
                                std::optional<double> tol = std::nullopt);

/// Dispatches to eval_kernel_1d (n = 1, x = s) or eval_kernel_radial.
KernelSample eval_kernel(const DispersionRelation& rel, int n, int k, double t, double s,
                         std::optional<double> tol = std::nullopt);

/// Modulus bound |kernel| <= 2^(kn) c_n, with c_1 = 2 int psi and
/// c_n = int psi(r) r^(n-1) dr / (2^((n-2)/2) Gamma(n/2)) for n >= 2.
double trivial_kernel_bound(int n, int k);

/// Physical radius of the stationary band with a factor-4 margin:
/// 4 |t| max_{r in [1/2, 2]} |phi'(2^k r)|.
double stationary_band_limit(const DispersionRelation& rel, int k, double t);

struct SupGridSpec {
  int near_points = 256;
  double near_radius = 2.0;
  int far_points = 512;
  int refine_points = 64;
  /// Overrides the stationary-band limit when set.
  std::optional<double> s_max;
};

struct SupNorm {
  double value = 0.0;
  double argmax = 0.0;
  /// 2^(-kn) value (equal to value for aggregated kernels).
  double normalized = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

/// max |kernel| over a hybrid grid: linear on [0, near_radius], logarithmic
/// on [near_radius, S_max], then `refine_points` linear points between the
/// neighbours of the coarse argmax. Rejects t == 0 and degenerate grids.
SupNorm sup_norm(const DispersionRelation& rel, int n, int k, double t,
                 const SupGridSpec& grid = {});

/// Sum of the dyadic kernels over k = 0, -1, -2, ... truncated where the
/// geometric tail of the trivial bound falls below tol / 2; `err_est`
/// includes that tail.
KernelSample low_freq_kernel(const DispersionRelation& rel, int n, double t, double s,
                             double tol = 1e-8);

/// Sup over space of low_freq_kernel. The default far limit is
/// 4 |t| max_{r in (0, 2]} |phi'(r)|.
SupNorm low_freq_sup(const DispersionRelation& rel, int n, double t, double tol = 1e-8,
                     const SupGridSpec& grid = {128, 2.0, 256, 64, std::nullopt});

}  // namespace dispersive
