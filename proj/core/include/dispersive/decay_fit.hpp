#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dispersive/dispersion.hpp"
#include "dispersive/kernel.hpp"

namespace dispersive {

/// Least-squares line through (log x, log y).
struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square deviation of log y from the fitted line.
  double residual = 0.0;
  std::size_t samples = 0;
};

/// Rejects fewer than two samples, mismatched lengths and non-positive values.
PowerFit fit_power_law(std::span<const double> x, std::span<const double> y);

struct DecaySample {
  double t = 0.0;
  double M = 0.0;
};

/// Minimum sample count of a decay sweep.
constexpr std::size_t kMinDecaySamples = 8;

/// fit_power_law on (t, M); requires at least kMinDecaySamples samples.
PowerFit fit_exponent(std::span<const DecaySample> samples);

struct DecaySeries {
  std::vector<DecaySample> samples;
  double fitted_exponent = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  double predicted_exponent = 0.0;
  double slack = 0.1;
  /// Two-sided check |fitted - predicted| <= slack in addition to the bound.
  bool sharp = false;
  bool pass = false;
};

/// Fits the samples and sets the verdict: fitted <= predicted + slack, and
/// |fitted - predicted| <= slack when `sharp`.
DecaySeries make_decay_series(std::vector<DecaySample> samples, double predicted, double slack,
                              bool sharp = false);

/// `count` geometrically spaced times from t_lo to t_hi inclusive.
std::vector<double> geometric_times(double t_lo = 10.0, double t_hi = 1000.0, std::size_t count = 16);

/// Sup-norm sweep of the dyadic kernel at scale k.
DecaySeries kernel_decay_sweep(const DispersionRelation& rel, int n, int k, std::span<const double> times,
                               double predicted, double slack, bool sharp = false,
                               const SupGridSpec& grid = {});

/// Sup-norm sweep of the summed low-frequency kernel.
DecaySeries lowfreq_decay_sweep(const DispersionRelation& rel, int n, std::span<const double> times,
                                double predicted, double slack, double tol = 1e-8,
                                const SupGridSpec& grid = {128, 2.0, 256, 64, std::nullopt});

struct ScalingFit {
  std::vector<int> ks;
  std::vector<double> values;
  /// Least-squares slope of log2 value against k.
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

/// Rejects fewer than two points and non-positive values.
ScalingFit fit_dyadic_scaling(std::span<const int> ks, std::span<const double> values);

/// Sup norms at fixed t over k_list (each in [0, 8]), fitted in log2.
ScalingFit dyadic_scaling_fit(const DispersionRelation& rel, int n, double t_fixed,
                              std::span<const int> k_list, const SupGridSpec& grid = {});

}  // namespace dispersive
