#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dispersive/dispersion.hpp"
#include "dispersive/grid.hpp"

namespace dispersive {

// ---------------------------------------------------------------------------
// Exponent bookkeeping

enum class AdmissibleCase { kNone, kA, kB, kC, kD };

std::string to_string(AdmissibleCase c);

struct Decision {
  AdmissibleCase via = AdmissibleCase::kNone;
  /// Which condition admitted the exponents, or why each one failed.
  std::string reason;
  bool admitted() const { return via != AdmissibleCase::kNone; }
};

/// Kernel k(y) = |y|^-gamma1 for |y| <= 1 and |y|^-gamma2 for |y| > 1.
struct HlsKernelSpec {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double p = 2.0;
  double q = 2.0;
  int n = 1;
};

/// Conditions (a)-(d) for ||f * k||_q <= C ||f||_p, tested in order.
Decision classify_hls(const HlsKernelSpec& spec);
bool hls_admissible(const HlsKernelSpec& spec);

/// Membership of q in E(theta1, theta2), tested in order (a)-(d).
/// Rejects theta1 > theta2.
Decision classify_exponent_set(double q, double theta1, double theta2);
bool in_exponent_set(double q, double theta1, double theta2);

/// Decay k(t) = |t|^-theta1 (|t| <= 1), |t|^-theta2 (|t| > 1) with
/// regularity shift alpha, in B^alpha_{p,2} <- B^0_{p',2}.
struct DecayProfile {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double alpha = 0.0;
  double p = 2.0;
};

/// Dispersive profile interpolated between L^2 conservation and the
/// dispersive L^inf bound |t|^-decay: theta = decay (1 - 2/p), alpha = 0.
DecayProfile interpolated_profile(double decay, double p);

// ---------------------------------------------------------------------------
// Numerical checks

/// ||f * k||_q / ||f||_p for samples of f on a uniform 1-D grid of spacing h;
/// the kernel is replaced by its cell averages and the convolution is linear
/// (zero-padded). Returns 0 for f = 0.
double hls_ratio(const HlsKernelSpec& spec, std::span<const double> f, double h);

struct HlsCheck {
  double max_ratio_coarse = 0.0;
  double max_ratio_fine = 0.0;
  double relative_change = 0.0;
  bool stable = false;
  std::string note;
};

/// Max ratio over `trials` random smooth bumps on [-half_width, half_width]
/// at spacing h and h/2; stable when the two maxima agree within 20%.
/// n = 1 and 1 < p <= q < inf only; inadmissible specs are rejected.
HlsCheck hls_numeric_check(const HlsKernelSpec& spec, int trials, std::uint64_t seed = 0, double h = 1.0 / 16.0,
                           double half_width = 32.0);

struct StrichartzConfig {
  DispersionRelation rel;
  double q = 8.0;
  double p = 4.0;
  double eta = 0.0;
  DecayProfile profile;
  int trials = 50;
  double T = 4.0;
  int time_nodes = 33;
  std::uint64_t seed = 0;
};

/// Random data with complex Gaussian spectral coefficients on
/// |xi| <= nyquist/8, multiplied by a Gaussian window of width L/16 and cut
/// back to |xi| <= nyquist/4, so it is both band-limited and localised.
GridField random_band_limited(const GridSpec& spec, std::uint64_t seed);

/// ||U(t)h||_{L^q(-T, T; B^{eta + alpha/2}_{p,2})} / ||h||_{H^eta} with the
/// time norm by trapezoid on `time_nodes` equispaced nodes (max for q = inf).
double strichartz_ratio(const StrichartzConfig& config, const GridField& h);

struct StrichartzCheck {
  std::vector<double> ratios;
  double max_ratio = 0.0;
};

/// Max of strichartz_ratio over config.trials random data sets on `grid`.
/// Rejects q outside E(theta1, theta2), naming the failed conditions.
StrichartzCheck strichartz_ratio_check(const StrichartzConfig& config, const GridSpec& grid);

struct StrichartzStability {
  std::vector<double> horizons;
  /// Max ratio per horizon on the base grid.
  std::vector<double> max_ratios;
  /// Max ratio at the first horizon with the same data on a 2N grid.
  double refined_max_ratio = 0.0;
  double worst_change = 0.0;
  bool stable = false;
};

/// Runs the ratio check for every horizon on a box sized for the largest
/// one, then again on the doubled grid with the same data (spectrum
/// zero-padded). Stable when every max ratio is within `tolerance` of the
/// first horizon's.
StrichartzStability strichartz_stability(StrichartzConfig config, std::span<const double> horizons,
                                         std::size_t N, double tolerance = 0.3);

}  // namespace dispersive
