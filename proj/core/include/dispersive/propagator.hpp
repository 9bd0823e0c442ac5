#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "dispersive/decay_fit.hpp"
#include "dispersive/dispersion.hpp"
#include "dispersive/grid.hpp"

namespace dispersive {

// ---------------------------------------------------------------------------
// Data helpers

/// Field whose continuous Fourier transform is symbol(|xi|), centred at the
/// origin: spectrum_m = (N/L)^n (-1)^(sum of indices) symbol(|xi_m|).
GridField band_limited_field(const GridSpec& spec, const std::function<double(double)>& symbol);

/// amplitude * exp(-|x|^2 / (2 width^2)).
GridField gaussian_field(const GridSpec& spec, double width, double amplitude = 1.0);

/// 8 (1 + t_max max_{0 < r <= xi_max} |phi'(r)|): box length keeping the
/// transported data away from the periodic boundary.
double required_box_length(const DispersionRelation& rel, double xi_max, double t_max);

// ---------------------------------------------------------------------------
// Linear evolution

/// e^{i t phi(|xi|)} applied spectrally. phi(0) must be finite.
GridField evolve(const DispersionRelation& rel, const GridField& field, double t);

enum class GroupKind { kKleinGordon, kBeam, kFourth };

std::string_view to_string(GroupKind kind);
GroupKind group_kind_from_string(std::string_view name);

/// omega(xi) = sqrt(1 + |xi|^2) (Klein-Gordon) or sqrt(1 + |xi|^4) (beam).
/// Rejects kFourth, which is a first-order group.
double group_omega(GroupKind kind, double xi_norm);

/// Relation whose semigroup e^{i t phi} drives the group.
DispersionRelation group_relation(GroupKind kind);

struct GroupState {
  GridField u;
  GridField ut;
};

/// cos(t omega) u0 + sin(t omega)/omega u1, and its time derivative.
GroupState second_order_state(GroupKind kind, const GridField& u0, const GridField& u1, double t);

/// ||omega u||_2^2 + ||u_t||_2^2, computed spectrally.
double group_energy(GroupKind kind, const GroupState& state);

GridField kg_group(const GridField& u0, const GridField& u1, double t);
GridField beam_group(const GridField& u0, const GridField& u1, double t);

/// The operator written sin(t omega)/omega (Klein-Gordon / beam) or
/// e^{i t phi} (fourth-order Schroedinger) applied to g.
GridField apply_group(GroupKind kind, const GridField& g, double t);

// ---------------------------------------------------------------------------
// Littlewood-Paley projections

/// psi(2^-k |xi|) applied spectrally.
GridField lp_project(const GridField& field, int k);
/// Phi(|xi|) applied spectrally.
GridField low_project(const GridField& field);
/// Largest k whose shell [2^(k-1), 2^(k+1)] meets the grid frequencies.
int max_shell(const GridSpec& spec);

// ---------------------------------------------------------------------------
// Norms

struct Lebesgue {
  double p = 2.0;
};
/// ||(I - Delta)^(s/2) f||_2.
struct Sobolev {
  double s = 0.0;
};
/// (||P_<=0 f||_p^q + sum_{k>=1} 2^(ksq) ||Delta_k f||_p^q)^(1/q), truncated
/// at max_shell.
struct Besov {
  double s = 0.0;
  double p = 2.0;
  double q = 2.0;
};
using NormSpec = std::variant<Lebesgue, Sobolev, Besov>;

double norm(const GridField& field, const NormSpec& spec);

/// `norm` for a field given by its FFT spectrum (saves a transform).
double norm_of_spectrum(const GridSpec& grid, const std::vector<std::complex<double>>& spectrum,
                        const NormSpec& spec);

struct TimeSample {
  double t = 0.0;
  GridField field;
};

/// L^q in time (trapezoid over the given nodes, or max for q = inf) of the
/// spatial norm. Finite q needs at least two samples with increasing t.
double mixed_norm(std::span<const TimeSample> samples, double q, const NormSpec& spec);

/// Spatial norm values on already-computed samples, then the time norm.
double time_norm(std::span<const double> times, std::span<const double> values, double q);

/// Exponent conjugate to p (inf <-> 1).
double dual_exponent(double p);

// ---------------------------------------------------------------------------
// Decay checks

struct GroupDecayConfig {
  GroupKind group = GroupKind::kKleinGordon;
  double s = 0.0;
  double s_prime = 0.0;
  double p = 2.0;
  double q = 2.0;
  /// Klein-Gordon interpolation parameter in [0, 1].
  double theta = 1.0;
  std::vector<double> times;
  double slack = 0.1;
  bool sharp = false;
  /// Each sweep value is the max of the ratio over `window_samples` equally
  /// spaced times in [t, t + window_length): the second-order groups carry
  /// a sin(t omega) factor with omega ~ 1 near xi = 0, so |u| is modulated
  /// with period ~pi and the window picks out its envelope. 1 disables
  /// windowing.
  int window_samples = 1;
  double window_length = 3.141592653589793;
};

struct GroupDecayResult {
  DecaySeries series;
  double data_norm = 0.0;
  /// Fraction of the L^2 mass within L/16 of the box edge at the last time.
  double boundary_fraction = 0.0;
};

/// Large-time exponent of the group bound, after checking its constraint:
/// Klein-Gordon (n+1+theta) delta <= 1 + s' - s -> -(n-1+theta) delta;
/// beam 0 <= 2 + s' - s -> -n delta / 2; fourth -2 n delta <= s' - s -> -n delta.
/// Throws std::invalid_argument naming the violated inequality.
double predicted_group_exponent(const GroupDecayConfig& config, int n);

/// ||group(t) g||_{B^s_{p,q}} / ||g||_{B^{s'}_{p',q}} over config.times.
GroupDecayResult group_decay_check(const GroupDecayConfig& config, const GridField& data);

struct EnvelopeFit {
  std::vector<double> times;
  std::vector<double> ratios;
  /// Fixed exponent beta; log c = mean(log ratio - beta log t).
  double beta = 0.0;
  double constant = 0.0;
  double residual = 0.0;
  /// Unconstrained least-squares slope for reference.
  double free_slope = 0.0;
};

/// Fits ratio <= c t^beta with one constant; residual is the RMS log deviation.
EnvelopeFit fit_envelope(std::span<const double> times, std::span<const double> ratios, double beta);

/// Beam small-time bound with u0 = 0: for each t, the largest
/// ||B(t) u1||_q / ||u1||_q' over Gaussian u1 of the given widths, fitted
/// against t^(1 + n/q - n/2).
EnvelopeFit beam_small_time_check(const GridSpec& spec, double q, std::span<const double> times,
                                  std::span<const double> widths);

/// Beam large-time L^q decay with u0 = 0 and Gaussian u1; predicted
/// exponent n/(2q) - n/4. Each value is the max over a window as in
/// GroupDecayConfig.
DecaySeries beam_lq_decay_check(const GridSpec& spec, double q, double width,
                                std::span<const double> times, double slack, int window_samples = 4,
                                double window_length = 3.141592653589793);

}  // namespace dispersive
