#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dispersive/grid.hpp"
#include "dispersive/propagator.hpp"

namespace dispersive {

/// (2 - n + sqrt(n^2 + 12n + 4)) / (2n), the positive root of
/// n k^2 + (n - 2) k - 4 = 0.
double critical_power_kg(int n);

/// (4 - n + sqrt(n^2 + 24n + 16)) / (2n), the positive root of
/// n k^2 + (n - 4) k - 8 = 0.
double critical_power_beam(int n);

enum class Family { kKleinGordon, kBeam };

std::string to_string(Family f);
Family family_from_string(const std::string& name);
GroupKind group_of(Family f);

struct ConditionReport {
  Family family = Family::kKleinGordon;
  int n = 1;
  double kappa = 0.0;
  /// Klein-Gordon: (1+k) k (n-2) / (2(2+k)); beam: (1+k)(n k/(2(2+k)) - s/2). Must be < 1.
  double first = 0.0;
  /// Klein-Gordon: (1+k) k n / (2(2+k)); beam: (1+k) k n / (4(2+k)). Must be > 1.
  double second = 0.0;
  /// Klein-Gordon: k (n+2) / (2(2+k)) < 1; beam: n k/(2+k) - 2/(1+k) < s.
  double sigma = 0.0;
  /// Beam only.
  std::optional<double> s;
  std::optional<double> s2;
  bool first_ok = false;
  bool second_ok = false;
  bool sigma_ok = false;
  /// Klein-Gordon: k(n) < k < 4/n; beam: k_B(n) < k < 8/n and s <= 2.
  bool window_ok = false;
  bool pass = false;
  /// "pass", "fail", or "critical" when the second quantity equals 1.
  std::string status;
};

ConditionReport kg_exponent_conditions(int n, double kappa);
ConditionReport beam_exponent_conditions(int n, double kappa, double s);

/// True when, for every kappa on the grid, the three Klein-Gordon conditions
/// hold exactly when k(n) < kappa < 4/n.
bool kg_conditions_match_window(int n, const std::vector<double>& kappas);

struct NonlinearProblem {
  Family family = Family::kKleinGordon;
  double kappa = 3.0;
  /// Beam regularity parameter.
  double s = 2.0;
  GridField u0{GridSpec{}};
  GridField u1{GridSpec{}};
  double T = 4.0;
  std::size_t M_t = 128;
  double data_scale = 1.0;
};

/// Samples u(t_j) at t_j = j T / M_t, j = 0..M_t.
struct SpaceTimeField {
  GridSpec spec;
  std::vector<double> times;
  std::vector<std::vector<std::complex<double>>> slices;
};

/// data_scale (K'(t) u0 + K(t) u1) (resp. B', B) at the time nodes.
SpaceTimeField linear_solution(const NonlinearProblem& problem);

/// linear - int_0^t K(t - tau) |u(tau)|^(1+kappa) dtau, trapezoid in tau.
/// Throws std::overflow_error if |u|^(1+kappa) is not finite.
SpaceTimeField duhamel_map(const NonlinearProblem& problem, const SpaceTimeField& u);

/// max over time nodes of the grid L^2 distance.
double sup_l2_distance(const SpaceTimeField& a, const SpaceTimeField& b);

/// (trapezoid_t ||u(t)||_{2+k}^{1+k})^(1/(1+k)).
double mixed_norm_lx(const SpaceTimeField& u, double kappa);

struct PicardResult {
  std::vector<SpaceTimeField> iterates;
  /// D_j = sup_t ||u^(j) - u^(j-1)||_2 for j = 1..; increments[0] is D_1.
  std::vector<double> increments;
  /// rho_j = D_{j+1} / D_j (0 when D_j = 0); ratios[0] is rho_1.
  std::vector<double> ratios;
  /// L^(1+k)_t L^(2+k)_x norm of every iterate.
  std::vector<double> mixed_norms;
  /// False when rho_j >= 1 for three consecutive j (iteration stops there).
  bool contracting = true;
};

/// u^(0) = linear solution, u^(j+1) = duhamel_map(u^(j)), for max_iters
/// steps. Rejects problems whose exponent conditions fail.
PicardResult picard_iterate(const NonlinearProblem& problem, std::size_t max_iters, bool keep_iterates = true);

/// Contraction criterion: six iterations, all rho_j < 1/2; overflow counts as failure.
bool contraction_holds(const NonlinearProblem& problem);

struct ThresholdTrace {
  double threshold = 0.0;
  std::vector<std::pair<double, bool>> trace;
  /// Every traced scale below a passing scale also passed.
  bool monotone = true;
};

/// Geometric bisection of data_scale in [lo, hi] for the contraction
/// criterion; threshold is the largest passing scale found (hi if hi
/// passes, 0 if lo fails).
ThresholdTrace small_data_threshold(NonlinearProblem problem, double lo, double hi, int steps = 12);

/// Converged solutions at M_t, 2 M_t, 4 M_t compared at the coarse nodes:
/// ||u_M - u_2M|| / ||u_2M - u_4M||.
double time_refinement_ratio(NonlinearProblem problem, std::size_t iterations = 8);

}  // namespace dispersive
