#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dispersive {

/// A radial phase r -> phi(r) with closed-form first and second derivatives
/// and the declared homogeneity / curvature orders at high (r >= 1) and low
/// (r < 1) frequency.
///
/// `alpha1` / `alpha2` are absent when the curvature condition is not claimed
/// (e.g. the wave phase, whose second derivative vanishes).
struct DispersionRelation {
  using Function = std::function<double(double)>;

  std::string name;
  Function phi;
  Function dphi;
  Function d2phi;
  double m1 = 1.0;
  double m2 = 1.0;
  std::optional<double> alpha1;
  std::optional<double> alpha2;
};

/// Builtins: klein_gordon, beam, schrodinger4, wave, and power(m) (written
/// "power(2)", "power(1.5)", ...). Throws std::invalid_argument otherwise.
DispersionRelation builtin(std::string_view name);

DispersionRelation power_relation(double m);

std::vector<std::string> builtin_names();

/// Builds a relation from expression strings in the variable `r`.
DispersionRelation custom_relation(std::string name, std::string_view phi, std::string_view dphi,
                                   std::string_view d2phi, double m1, double m2,
                                   std::optional<double> alpha1, std::optional<double> alpha2);

// ---------------------------------------------------------------------------
// Hypothesis verification

enum class Hypothesis { kH1 = 0, kH2 = 1, kH3 = 2, kH4 = 3 };

std::string_view to_string(Hypothesis h);

struct HypothesisRecord {
  Hypothesis id = Hypothesis::kH1;
  /// False when the relation does not declare the exponent this hypothesis
  /// needs (alpha1 for H3, alpha2 for H4). Undeclared hypotheses never pass.
  bool declared = true;
  bool pass = false;
  /// Raw comparability ratio |phi'(r)| / r^(m-1) (H1, H2) or
  /// |phi''(r)| / r^(alpha-2) (H3, H4) over the relevant half-line.
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  /// Best-fit implied constant sqrt(ratio_min * ratio_max); the pass test is
  /// applied to ratio / constant so that the verdict does not depend on the
  /// normalisation of phi.
  double constant = 0.0;
  double normalized_min = 0.0;
  double normalized_max = 0.0;
  /// H1/H2 only: max over the samples of |phi^(a)(r)| r^(a-m) / constant for
  /// a in {2, 3}.
  double derivative_bound_max = 0.0;
  std::size_t samples = 0;
  std::string note;
};

struct HypothesisReport {
  std::string relation;
  double comparability_constant = 10.0;
  std::array<HypothesisRecord, 4> records;
  /// alpha1 <= m1 when H1 and H3 pass; alpha2 >= m2 when H2 and H4 pass.
  bool metadata_consistent = true;

  const HypothesisRecord& operator[](Hypothesis h) const {
    return records[static_cast<std::size_t>(h)];
  }
};

/// Dyadic points 2^j for j in [j_lo, j_hi] with `per_octave - 1` intermediate
/// geometric samples between consecutive dyadic points.
std::vector<double> dyadic_grid(int j_lo = -20, int j_hi = 20, int per_octave = 4);

/// Rejects C <= 1 and any r_grid entry that is not strictly positive.
HypothesisReport verify_hypotheses(const DispersionRelation& rel, double comparability_constant,
                                   std::span<const double> r_grid);

// ---------------------------------------------------------------------------
// Predicted decay exponents

enum class Branch {
  kA,  ///< |t|^-theta 2^(k(n - m theta)),        0 <= theta <= (n-1)/2
  kB,  ///< curvature-assisted branch,              0 <= theta <= 1
};

struct ExponentPair {
  double time_exp = 0.0;
  double freq_exp = 0.0;
};

struct BestExponents {
  ExponentPair exponents;
  Branch branch = Branch::kA;
  double theta = 0.0;
};

/// Unchecked closed forms. `m` is the homogeneity order, `alpha` the
/// curvature order; these are shared by the high- and low-frequency checks.
namespace exponents {
ExponentPair branch_a(double m, int n, double theta);
ExponentPair branch_b(double m, double alpha, int n, double theta);
}  // namespace exponents

ExponentPair predicted_high_exponents(const DispersionRelation& rel, int n, double theta,
                                      Branch branch);
ExponentPair predicted_low_exponents(const DispersionRelation& rel, int n, double theta,
                                     Branch branch);

/// Most negative time exponent over both branches and every admissible theta.
BestExponents best_high_exponents(const DispersionRelation& rel, int n);
BestExponents best_low_exponents(const DispersionRelation& rel, int n);

/// Aggregate decay rate of the summed low-frequency kernel:
/// min(n/m2, (n-1)/2), sharpened to min(n/m2, n/2) when alpha2 == m2.
double predicted_lowfreq_aggregate(const DispersionRelation& rel, int n);

}  // namespace dispersive
