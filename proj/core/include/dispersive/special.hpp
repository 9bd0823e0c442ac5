#pragma once

namespace dispersive {

/// Bessel order restricted to integers and half-integers >= -1/2, stored as
/// twice the order so that equality is exact.
class BesselOrder {
 public:
  static constexpr int kMaxTwiceOrder = 12;

  /// Throws std::invalid_argument unless 2*nu is an integer in [-1, 12].
  static BesselOrder from_twice(int twice_nu);
  static BesselOrder from_value(double nu);
  /// nu = (n - 2) / 2, the order attached to the radial Fourier transform in
  /// dimension n.
  static BesselOrder for_dimension(int n);

  int twice() const { return twice_; }
  double value() const { return 0.5 * twice_; }
  bool is_integer() const { return twice_ % 2 == 0; }

  BesselOrder next() const { return from_twice(twice_ + 2); }

  friend bool operator==(BesselOrder, BesselOrder) = default;

 private:
  explicit BesselOrder(int twice) : twice_(twice) {}
  int twice_;
};

/// J_nu(r), r >= 0, absolute error below 1e-10 on [0, 1e4].
///
/// Half-integer orders use the closed spherical forms (ascending series
/// below r = max(1, 2 nu)); integer orders use the ascending series for
/// r <= max(12, 2 nu), Miller's backward recurrence in the transition
/// range and the Hankel asymptotic expansion for large r.
double bessel_j(BesselOrder nu, double r);

/// z^-nu J_nu(z), continuous at z = 0 where it equals 1 / (2^nu Gamma(nu+1)).
double bessel_j_scaled(BesselOrder nu, double z);

/// The smooth cutoff pair generating the Littlewood-Paley projectors:
///   Phi(r) = f(2 - r) / (f(2 - r) + f(r - 1)),  f(s) = exp(-1/s) for s > 0,
///   psi(r) = Phi(r) - Phi(2 r).
/// Phi == 1 on [0, 1], Phi == 0 on [2, inf), supp psi = [1/2, 2].
struct BumpPair {
  /// Highest derivative order exercised by the test suite.
  static constexpr int kTestedDerivativeOrder = 4;

  static double Phi(double r);
  static double psi(double r);

  /// Integral of psi over [1/2, 2]; equals 3/4 because Phi(3 - r) = 1 - Phi(r).
  static constexpr double kPsiIntegral = 0.75;
};

double phi_bump(double r);
double psi_bump(double r);

/// psi(2^-k |xi|), the symbol of the dyadic projector at scale k.
double lp_symbol(int k, double xi_norm);

/// Phi(|xi|), the symbol of the low-frequency projector.
double low_symbol(double xi_norm);

}  // namespace dispersive
