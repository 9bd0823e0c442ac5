#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace dispersive {

/// Periodic box [-L/2, L/2)^n sampled at N points per dimension, n in {1, 2}.
struct GridSpec {
  int n = 1;
  std::size_t N = 256;
  double L = 64.0;

  /// Throws std::invalid_argument unless n in {1, 2}, N a power of two >= 2, L > 0.
  void validate() const;
  double spacing() const { return L / static_cast<double>(N); }
  std::size_t size() const { return n == 1 ? N : N * N; }
  /// Physical coordinate of index j: j h - L/2.
  double coordinate(std::size_t j) const;
  /// Angular frequency of FFT index m: 2 pi (m or m - N) / L.
  double frequency(std::size_t m) const;
  double nyquist() const;
  /// |xi| for every spectral index, row-major.
  std::vector<double> frequency_norms() const;

  bool operator==(const GridSpec&) const = default;
};

/// Complex samples on a GridSpec, row-major for n = 2. Values are immutable
/// through the public interface except via explicit construction.
class GridField {
 public:
  using Value = std::complex<double>;

  explicit GridField(GridSpec spec);
  GridField(GridSpec spec, std::vector<Value> values);

  /// f(x, y); y is 0 for n = 1.
  static GridField sample(GridSpec spec, const std::function<Value(double, double)>& f);
  static GridField from_spectrum(GridSpec spec, std::vector<Value> spectrum);

  const GridSpec& spec() const { return spec_; }
  const std::vector<Value>& values() const { return values_; }
  std::vector<Value> spectrum() const;

  /// Multiplies the spectrum by m(|xi|).
  GridField apply_radial_multiplier(const std::function<Value(double)>& m) const;

  /// Grid-quadrature L^p norm, p in [1, inf]; p = inf is the grid max.
  double lp_norm(double p) const;
  double l2_norm() const { return lp_norm(2.0); }
  /// sqrt(h^n / N^n * sum |u_hat|^2).
  double spectral_l2_norm() const;
  double max_abs() const;

  GridField operator+(const GridField& other) const;
  GridField operator-(const GridField& other) const;
  GridField operator*(double scale) const;

  /// Throws std::invalid_argument when the grids differ.
  void require_same_grid(const GridField& other) const;

 private:
  GridSpec spec_;
  std::vector<Value> values_;
};

/// The same band-limited function on a grid with 2N points per dimension
/// (spectrum zero-padded). The Nyquist row is dropped.
GridField spectral_refine(const GridField& field);

/// Spectrum-domain helpers on raw arrays, shared by the propagator and
/// nonlinear layers to avoid round trips.
std::vector<std::complex<double>> to_spectrum(const GridSpec& spec, std::vector<std::complex<double>> values);
std::vector<std::complex<double>> from_spectrum(const GridSpec& spec, std::vector<std::complex<double>> spectrum);

}  // namespace dispersive
