#include "dispersive/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dispersive/fft.hpp"

namespace dispersive {

namespace {

std::vector<std::size_t> shape(const GridSpec& spec) {
  return std::vector<std::size_t>(static_cast<std::size_t>(spec.n), spec.N);
}

}  // namespace

void GridSpec::validate() const {
  if (n != 1 && n != 2) throw std::invalid_argument("grid dimension must be 1 or 2 (got " + std::to_string(n) + ")");
  if (N < 2 || !std::has_single_bit(N)) throw std::invalid_argument("grid size N must be a power of two >= 2");
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("grid length L must be positive");
}

double GridSpec::coordinate(std::size_t j) const { return static_cast<double>(j) * spacing() - 0.5 * L; }

double GridSpec::frequency(std::size_t m) const {
  const double signed_index = m < N / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(N);
  return 2.0 * std::numbers::pi * signed_index / L;
}

double GridSpec::nyquist() const { return std::numbers::pi * static_cast<double>(N) / L; }

std::vector<double> GridSpec::frequency_norms() const {
  std::vector<double> out(size());
  if (n == 1) {
    for (std::size_t m = 0; m < N; ++m) out[m] = std::abs(frequency(m));
  } else {
    for (std::size_t a = 0; a < N; ++a) {
      const double xa = frequency(a);
      for (std::size_t b = 0; b < N; ++b) out[a * N + b] = std::hypot(xa, frequency(b));
    }
  }
  return out;
}

std::vector<std::complex<double>> to_spectrum(const GridSpec& spec, std::vector<std::complex<double>> values) {
  const auto dims = shape(spec);
  fft::forward(values, dims);
  return values;
}

std::vector<std::complex<double>> from_spectrum(const GridSpec& spec, std::vector<std::complex<double>> spectrum) {
  const auto dims = shape(spec);
  fft::inverse(spectrum, dims);
  return spectrum;
}

GridField::GridField(GridSpec spec) : spec_(spec) {
  spec_.validate();
  values_.assign(spec_.size(), Value{});
}

GridField::GridField(GridSpec spec, std::vector<Value> values) : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.size()) throw std::invalid_argument("field size does not match grid");
}

GridField GridField::sample(GridSpec spec, const std::function<Value(double, double)>& f) {
  GridField out(spec);
  if (spec.n == 1) {
    for (std::size_t j = 0; j < spec.N; ++j) out.values_[j] = f(spec.coordinate(j), 0.0);
  } else {
    for (std::size_t a = 0; a < spec.N; ++a) {
      const double x = spec.coordinate(a);
      for (std::size_t b = 0; b < spec.N; ++b) out.values_[a * spec.N + b] = f(x, spec.coordinate(b));
    }
  }
  return out;
}

GridField GridField::from_spectrum(GridSpec spec, std::vector<Value> spectrum) {
  spec.validate();
  if (spectrum.size() != spec.size()) throw std::invalid_argument("spectrum size does not match grid");
  return GridField(spec, dispersive::from_spectrum(spec, std::move(spectrum)));
}

std::vector<GridField::Value> GridField::spectrum() const { return to_spectrum(spec_, values_); }

GridField GridField::apply_radial_multiplier(const std::function<Value(double)>& m) const {
  std::vector<Value> hat = spectrum();
  const std::vector<double> norms = spec_.frequency_norms();
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const Value factor = m(norms[i]);
    if (!std::isfinite(factor.real()) || !std::isfinite(factor.imag())) {
      throw std::domain_error("non-finite Fourier multiplier at |xi| = " + std::to_string(norms[i]));
    }
    hat[i] *= factor;
  }
  return from_spectrum(spec_, std::move(hat));
}

double GridField::max_abs() const {
  double out = 0.0;
  for (const Value& v : values_) out = std::max(out, std::abs(v));
  return out;
}

double GridField::lp_norm(double p) const {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm needs p >= 1");
  if (std::isinf(p)) return max_abs();
  const double cell = std::pow(spec_.spacing(), spec_.n);
  double sum = 0.0;
  if (p == 2.0) {
    for (const Value& v : values_) sum += std::norm(v);
    return std::sqrt(cell * sum);
  }
  for (const Value& v : values_) sum += std::pow(std::abs(v), p);
  return std::pow(cell * sum, 1.0 / p);
}

double GridField::spectral_l2_norm() const {
  const std::vector<Value> hat = spectrum();
  double sum = 0.0;
  for (const Value& v : hat) sum += std::norm(v);
  const double cell = std::pow(spec_.spacing(), spec_.n);
  return std::sqrt(cell * sum / static_cast<double>(spec_.size()));
}

void GridField::require_same_grid(const GridField& other) const {
  if (!(spec_ == other.spec_)) throw std::invalid_argument("fields live on different grids");
}

GridField GridField::operator+(const GridField& other) const {
  require_same_grid(other);
  std::vector<Value> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.values_[i];
  return GridField(spec_, std::move(out));
}

GridField GridField::operator-(const GridField& other) const {
  require_same_grid(other);
  std::vector<Value> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= other.values_[i];
  return GridField(spec_, std::move(out));
}

GridField GridField::operator*(double scale) const {
  std::vector<Value> out(values_);
  for (Value& v : out) v *= scale;
  return GridField(spec_, std::move(out));
}

GridField spectral_refine(const GridField& field) {
  const GridSpec& coarse = field.spec();
  GridSpec fine = coarse;
  fine.N = 2 * coarse.N;
  const std::vector<GridField::Value> hat = field.spectrum();
  std::vector<GridField::Value> out(fine.size());
  const double gain = std::pow(2.0, coarse.n);
  auto map_index = [&](std::size_t m) -> std::ptrdiff_t {
    if (m == coarse.N / 2) return -1;
    return m < coarse.N / 2 ? static_cast<std::ptrdiff_t>(m) : static_cast<std::ptrdiff_t>(m + coarse.N);
  };
  if (coarse.n == 1) {
    for (std::size_t m = 0; m < coarse.N; ++m) {
      const std::ptrdiff_t f = map_index(m);
      if (f >= 0) out[static_cast<std::size_t>(f)] = gain * hat[m];
    }
  } else {
    for (std::size_t a = 0; a < coarse.N; ++a) {
      const std::ptrdiff_t fa = map_index(a);
      if (fa < 0) continue;
      for (std::size_t b = 0; b < coarse.N; ++b) {
        const std::ptrdiff_t fb = map_index(b);
        if (fb < 0) continue;
        out[static_cast<std::size_t>(fa) * fine.N + static_cast<std::size_t>(fb)] = gain * hat[a * coarse.N + b];
      }
    }
  }
  return GridField::from_spectrum(fine, std::move(out));
}

}  // namespace dispersive
