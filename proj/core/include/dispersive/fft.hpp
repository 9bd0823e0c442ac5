#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace dispersive::fft {

/// In-place multidimensional DFT over a row-major array of shape `dims`.
/// forward: u_hat[m] = sum_j u[j] e^{-2 pi i j m / N} (unnormalised).
void forward(std::span<std::complex<double>> data, std::span<const std::size_t> dims);

/// Inverse of `forward`, including the 1 / prod(dims) factor.
void inverse(std::span<std::complex<double>> data, std::span<const std::size_t> dims);

}  // namespace dispersive::fft
