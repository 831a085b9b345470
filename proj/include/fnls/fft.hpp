#pragma once

#include <complex>
#include <span>

namespace fnls::fft {

// Unnormalized forward DFT, X_k = sum_j x_j exp(-2 pi i jk/n).
void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
// Inverse DFT including the 1/n factor.
void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

void forward_inplace(std::span<std::complex<double>> data);
void inverse_inplace(std::span<std::complex<double>> data);

}  // namespace fnls::fft
