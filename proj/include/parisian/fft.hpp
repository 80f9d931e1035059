#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace parisian {

// In-place iterative radix-2 FFT (unnormalized). n must be a power of two.
// Reentrant; no global state, so samplers can run on any number of workers.
void fft_pow2(std::vector<std::complex<double>>& a);

std::size_t next_pow2(std::size_t n);

} // namespace parisian
