#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace hardylab {

/// In-place radix-2 DFT, size must be a power of two.
/// sign = -1: a_k <- sum_n a_n e^{-2 pi i n k / N} (forward, unnormalized)
/// sign = +1: the conjugate transform; forward then backward gives N * id.
void fft(std::vector<std::complex<double>>& a, int sign);

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
std::size_t next_pow2(std::size_t n);

}  // namespace hardylab
