// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace opsparse {

using cplx = std::complex<double>;

/// Length-M DFT with omega_M = exp(-2 pi i / M): out[j] = sum_m in[m] omega^{jm}.
using FourierOracle = std::function<std::vector<cplx>(std::span<const cplx>)>;

/// Dense O(M^2) DFT.
std::vector<cplx> dft(std::span<const cplx> in);
/// Iterative radix-2 FFT; lengths that are not powers of two use dft().
std::vector<cplx> fft(std::span<const cplx> in);

/// c_hat[j] = sum_l c[l] cos(pi l (2j+1) / (2N)), evaluated directly.
std::vector<double> chebyshev_transform_direct(std::span<const double> c);

/// Length-2N signal whose DFT carries the Chebyshev transform of c.
struct EmbeddedSignal {
  std::vector<cplx> f;
  std::size_t source_length = 0;
};

EmbeddedSignal embed(std::span<const double> c);

class BridgeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Recovers c_hat from the length-2N DFT of embed(c).  Each c_hat[j] appears
/// twice (bins j and 2N-1-j); throws BridgeError if the two copies disagree by
/// more than tol relative to max |f_hat|, or if either copy is not real.
std::vector<double> extract(std::span<const cplx> fhat, double tol = 1e-8);

/// extract(oracle(embed(c).f)).
std::vector<double> chebyshev_transform_fourier(std::span<const double> c,
                                                const FourierOracle& oracle = fft);

}  // namespace opsparse
