// SPDX-License-Identifier: Apache-2.0
#include "opsparse/dct_bridge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace opsparse {

namespace {

constexpr double kPi = std::numbers::pi;

cplx omega_power(std::size_t m, std::size_t e) {
  const std::size_t r = e % m;
  const double a = -2.0 * kPi * static_cast<double>(r) / static_cast<double>(m);
  return {std::cos(a), std::sin(a)};
}

bool is_pow2(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

}  // namespace

std::vector<cplx> dft(std::span<const cplx> in) {
  const std::size_t m = in.size();
  std::vector<cplx> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (in[k] != 0.0) acc += in[k] * omega_power(m, j * k % m);
    }
    out[j] = acc;
  }
  return out;
}

std::vector<cplx> fft(std::span<const cplx> in) {
  const std::size_t m = in.size();
  if (!is_pow2(m)) return dft(in);
  std::vector<cplx> a(in.begin(), in.end());
  for (std::size_t i = 1, j = 0; i < m; ++i) {
    std::size_t bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      const cplx w = omega_power(len, k);
      for (std::size_t i = 0; i < m; i += len) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
  return a;
}

std::vector<double> chebyshev_transform_direct(std::span<const double> c) {
  const std::size_t n = c.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      // Reduce l (2j+1) mod 4N so the cosine argument stays small.
      const std::size_t e = (l * (2 * j + 1)) % (4 * n);
      acc += c[l] * std::cos(kPi * static_cast<double>(e) / (2.0 * static_cast<double>(n)));
    }
    out[j] = acc;
  }
  return out;
}

EmbeddedSignal embed(std::span<const double> c) {
  const std::size_t n = c.size();
  if (n == 0) throw std::invalid_argument("embed: empty input");
  const std::size_t m = 4 * n;
  // x[0] = 2 c[0], x[j] = x[4N - j] = c[j]; y[j] = x[j - N mod 4N];
  // f[j] = omega_{4N}^j y[j] for j < 2N.  y vanishes outside [1, 2N).
  EmbeddedSignal s;
  s.source_length = n;
  s.f.assign(2 * n, 0.0);
  auto put = [&](std::size_t xi, double v) {
    const std::size_t j = (xi + n) % m;
    s.f.at(j) += omega_power(m, j) * v;
  };
  put(0, 2.0 * c[0]);
  for (std::size_t j = 1; j < n; ++j) {
    put(j, c[j]);
    put(m - j, c[j]);
  }
  return s;
}

std::vector<double> extract(std::span<const cplx> fhat, double tol) {
  if (fhat.empty() || fhat.size() % 2 != 0) {
    throw std::invalid_argument("extract: input length must be 2N");
  }
  const std::size_t n = fhat.size() / 2;
  double scale = 0.0;
  for (const cplx& v : fhat) scale = std::max(scale, std::abs(v));
  const double limit = tol * std::max(scale, 1e-300);
  // f_hat[j] = 2 omega_{4N}^{(2j+1)N} c_hat[min(j, 2N-1-j)], and
  // omega_{4N}^{(2j+1)N} = (-i)^{2j+1}.
  auto unmodulate = [](const cplx& v, std::size_t j) {
    const cplx phase = ((2 * j + 1) % 4 == 1) ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
    return v / (2.0 * phase);
  };
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx a = unmodulate(fhat[j], j);
    const cplx b = unmodulate(fhat[2 * n - 1 - j], 2 * n - 1 - j);
    if (std::abs(a - b) > limit || std::abs(a.imag()) > limit || std::abs(b.imag()) > limit) {
      throw BridgeError("extract: spectrum is not the image of a real Chebyshev transform");
    }
    out[j] = 0.5 * (a.real() + b.real());
  }
  return out;
}

std::vector<double> chebyshev_transform_fourier(std::span<const double> c,
                                                const FourierOracle& oracle) {
  const EmbeddedSignal s = embed(c);
  const std::vector<cplx> fhat = oracle(s.f);
  if (fhat.size() != s.f.size()) throw std::invalid_argument("Fourier oracle changed the length");
  return extract(fhat, 1e-8);
}

}  // namespace opsparse
