// SPDX-License-Identifier: Apache-2.0
#include "opsparse_tools/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "opsparse/ksparse.hpp"

namespace opsparse::tools {

double default_sigma(std::size_t k) {
  return 3.0 * default_gamma(k) / (2.0 * std::numbers::pi);
}

std::size_t min_separation(std::size_t n, double sigma) {
  return static_cast<std::size_t>(std::floor(sigma * static_cast<double>(n))) + 1;
}

SynthSignal synthesize(const SynthOptions& opts, Rng& rng) {
  const std::size_t n = opts.n, k = opts.k;
  if (n == 0 || k == 0 || k > n) throw std::invalid_argument("synthesize: need 1 <= k <= n");
  if (!(opts.noise >= 0.0) || !std::isfinite(opts.noise)) {
    throw std::invalid_argument("synthesize: noise must be finite and non-negative");
  }
  const double sigma = opts.sigma > 0.0 ? opts.sigma : default_sigma(k);
  const std::size_t gap = k == 1 ? 1 : min_separation(n, sigma);
  const std::size_t shrink = (k - 1) * (gap - 1);
  if (shrink + k > n) throw std::invalid_argument("synthesize: spikes do not fit at this separation");

  // Floyd's sampling of k distinct u in [0, m), then p_i = u_i + i (gap - 1).
  const std::size_t m = n - shrink;
  std::set<std::size_t> picked;
  for (std::size_t j = m - k; j < m; ++j) {
    const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    if (!picked.insert(t).second) picked.insert(j);
  }

  SynthSignal s;
  s.xhat.assign(n, 0.0);
  std::size_t i = 0;
  for (std::size_t u : picked) {
    const std::size_t pos = u + i * (gap - 1);
    const double mag = k == 1 ? 1.0 : 1.0 - 0.2 * static_cast<double>(i) / static_cast<double>(k - 1);
    const double v = (rng() & 1u) ? -mag : mag;
    s.support.push_back(pos);
    s.values.push_back(v);
    s.xhat[pos] = v;
    ++i;
  }

  s.noisy = s.xhat;
  if (opts.noise > 0.0) {
    std::normal_distribution<double> gauss;
    std::vector<double> w(n);
    double norm2 = 0.0;
    for (double& x : w) {
      x = gauss(rng);
      norm2 += x * x;
    }
    const double scale = opts.noise * large(k, s.xhat) / std::sqrt(norm2);
    for (std::size_t j = 0; j < n; ++j) s.noisy[j] += scale * w[j];
  }
  return s;
}

}  // namespace opsparse::tools
