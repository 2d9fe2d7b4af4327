// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "opsparse/oracle.hpp"

namespace opsparse::tools {

struct SynthOptions {
  std::size_t n = 0;
  std::size_t k = 1;
  /// Spikes are more than sigma * n indices apart; 0 selects
  /// default_sigma(k).
  double sigma = 0.0;
  /// ||w_hat|| = noise * large(k, x_hat).
  double noise = 0.0;
};

struct SynthSignal {
  std::vector<std::size_t> support;  // ascending
  std::vector<double> values;        // x_hat at support
  std::vector<double> xhat;          // dense x_hat, length n
  std::vector<double> noisy;         // x_hat + w_hat
};

/// 3 gamma / (2 pi) with gamma = default_gamma(k).
double default_sigma(std::size_t k);

/// Smallest index distance strictly greater than sigma * n.
std::size_t min_separation(std::size_t n, double sigma);

/// Support drawn uniformly among the k-subsets whose consecutive gaps are at
/// least min_separation(n, sigma).  Magnitudes 1 - 0.2 i / (k - 1) with random
/// signs.  Throws std::invalid_argument when no such support exists.
SynthSignal synthesize(const SynthOptions& opts, Rng& rng);

}  // namespace opsparse::tools
