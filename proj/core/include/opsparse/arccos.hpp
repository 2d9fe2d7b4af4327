// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>

#include "opsparse/numtheory.hpp"

namespace opsparse {

/// Noisy access to (cos(w theta) +- eps0) / (1 +- eps0) for an unknown theta.
using CosQuery = std::function<double(std::uint64_t w)>;

class ArcCosError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Radius of arccos((cos t +- eps) / (1 +- eps)) around t: 2 sqrt(5 eps).
double arccos_radius(double eps);

/// Candidates for theta from one query at stretch w: a is on the branch
/// (r + 2 pi z) / w, b on (-r + 2 pi z) / w, both restricted to S widened by
/// radius / w and clipped to [0, pi].
std::pair<std::optional<double>, std::optional<double>> refine(const CosQuery& q, std::uint64_t w,
                                                               Interval s, double radius);

struct ArcCosResult {
  Interval interval;
  std::size_t queries = 0;
  std::uint64_t max_stretch = 0;
  /// Stages where both branches survived and a second stretch was used.
  std::size_t requeries = 0;
};

/// Narrows theta to an interval of width 2 rho / 2^tau, rho = arccos_radius(eps0),
/// using queries at stretches up to 1.5 * 2^tau.  Requires rho < pi/22.
/// Throws ArcCosError when a stage leaves no usable candidate.
ArcCosResult approx_arccos(const CosQuery& q, unsigned tau, double eps0);

}  // namespace opsparse
