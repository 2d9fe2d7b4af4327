// SPDX-License-Identifier: Apache-2.0
#include "opsparse/arccos.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

namespace opsparse {

namespace {

constexpr double kPi = std::numbers::pi;

Interval clip(Interval s) { return {std::max(s.lo, 0.0), std::min(s.hi, kPi)}; }

}  // namespace

double arccos_radius(double eps) { return 2.0 * std::sqrt(5.0 * eps); }

std::pair<std::optional<double>, std::optional<double>> refine(const CosQuery& q, std::uint64_t w,
                                                               Interval s, double radius) {
  if (w == 0) throw std::invalid_argument("refine: stretch must be positive");
  const double wd = static_cast<double>(w);
  const double r = std::acos(std::clamp(q(w), -1.0, 1.0));
  const Interval wide = clip({s.lo - radius / wd, s.hi + radius / wd});
  std::optional<double> a, b;
  const double za = std::ceil((wd * wide.lo - r) / (2.0 * kPi));
  const double xa = (r + 2.0 * kPi * za) / wd;
  if (xa <= wide.hi) a = std::max(xa, wide.lo);
  const double zb = std::ceil((wd * wide.lo + r) / (2.0 * kPi));
  const double xb = (-r + 2.0 * kPi * zb) / wd;
  if (xb <= wide.hi) b = std::max(xb, wide.lo);
  return {a, b};
}

ArcCosResult approx_arccos(const CosQuery& q, unsigned tau, double eps0) {
  const double rho = arccos_radius(eps0);
  if (!(rho > 0.0 && rho < kPi / 22.0)) {
    throw std::invalid_argument("approx_arccos: noise radius must lie in (0, pi/22)");
  }
  if (tau > 62) throw std::invalid_argument("approx_arccos: tau too large");
  ArcCosResult res;
  auto query = [&](std::uint64_t w) {
    ++res.queries;
    res.max_stretch = std::max(res.max_stretch, w);
    return q(w);
  };

  auto [a0, b0] = refine(query, 1, {0.0, kPi}, rho);
  (void)b0;
  if (!a0) throw ArcCosError("approx_arccos: no candidate at stretch 1");
  Interval s = clip({*a0 - rho, *a0 + rho});

  for (unsigned t = 1; t <= tau; ++t) {
    const std::uint64_t pow_t = std::uint64_t{1} << t;
    const double scale = static_cast<double>(pow_t);
    auto [a, b] = refine(query, pow_t, s, rho);
    // r = 0 makes both branches the same point.
    if (a && b && *a == *b) b.reset();
    if (a && b) {
      // Both branches fit: theta is near a dyadic point h pi / 2^t.  Query at a
      // stretch for which that point is no longer ambiguous.
      const double lo = (s.lo - 4.0 * rho / scale) * scale / kPi;
      const double hi = (s.hi + 4.0 * rho / scale) * scale / kPi;
      const auto h_lo = static_cast<std::uint64_t>(std::max(1.0, std::ceil(lo)));
      const auto h_hi = static_cast<std::uint64_t>(
          std::min(static_cast<double>(pow_t - 1), std::floor(hi)));
      if (h_lo != h_hi) {
        throw ArcCosError("approx_arccos: " + std::to_string(h_hi + 1 - std::min(h_lo, h_hi + 1)) +
                          " dyadic points near the interval at stage " + std::to_string(t));
      }
      const std::uint64_t h = h_lo;
      const unsigned j = static_cast<unsigned>(std::countr_zero(h));
      const std::uint64_t w2 = (std::uint64_t{1} << (t - j - 1)) * ((std::uint64_t{2} << j) + 1);
      ++res.requeries;
      std::tie(a, b) = refine(query, w2, s, rho);
      if (a && b && *a == *b) b.reset();
    }
    if (a.has_value() == b.has_value()) {
      throw ArcCosError("approx_arccos: " + std::string(a ? "two" : "no") +
                        " candidates at stage " + std::to_string(t));
    }
    const double c = a ? *a : *b;
    s = clip({c - rho / scale, c + rho / scale});
  }
  res.interval = s;
  return res;
}

}  // namespace opsparse
