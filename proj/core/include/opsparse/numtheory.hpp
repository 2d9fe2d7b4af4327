// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace opsparse {

struct Rational {
  std::uint64_t p = 0;
  std::uint64_t q = 1;
  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double y) const { return y >= lo && y <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Reduced fractions p/q in [0, 1] with q <= order, ascending, listed by an
/// in-order walk of the Stern-Brocot tree.
std::vector<Rational> farey_sequence(std::uint64_t order);

/// Neighbourhoods of the small-denominator rationals that contain every
/// eps-bad member of a scattered sequence in [0, 1).
struct BadIntervalSet {
  double eps = 1.0;
  std::size_t n = 0;
  std::uint64_t order = 0;          // ceil(4 / eps)
  std::vector<Rational> centers;    // Farey sequence of that order
  std::vector<Interval> raw;        // [c - 1/N, c + 1/N] per center
  std::vector<Interval> intervals;  // raw, sorted and merged

  bool contains(double y) const;
};

BadIntervalSet bad_intervals(std::size_t n, double eps);

/// sup over windows [l, r] of | #{x < N : x y mod 1 in [l, r]} / N - (r - l) |,
/// computed exactly from the sorted orbit.
double orbit_discrepancy(double y, std::size_t n);

/// y is eps-good iff orbit_discrepancy(y, n) <= eps.
bool is_good_bruteforce(double y, std::size_t n, double eps);

}  // namespace opsparse
