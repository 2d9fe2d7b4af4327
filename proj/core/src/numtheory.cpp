// SPDX-License-Identifier: Apache-2.0
#include "opsparse/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opsparse {

std::vector<Rational> farey_sequence(std::uint64_t order) {
  if (order == 0) throw std::invalid_argument("Farey order must be positive");
  std::vector<Rational> out{{0, 1}};
  // In-order walk between the bounds 0/1 and 1/1: the mediant of the bounds
  // is the node, its subtrees lie between it and either bound.
  struct Frame {
    Rational left;
    Rational right;
    bool expanded;
  };
  std::vector<Frame> stack{{{0, 1}, {1, 1}, false}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const Rational mid{f.left.p + f.right.p, f.left.q + f.right.q};
    if (mid.q > order) continue;
    if (f.expanded) {
      out.push_back(mid);
      continue;
    }
    stack.push_back({mid, f.right, false});
    stack.push_back({f.left, f.right, true});
    stack.push_back({f.left, mid, false});
  }
  out.push_back({1, 1});
  return out;
}

bool BadIntervalSet::contains(double y) const {
  auto it = std::upper_bound(intervals.begin(), intervals.end(), y,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals.begin()) return false;
  return std::prev(it)->contains(y);
}

BadIntervalSet bad_intervals(std::size_t n, double eps) {
  if (n < 2) throw std::invalid_argument("bad_intervals requires N >= 2");
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0, 1]");
  BadIntervalSet s;
  s.eps = eps;
  s.n = n;
  s.order = static_cast<std::uint64_t>(std::ceil(4.0 / eps));
  s.centers = farey_sequence(s.order);
  const double half = 1.0 / static_cast<double>(n);
  s.raw.reserve(s.centers.size());
  for (const Rational& c : s.centers) s.raw.push_back({c.value() - half, c.value() + half});
  // Centers are ascending, so the raw intervals are already sorted.
  for (const Interval& iv : s.raw) {
    if (!s.intervals.empty() && iv.lo <= s.intervals.back().hi) {
      s.intervals.back().hi = std::max(s.intervals.back().hi, iv.hi);
    } else {
      s.intervals.push_back(iv);
    }
  }
  return s;
}

double orbit_discrepancy(double y, std::size_t n) {
  if (n == 0) return 0.0;
  std::vector<double> u(n);
  for (std::size_t x = 0; x < n; ++x) {
    const double v = static_cast<double>(x) * y;
    u[x] = v - std::floor(v);
  }
  std::sort(u.begin(), u.end());
  // With a_k = k/N - u_k (k in sorted order):
  //   closed window [u_i, u_j]:     (j-i+1)/N - (u_j-u_i) = a_j - a_i + 1/N, i <= j
  //   open gap (u_i, u_j):          (u_j-u_i) - (j-i-1)/N = a_i - a_j + 1/N, i < j
  //   [0, u_j) and (u_i, 1):        -a_j and a_i + 1/N
  // Ties are harmless: a non-canonical index only shrinks the value.
  const double inv = 1.0 / static_cast<double>(n);
  double best = 0.0;
  double min_a = 0.0;
  double max_a = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = static_cast<double>(k) * inv - u[k];
    if (k == 0) {
      min_a = max_a = a;
      best = std::max(best, inv);
    } else {
      best = std::max(best, a - std::min(min_a, a) + inv);
      best = std::max(best, max_a - a + inv);
      min_a = std::min(min_a, a);
      max_a = std::max(max_a, a);
    }
    best = std::max(best, -a);
    best = std::max(best, a + inv);
  }
  return best;
}

bool is_good_bruteforce(double y, std::size_t n, double eps) {
  return orbit_discrepancy(y, n) <= eps;
}

}  // namespace opsparse
