// SPDX-License-Identifier: Apache-2.0
// Reference computations used as oracles by the tests.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "opsparse/jacobi.hpp"
#include "opsparse/transform_plan.hpp"

namespace opsparse::testing {

/// Generalised binomial coefficient C(a, m) as a finite product.
inline double binom(double a, std::size_t m) {
  double c = 1.0;
  for (std::size_t i = 1; i <= m; ++i) c *= (a - static_cast<double>(m) + static_cast<double>(i)) / static_cast<double>(i);
  return c;
}

/// P_n^{(a,b)}(x) from the explicit finite sum, independent of any recurrence.
inline double jacobi_explicit(double a, double b, std::size_t n, double x) {
  double s = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    s += binom(n + a, n - k) * binom(n + b, k) * std::pow((x - 1.0) / 2.0, static_cast<double>(k)) *
         std::pow((x + 1.0) / 2.0, static_cast<double>(n - k));
  }
  return s;
}

/// Integral over [-1, 1] of f(x) (1-x)^a (1+x)^b by tanh-sinh quadrature.
template <class F>
double weighted_integral(double a, double b, F f) {
  boost::math::quadrature::tanh_sinh<double> q;
  auto g = [&](double x, double xc) {
    // xc is b - x for x >= 0 and a - x (negative) below, which keeps the
    // singular factor accurate next to either endpoint.
    const double one_minus = x >= 0 ? xc : 1.0 - x;
    const double one_plus = x >= 0 ? 1.0 + x : -xc;
    return f(x) * std::pow(one_minus, a) * std::pow(one_plus, b);
  };
  return q.integrate(g, -1.0, 1.0, 1e-13);
}

/// Dense row-major F assembled from plan.row.
inline std::vector<double> dense_f(const TransformPlan& plan) {
  const std::size_t n = plan.size();
  std::vector<double> f(n * n);
  for (std::size_t l = 0; l < n; ++l) plan.row(l, std::span<double>(f.data() + l * n, n));
  return f;
}

/// F^T diag(b) F for a dense F.
inline std::vector<double> conjugate_diag(const std::vector<double>& f, const std::vector<double>& b,
                                          std::size_t n) {
  std::vector<double> out(n * n, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      const double fi = f[l * n + i] * b[l];
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += fi * f[l * n + j];
    }
  }
  return out;
}

}  // namespace opsparse::testing
