// SPDX-License-Identifier: Apache-2.0
#include "opsparse/jacobi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace opsparse {

JacobiParams::JacobiParams(double a, double b) : alpha(a), beta(b) {
  if (!(a > -1.0) || !(b > -1.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("Jacobi parameters must satisfy alpha > -1 and beta > -1");
  }
}

double JacobiParams::phase() const { return -(alpha + 0.5) * std::numbers::pi / 2.0; }

double JacobiParams::n_shift() const { return (alpha + beta + 1.0) / 2.0; }

double eval_unnormalized(const JacobiParams& p, std::size_t j, double x) {
  const double a = p.alpha;
  const double b = p.beta;
  if (j == 0) return 1.0;
  double prev = 1.0;
  double cur = 0.5 * (a + b + 2.0) * x + 0.5 * (a - b);
  for (std::size_t n = 2; n <= j; ++n) {
    const double k = static_cast<double>(n);
    const double s = 2.0 * k + a + b;
    const double c0 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double next = (c1 * cur - c2 * prev) / c0;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

// Integral of the weight over [-1, 1] by tanh-sinh quadrature.  The
// two-argument form passes the signed distance to the nearest endpoint so the
// endpoint singularities are resolved below machine epsilon.
double weight_integral(const JacobiParams& p) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&](double x, double xc) {
    double one_minus = 1.0 - x;
    double one_plus = 1.0 + x;
    if (xc < 0) {
      one_plus = -xc;
    } else if (xc > 0) {
      one_minus = xc;
    }
    return std::pow(one_minus, p.alpha) * std::pow(one_plus, p.beta);
  };
  return integrator.integrate(f, -1.0, 1.0);
}

}  // namespace

double norm_factor(const JacobiParams& p, std::size_t j) { return std::exp(log_norm_factor(p, j)); }

double log_norm_factor(const JacobiParams& p, std::size_t j) {
  const double a = p.alpha;
  const double b = p.beta;
  const double k = static_cast<double>(j);
  const double s = a + b;
  if (2.0 * k + s + 1.0 == 0.0 || k + s + 1.0 <= 0.0) {
    return std::log(weight_integral(p));
  }
  using boost::math::lgamma;
  return (s + 1.0) * std::numbers::ln2 - std::log(2.0 * k + s + 1.0) + lgamma(k + a + 1.0) +
         lgamma(k + b + 1.0) - lgamma(k + 1.0) - lgamma(k + s + 1.0);
}

double eval_orthonormal(const JacobiParams& p, std::size_t j, double x) {
  return OrthonormalRecurrence(p, j).value(j, x);
}

double eval_derivative(const JacobiParams& p, std::size_t j, double x) {
  if (j == 0) return 0.0;
  const JacobiParams shifted(p.alpha + 1.0, p.beta + 1.0);
  return 0.5 * (static_cast<double>(j) + p.alpha + p.beta + 1.0) *
         eval_unnormalized(shifted, j - 1, x);
}

OrthonormalRecurrence::OrthonormalRecurrence(const JacobiParams& p, std::size_t max_degree)
    : params_(p), a_(max_degree + 2, 0.0), inv_a_(max_degree + 2, 0.0), b_(max_degree + 1, 0.0) {
  const double al = p.alpha;
  const double be = p.beta;
  const double s = al + be;
  b_[0] = (be - al) / (s + 2.0);
  for (std::size_t j = 1; j <= max_degree; ++j) {
    const double t = 2.0 * static_cast<double>(j) + s;
    b_[j] = (be * be - al * al) / (t * (t + 2.0));
  }
  for (std::size_t j = 1; j <= max_degree + 1; ++j) {
    const double k = static_cast<double>(j);
    const double t = 2.0 * k + s;
    double a2;
    if (j == 1) {
      // The general form has a removable 0/0 at alpha + beta = -1.
      a2 = 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + s) * (2.0 + s) * (3.0 + s));
    } else {
      a2 = 4.0 * k * (k + al) * (k + be) * (k + s) / (t * t * (t + 1.0) * (t - 1.0));
    }
    a_[j] = std::sqrt(a2);
    inv_a_[j] = 1.0 / a_[j];
  }
  p0_ = 1.0 / std::sqrt(norm_factor(p, 0));
}

double OrthonormalRecurrence::value(std::size_t j, double x) const {
  if (j > max_degree()) throw std::out_of_range("degree exceeds recurrence table");
  double prev = 0.0;
  double cur = p0_;
  for (std::size_t n = 0; n < j; ++n) {
    const double next = ((x - b_[n]) * cur - a_[n] * prev) * inv_a_[n + 1];
    prev = cur;
    cur = next;
  }
  return cur;
}

void OrthonormalRecurrence::fill(double x, std::span<double> out) const {
  if (out.empty()) return;
  if (out.size() > max_degree() + 1) throw std::out_of_range("degree exceeds recurrence table");
  double prev = 0.0;
  double cur = p0_;
  out[0] = cur;
  for (std::size_t n = 0; n + 1 < out.size(); ++n) {
    const double next = ((x - b_[n]) * cur - a_[n] * prev) * inv_a_[n + 1];
    prev = cur;
    cur = next;
    out[n + 1] = cur;
  }
}

namespace {
constexpr std::size_t kLanes = 8;
}

void OrthonormalRecurrence::value_many(std::size_t n, std::span<const double> xs,
                                       std::span<double> out) const {
  if (n > max_degree()) throw std::out_of_range("degree exceeds recurrence table");
  for (std::size_t base = 0; base < xs.size(); base += kLanes) {
    const std::size_t m = std::min(kLanes, xs.size() - base);
    std::array<double, kLanes> x{}, prev{}, cur{};
    for (std::size_t i = 0; i < m; ++i) x[i] = xs[base + i];
    cur.fill(p0_);
    for (std::size_t k = 0; k < n; ++k) {
      const double bk = b_[k], ak = a_[k], ia = inv_a_[k + 1];
      for (std::size_t i = 0; i < kLanes; ++i) {
        const double next = ((x[i] - bk) * cur[i] - ak * prev[i]) * ia;
        prev[i] = cur[i];
        cur[i] = next;
      }
    }
    for (std::size_t i = 0; i < m; ++i) out[base + i] = cur[i];
  }
}

void OrthonormalRecurrence::sum_squares_many(std::size_t n, std::span<const double> xs,
                                             std::span<double> sumsq,
                                             std::span<double> maxabs) const {
  if (n == 0) {
    std::fill(sumsq.begin(), sumsq.end(), 0.0);
    std::fill(maxabs.begin(), maxabs.end(), 0.0);
    return;
  }
  if (n > max_degree() + 1) throw std::out_of_range("degree exceeds recurrence table");
  for (std::size_t base = 0; base < xs.size(); base += kLanes) {
    const std::size_t m = std::min(kLanes, xs.size() - base);
    std::array<double, kLanes> x{}, prev{}, cur{}, acc{}, mx{};
    for (std::size_t i = 0; i < m; ++i) x[i] = xs[base + i];
    cur.fill(p0_);
    acc.fill(p0_ * p0_);
    mx.fill(std::abs(p0_));
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double bk = b_[k], ak = a_[k], ia = inv_a_[k + 1];
      for (std::size_t i = 0; i < kLanes; ++i) {
        const double next = ((x[i] - bk) * cur[i] - ak * prev[i]) * ia;
        prev[i] = cur[i];
        cur[i] = next;
        acc[i] += next * next;
        mx[i] = std::max(mx[i], std::abs(next));
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      sumsq[base + i] = acc[i];
      maxabs[base + i] = mx[i];
    }
  }
}

}  // namespace opsparse
