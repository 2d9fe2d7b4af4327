// SPDX-License-Identifier: Apache-2.0
#include "opsparse/boxcar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace opsparse {

namespace {

constexpr double kPi = std::numbers::pi;
// The ramp of the target sits in the middle fifth of the transition band.
constexpr double kInset = 0.4;

// Integral of (p + q x) cos(r x) over [x0, x1].
double linear_cos_integral(double p, double q, std::size_t r, double x0, double x1) {
  if (!(x1 > x0)) return 0.0;
  if (r == 0) return p * (x1 - x0) + 0.5 * q * (x1 * x1 - x0 * x0);
  const double k = static_cast<double>(r);
  auto F = [&](double x) {
    const double s = std::sin(k * x);
    const double c = std::cos(k * x);
    return p * s / k + q * (x * s / k + c / (k * k));
  };
  return F(x1) - F(x0);
}

}  // namespace

BoxcarFilter BoxcarFilter::from_coefficients(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("filter needs at least one coefficient");
  BoxcarFilter f;
  f.coeffs = std::move(coeffs);
  return f;
}

double eval_chebyshev(std::span<const double> coeffs, double x) {
  if (coeffs.empty()) return 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t r = coeffs.size() - 1; r >= 1; --r) {
    const double b0 = coeffs[r] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs[0] + x * b1 - b2;
}

double eval_boxcar(const BoxcarFilter& f, double x) { return eval_chebyshev(f.coeffs, x); }

std::vector<double> jackson_factors(std::size_t d) {
  // Coefficients of (sin(n x/2)/sin(x/2))^4 are the self-convolution of the
  // triangle sequence n - |k|; its degree 2n-2 is at most d.
  const std::size_t n = d / 2 + 1;
  const std::size_t len = 2 * n - 1;
  std::vector<double> tri(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double k = std::abs(static_cast<double>(i) - static_cast<double>(n - 1));
    tri[i] = static_cast<double>(n) - k;
  }
  const std::size_t centre = 2 * n - 2;
  std::vector<double> g(d + 1, 0.0);
  for (std::size_t r = 0; r <= std::min(d, centre); ++r) {
    // s[centre + r] = sum_i tri[i] tri[centre + r - i]
    double s = 0.0;
    const std::size_t m = centre + r;
    const std::size_t lo = m >= len - 1 ? m - (len - 1) : 0;
    for (std::size_t i = lo; i < len && i <= m; ++i) s += tri[i] * tri[m - i];
    g[r] = s;
  }
  const double g0 = g[0];
  for (double& v : g) v /= g0;
  return g;
}

std::vector<double> trapezoid_coefficients(double center, double inner, double outer,
                                           std::size_t d) {
  auto clip = [](double x) { return std::clamp(x, 0.0, kPi); };
  const double ramp = outer - inner;
  std::vector<double> b(d + 1);
  for (std::size_t r = 0; r <= d; ++r) {
    double s = 0.0;
    // Rising edge: f = (phi - (center - outer)) / ramp.
    s += linear_cos_integral(-(center - outer) / ramp, 1.0 / ramp, r, clip(center - outer),
                             clip(center - inner));
    s += linear_cos_integral(1.0, 0.0, r, clip(center - inner), clip(center + inner));
    // Falling edge: f = ((center + outer) - phi) / ramp.
    s += linear_cos_integral((center + outer) / ramp, -1.0 / ramp, r, clip(center + inner),
                             clip(center + outer));
    b[r] = (r == 0 ? 1.0 : 2.0) * s / kPi;
  }
  return b;
}

std::size_t boxcar_start_degree(double width, double eps) {
  // Fit of the smallest passing degree over eps in [0.005, 0.2] and widths
  // 0.05..0.5: d * width ~ 3.4 ln(1/eps) + 0.6, padded by 8%.
  return static_cast<std::size_t>(std::ceil(1.08 * (3.4 * std::log(1.0 / eps) + 0.6) / width));
}

BoxcarCheck check_boxcar(const BoxcarFilter& f, double slack) {
  BoxcarCheck c;
  const std::size_t d = std::max<std::size_t>(1, f.degree());
  const std::size_t m = 64 * d;
  for (std::size_t i = 0; i <= m; ++i) {
    const double phi = kPi * static_cast<double>(i) / static_cast<double>(m);
    const double p = eval_chebyshev(f.coeffs, std::cos(phi));
    const double dist = std::abs(phi - f.center);
    c.peak = std::max(c.peak, std::abs(p));
    if (dist >= 2.0 * f.width) c.stop_band = std::max(c.stop_band, std::abs(p));
    if (dist <= f.width) c.pass_band = std::max(c.pass_band, std::abs(p - 1.0));
  }
  const double tol = f.eps * (1.0 + slack);
  c.ok = c.stop_band <= tol && c.pass_band <= tol && c.peak <= 1.0 + f.eps;
  return c;
}

BoxcarFilter build_boxcar(double center, double width, double eps, const BoxcarOptions& options) {
  if (!(center >= 0.0 && center <= kPi)) throw std::invalid_argument("center must lie in [0, pi]");
  if (!(width > 0.0 && width <= kPi / 2)) throw std::invalid_argument("width must lie in (0, pi/2]");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  std::size_t d = std::max({options.min_degree, boxcar_start_degree(width, eps), std::size_t{1}});
  BoxcarFilter f;
  f.center = center;
  f.width = width;
  f.eps = eps;
  f.certified_eps = eps * (1.0 + options.slack);
  for (int attempt = 0; attempt <= options.max_doublings; ++attempt) {
    d = std::min(d, options.max_degree);
    f.coeffs = trapezoid_coefficients(center, (1.0 + kInset) * width, (2.0 - kInset) * width, d);
    const std::vector<double> g = jackson_factors(d);
    for (std::size_t r = 0; r <= d; ++r) f.coeffs[r] *= g[r];
    if (check_boxcar(f, options.slack).ok) return f;
    if (d == options.max_degree) break;
    d *= 2;
  }
  throw BoxcarError("boxcar check failed up to degree " + std::to_string(d));
}

std::vector<double> boxcar_at(const BoxcarFilter& f, std::span<const double> lambda) {
  std::vector<double> out(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) out[i] = eval_boxcar(f, lambda[i]);
  return out;
}

}  // namespace opsparse
