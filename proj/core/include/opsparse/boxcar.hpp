// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace opsparse {

/// Polynomial p(x) = sum_r coeffs[r] T_r(x) that is close to 1 for angles
/// within width of center and close to 0 beyond 2*width.
struct BoxcarFilter {
  double center = 0.0;
  double width = 0.0;
  double eps = 0.0;
  /// Bound actually certified by the grid check, eps * (1 + slack).
  double certified_eps = 0.0;
  std::vector<double> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

  /// Filter with the given Chebyshev coefficients and no geometry.
  static BoxcarFilter from_coefficients(std::vector<double> coeffs);
};

struct BoxcarOptions {
  /// Lower bound on the starting degree.
  std::size_t min_degree = 0;
  /// Construction fails rather than exceed this degree.
  std::size_t max_degree = 1u << 16;
  /// Relative slack of the grid check.
  double slack = 0.1;
  /// Number of times the degree may be doubled after a failed check.
  int max_doublings = 6;
};

class BoxcarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Worst violations of the boxcar conditions on the grid phi = i*pi/(64 d).
struct BoxcarCheck {
  double stop_band = 0.0;  // max |p| with |phi - center| >= 2 width
  double pass_band = 0.0;  // max |p - 1| with |phi - center| <= width
  double peak = 0.0;       // max |p|
  bool ok = false;
};

/// Sum_r coeffs[r] T_r(x) by Clenshaw's recurrence.
double eval_chebyshev(std::span<const double> coeffs, double x);
double eval_boxcar(const BoxcarFilter& f, double x);

/// Jackson damping factors g_0..g_d (g_0 = 1) of the squared Fejer kernel.
std::vector<double> jackson_factors(std::size_t d);

/// Cosine coefficients of the even trapezoid that is 1 on |phi - center| <= inner
/// and 0 beyond outer, restricted to [0, pi].
std::vector<double> trapezoid_coefficients(double center, double inner, double outer,
                                           std::size_t d);

/// Degree the builder tries first for a given width and accuracy.
std::size_t boxcar_start_degree(double width, double eps);

BoxcarCheck check_boxcar(const BoxcarFilter& f, double slack = 0.1);

/// Builds a filter that passes check_boxcar.  Throws std::invalid_argument on
/// bad parameters and BoxcarError when the degree budget is exhausted.
BoxcarFilter build_boxcar(double center, double width, double eps,
                          const BoxcarOptions& options = {});

/// p evaluated at every root of a plan: out[l] = p(lambda[l]).
std::vector<double> boxcar_at(const BoxcarFilter& f, std::span<const double> lambda);

}  // namespace opsparse
