// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace opsparse {

/// Jacobi weight parameters; the weight on [-1, 1] is (1-x)^alpha (1+x)^beta.
struct JacobiParams {
  double alpha = 0.0;
  double beta = 0.0;

  JacobiParams() = default;
  /// Throws std::invalid_argument unless alpha > -1 and beta > -1.
  JacobiParams(double alpha, double beta);

  /// Phase of the large-degree cosine approximation, -(alpha + 1/2) pi / 2.
  double phase() const;
  /// Degree shift (alpha + beta + 1) / 2.
  double n_shift() const;

  friend bool operator==(const JacobiParams&, const JacobiParams&) = default;
};

/// P_j^{(alpha,beta)}(x) from the classical three-term recurrence.
double eval_unnormalized(const JacobiParams& p, std::size_t j, double x);

/// h_j = integral of P_j^2 against the weight.
double norm_factor(const JacobiParams& p, std::size_t j);
/// log h_j, finite for every j (uses the quadrature fallback where needed).
double log_norm_factor(const JacobiParams& p, std::size_t j);

/// P_j / sqrt(h_j), evaluated with the orthonormal recurrence.
double eval_orthonormal(const JacobiParams& p, std::size_t j, double x);

/// d/dx P_j^{(alpha,beta)}(x) = (j+alpha+beta+1)/2 * P_{j-1}^{(alpha+1,beta+1)}(x).
double eval_derivative(const JacobiParams& p, std::size_t j, double x);

/// Coefficients of the orthonormal recurrence
///   x p_j = a_{j+1} p_{j+1} + b_j p_j + a_j p_{j-1},
/// tabulated up to a fixed degree.
class OrthonormalRecurrence {
 public:
  OrthonormalRecurrence() = default;
  OrthonormalRecurrence(const JacobiParams& p, std::size_t max_degree);

  const JacobiParams& params() const { return params_; }
  std::size_t max_degree() const { return b_.size() - 1; }

  /// Off-diagonal a_j (j >= 1) of the Jacobi matrix; a(0) is 0.
  double a(std::size_t j) const { return a_[j]; }
  /// Diagonal b_j.
  double b(std::size_t j) const { return b_[j]; }
  /// The constant p_0 = 1/sqrt(h_0).
  double p0() const { return p0_; }

  /// p_j(x) for a single degree j <= max_degree().
  double value(std::size_t j, double x) const;

  /// out[i] = p_i(x) for i < out.size(); requires out.size() <= max_degree()+1.
  void fill(double x, std::span<double> out) const;

  /// out[i] = p_n(xs[i]); evaluates many points per recurrence sweep.
  void value_many(std::size_t n, std::span<const double> xs,
                  std::span<double> out) const;

  /// Sum of squares: out[i] = sum_{j<n} p_j(xs[i])^2, plus the max |p_j(xs[i])|.
  void sum_squares_many(std::size_t n, std::span<const double> xs,
                        std::span<double> sumsq,
                        std::span<double> maxabs) const;

 private:
  JacobiParams params_;
  std::vector<double> a_;
  std::vector<double> inv_a_;
  std::vector<double> b_;
  double p0_ = 1.0;
};

}  // namespace opsparse
