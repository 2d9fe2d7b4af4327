// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "opsparse/jacobi.hpp"
#include "opsparse/moments.hpp"

namespace opsparse {

/// Roots of p_N indexed by ascending angle: theta[0] < ... < theta[N-1],
/// lambda[l] = cos(theta[l]) (so lambda is descending).
struct RootSet {
  std::vector<double> theta;
  std::vector<double> lambda;
};

/// Finds the N roots of p_N with bracketing and safeguarded Newton steps.
/// Throws std::runtime_error when N sign changes cannot be bracketed.
RootSet compute_roots(const JacobiParams& p, std::size_t n);

/// Gauss weights w_l = 1 / sum_{j<N} p_j(lambda_l)^2.
std::vector<double> compute_weights(const JacobiParams& p, std::span<const double> lambda);

struct PlanOptions {
  /// Degree d of the moment matrices M_0..M_d.
  std::size_t moment_degree = 0;
  /// Keep a dense row-major copy of F when N is at most this size.
  std::size_t dense_limit = 4096;
};

/// Immutable precomputed data for the N-point Jacobi transform
/// F[l, j] = sqrt(w_l) p_j(lambda_l).  F is orthogonal.
class TransformPlan {
 public:
  TransformPlan() = default;

  /// Assembles a plan from stored fields (used by load_plan).  Recomputes
  /// buckets and the dense copy of F but keeps every stored value bit-exact.
  TransformPlan(const JacobiParams& p, std::vector<double> theta, std::vector<double> lambda,
                std::vector<double> weights, double flatness, MomentMatrices moments,
                std::size_t dense_limit = 4096);

  const JacobiParams& params() const { return params_; }
  std::size_t size() const { return theta_.size(); }
  std::span<const double> theta() const { return theta_; }
  std::span<const double> lambda() const { return lambda_; }
  std::span<const double> weights() const { return weights_; }
  double flatness() const { return flatness_; }
  const MomentMatrices& moments() const { return moments_; }
  std::size_t moment_degree() const { return moments_.degree(); }
  const OrthonormalRecurrence& recurrence() const { return rec_; }

  /// Roots whose angle lies in [i pi/N, (i+1) pi/N).
  std::span<const std::size_t> bucket(std::size_t i) const;
  /// Root indices with theta in [a, b], ascending.
  std::vector<std::size_t> roots_in(double a, double b) const;

  /// F[l, 0..N) into out.
  void row(std::size_t l, std::span<double> out) const;
  /// F[l, 0..len) into out, len = out.size() <= N.
  void row_prefix(std::size_t l, std::span<double> out) const;
  /// Single entry F[l, j] (O(1) with the dense copy, O(j) otherwise).
  double entry(std::size_t l, std::size_t j) const;

  /// out[r, c] = sum_j F[rows[r], j] * mat[j, c] for a row-major N x ncols
  /// matrix; out is rows.size() x ncols, row-major.
  void multiply_rows(std::span<const std::size_t> rows, std::span<const double> mat,
                     std::size_t ncols, std::span<double> out) const;

  /// Row-major dense F or nullptr when N exceeds the dense limit.
  const double* dense() const { return dense_.empty() ? nullptr : dense_.data(); }

 private:
  friend TransformPlan build_plan(const JacobiParams&, std::size_t, const PlanOptions&);
  void finish(std::size_t dense_limit);

  JacobiParams params_;
  std::vector<double> theta_;
  std::vector<double> lambda_;
  std::vector<double> weights_;
  double flatness_ = 0.0;
  MomentMatrices moments_;
  OrthonormalRecurrence rec_;
  std::vector<std::size_t> bucket_start_;
  std::vector<std::size_t> bucket_items_;
  std::vector<double> dense_;
};

/// Preprocessing: roots, weights, flatness, buckets and moments M_0..M_d.
TransformPlan build_plan(const JacobiParams& p, std::size_t n, const PlanOptions& options = {});
TransformPlan build_plan(const JacobiParams& p, std::size_t n, std::size_t moment_degree);

/// x_hat = F x.
std::vector<double> apply_forward(const TransformPlan& plan, std::span<const double> x);
/// x = F^T x_hat (= F^{-1} x_hat).
std::vector<double> apply_inverse(const TransformPlan& plan, std::span<const double> xhat);

/// max |F[l, j]|.
double flatness(const TransformPlan& plan);

}  // namespace opsparse
