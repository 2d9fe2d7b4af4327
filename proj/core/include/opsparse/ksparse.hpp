// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "opsparse/boxcar.hpp"
#include "opsparse/onesparse.hpp"
#include "opsparse/oracle.hpp"
#include "opsparse/transform_plan.hpp"

namespace opsparse {

/// Parameters of the k-to-1 reduction.  The c_* fields multiply the
/// asymptotic loop sizes; see the README for how the defaults were chosen.
struct ReductionConfig {
  std::size_t k = 1;
  double delta = 0.05;
  double mu = 0.1;
  /// Angular separation of the spikes; 0 selects default_gamma(k).
  double gamma = 0.0;
  double c_T0 = 0.25;
  double c_T1 = 0.004;
  double c_T2 = 1.0;
  double c_mu0 = 1.0;
  double c_d = 0.5;
  double C_big = 2.5;
  /// Upper bound accepted for delta.
  double delta_cap = 0.1;
  OneSparseConfig one_sparse{};
};

/// Loop sizes derived from a config for a given plan.
struct ReductionSizes {
  double eps = 0.0;      // delta / C_big
  double gamma = 0.0;
  double mu0 = 0.0;
  std::size_t T0 = 0;
  std::size_t T1 = 0;
  std::size_t T2 = 0;
  std::size_t degree_hint = 0;  // c_d sqrt(k) / (eps gamma)
  double filter_width = 0.0;    // gamma / 4
  double filter_eps = 0.0;      // eps / sqrt(k)
};

/// min(1, 1.7 pi / (3 (k - 1))), and 1 for k = 1.
double default_gamma(std::size_t k);

ReductionSizes reduction_sizes(const ReductionConfig& cfg, std::size_t n, double flatness);

/// Largest degree of the filters peeler builds at a few sample centers; a plan
/// needs at least this moment degree to run recover with cfg.
std::size_t required_moment_degree(const ReductionConfig& cfg, std::size_t n);

/// Wraps an oracle so that each index is forwarded at most once.
class CachedOracle {
 public:
  explicit CachedOracle(QueryOracle& base) : base_(&base), value_(base.size()), known_(base.size()) {}
  std::size_t size() const { return value_.size(); }
  double query(std::size_t j);
  /// Queries forwarded to the wrapped oracle.
  std::uint64_t queries() const { return forwarded_; }

 private:
  QueryOracle* base_;
  std::vector<double> value_;
  std::vector<char> known_;
  std::uint64_t forwarded_ = 0;
};

/// z[i] = (F^{-1} z_hat)[i] = sum_h F[h, i] z_hat[h].
double inverse_at(const TransformPlan& plan, const SparseApprox& zhat, std::size_t i);

/// (F^{-1} D_b (v_hat - z_hat))[j] from the rows of the moment matrices and
/// at most 2d + 1 queries of v.
double simulate_query(const TransformPlan& plan, QueryOracle& v, const SparseApprox& zhat,
                      const BoxcarFilter& filter, std::size_t j);
double simulate_query(const TransformPlan& plan, CachedOracle& v, const SparseApprox& zhat,
                      const BoxcarFilter& filter, std::size_t j);

/// Estimates ||y_hat - v e_h||^2 from samples of y and accepts when it is at
/// most v^2 / 1000.  v = 0 is rejected.
bool verify(const TransformPlan& plan, QueryOracle& y, double v, std::size_t h, double mu,
            double eps, Rng& rng, double c_T1 = 1.0);
/// Same with an explicit sample count.
bool verify_samples(const TransformPlan& plan, QueryOracle& y, double v, std::size_t h,
                    std::size_t samples, Rng& rng);

/// Samples for verify: ceil(c_T1 N U^2 ln(1/mu) / eps^2).
std::size_t verify_sample_count(std::size_t n, double flatness, double mu, double eps,
                                double c_T1);

using OneSparseSolver =
    std::function<OneSparseResult(QueryOracle& y, double eps, double mu, Rng& rng)>;

/// solve_one_sparse bound to a plan and config.
OneSparseSolver default_solver(const TransformPlan& plan, const OneSparseConfig& cfg = {});

struct PeelResult {
  SparseApprox z;
  bool stop = false;
};

struct PeelStats {
  std::size_t solves = 0;
  std::size_t solver_failures = 0;
  std::size_t in_range = 0;
  std::size_t verified = 0;
};

/// One peeling pass over the residual v_hat - z_hat.  Returns as soon as a new
/// index is added; stop = true when T2 rounds pass without one.
PeelResult peeler(const TransformPlan& plan, CachedOracle& v, const SparseApprox& zhat,
                  const ReductionConfig& cfg, const OneSparseSolver& solver, Rng& rng,
                  PeelStats* stats = nullptr);

struct RecoverResult {
  SparseApprox z;
  std::size_t peels = 0;
  /// Queries forwarded to the caller's oracle.
  std::uint64_t queries = 0;
  PeelStats stats;
};

/// Peels up to k spikes from query access to v = F^T (x_hat + w_hat).
RecoverResult recover(const TransformPlan& plan, QueryOracle& v, const ReductionConfig& cfg,
                      const OneSparseSolver& solver, Rng& rng);
RecoverResult recover(const TransformPlan& plan, QueryOracle& v, const ReductionConfig& cfg,
                      Rng& rng);

/// Magnitude of the s-th largest entry by absolute value (s is 1-based).
double large(std::size_t s, std::span<const double> x);

}  // namespace opsparse
