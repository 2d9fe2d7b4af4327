// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "opsparse/oracle.hpp"
#include "opsparse/transform_plan.hpp"

namespace opsparse {

/// Tuning of the 1-sparse solver.  Zero for delta0 or arccos_eps0 selects the
/// asymptotic value (sqrt(eps)/5000 and sqrt(eps)), which only fits very large N.
struct OneSparseConfig {
  double nu = 0.125;
  double delta0 = 0.2;
  double arccos_eps0 = 0.001;
  /// C' of the first prune is max(c_theta, 4 sqrt(eps) delta0 nu).
  double c_theta = 1.0;
  /// Check sample size multiplier: s = c_s U^2 N L ln L, L = ln N / min(eps, 1/200)^2.
  double c_s = 5e-5;
  /// Check rounds: R = c_R ln(|S| / mu), rounded up to an odd number.
  double c_R = 1.0;
  /// query_cos rounds: c_Rcos (ln ln N + ln(1/mu)).
  double c_Rcos = 8.0;
};

/// Resolved constants for a given eps and N.
struct SpreadConstants {
  double nu = 0.125;
  double delta0 = 0.0;
  double rho_delta0 = 0.0;   // arccos_radius(delta0)
  double arccos_eps0 = 0.0;
  double rho_arccos = 0.0;   // arccos_radius(arccos_eps0)
};

SpreadConstants spread_constants(const OneSparseConfig& cfg, double eps);

class RecoveryFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OneSparseResult {
  std::size_t index = 0;
  double value = 0.0;
  std::uint64_t queries = 0;
  /// Stage that produced the index: "prune-low", "prune-high", "non-spread" or "arccos".
  std::string stage;
};

/// R rounds of s uniform samples (with replacement) of y, queried up front.
struct SampleSet {
  std::size_t rounds = 0;
  std::size_t per_round = 0;
  std::vector<std::size_t> index;  // rounds * per_round, round-major
  std::vector<double> value;
};

SampleSet draw_samples(QueryOracle& y, std::size_t per_round, std::size_t rounds, Rng& rng);

std::size_t check_sample_size(std::size_t n, double flatness, double eps,
                              const OneSparseConfig& cfg);
std::size_t check_rounds(std::size_t candidates, double mu, const OneSparseConfig& cfg);

struct CheckResult {
  bool accepted = false;
  double value = 0.0;  // median of the <y, F[l', :]> estimates
  double norm = 0.0;   // median of the ||y|| estimates
};

/// Decides whether y is concentrated on column l of F^T using a fixed sample set.
CheckResult check(const TransformPlan& plan, const SampleSet& samples, std::size_t l);
/// Same with a fresh sample set sized for failure probability mu.
CheckResult check(const TransformPlan& plan, QueryOracle& y, std::size_t l, double mu, double eps,
                  Rng& rng, const OneSparseConfig& cfg = {});

struct PruneResult {
  std::size_t index = 0;
  double value = 0.0;
};

/// Checks every candidate against one shared sample set and returns the
/// accepted candidate with the largest |value|.  No queries when empty.
std::optional<PruneResult> prune(const TransformPlan& plan, QueryOracle& y,
                                 std::span<const std::size_t> candidates, double mu, double eps,
                                 Rng& rng, const OneSparseConfig& cfg = {});
/// Candidates are the roots with angle in [a, b].
std::optional<PruneResult> prune(const TransformPlan& plan, QueryOracle& y, double a, double b,
                                 double mu, double eps, Rng& rng, const OneSparseConfig& cfg = {});

/// Roots l with theta_l / pi inside bad_intervals(N, min(1, 2 rho(delta0) / pi)).
std::vector<std::size_t> non_spread_candidates(const TransformPlan& plan, double delta0);

std::optional<PruneResult> prune_non_spread(const TransformPlan& plan, QueryOracle& y,
                                            double delta0, double mu, double eps, Rng& rng,
                                            const OneSparseConfig& cfg = {});

/// Median over R rounds of the ratio estimate of cos(w theta_l), each round
/// querying y at Delta - w, Delta, Delta + w for Delta uniform in
/// [nprime, N - 1 - nprime].  w = 0 returns 1 without queries.
/// Requires w <= nprime and 2 nprime <= N - 1.
double query_cos(const TransformPlan& plan, QueryOracle& y, std::size_t w, std::size_t nprime,
                 std::size_t rounds, double eps, Rng& rng);

/// Recovers (l, v) from query access to y = F^T (v e_l + w_hat), ||w_hat|| <= eps |v|.
/// Throws RecoveryFailure when no stage produces an index.
OneSparseResult solve_one_sparse(const TransformPlan& plan, QueryOracle& y, double eps, double mu,
                                 Rng& rng, const OneSparseConfig& cfg = {});

}  // namespace opsparse
