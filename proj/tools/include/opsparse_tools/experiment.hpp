// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "opsparse/ksparse.hpp"
#include "opsparse/transform_plan.hpp"

namespace opsparse::tools {

/// Settings of a batch of seeded k-sparse trials.
struct ExperimentConfig {
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t n = 2048;
  double sigma = 0.0;   // 0: default_sigma(k)
  double noise = 0.0;   // relative to large(k, x_hat)
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  ReductionConfig reduction{};
};

struct TrialRecord {
  std::size_t trial = 0;
  std::vector<std::size_t> support;
  std::vector<double> values;
  std::vector<std::size_t> recovered_support;
  std::vector<double> recovered_values;
  double rel_error = 0.0;
  std::uint64_t queries = 0;
  std::size_t peels = 0;
  double wall_ms = 0.0;
  /// rel_error <= 3 delta.
  bool success = false;
};

/// Generator of trial t: mt19937_64 seeded with seed_seq over the 32-bit
/// halves of seed and t.
Rng trial_rng(std::uint64_t seed, std::size_t trial);

/// Worker count: hardware threads, capped by OPSPARSE_THREADS when set and by jobs.
std::size_t worker_count(std::size_t jobs);

/// Runs job(0..count) on worker_count(count) threads.  The first exception
/// thrown by a job is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job);

/// The plan must have moment degree at least required_moment_degree.
TrialRecord run_trial(const TransformPlan& plan, const ExperimentConfig& cfg, std::size_t trial);
std::vector<TrialRecord> run_trials(const TransformPlan& plan, const ExperimentConfig& cfg);

/// Column names of write_csv, in order.  wall_ms only when timing is on.
std::vector<std::string> csv_columns(bool timing);
void write_csv(std::ostream& out, const std::vector<TrialRecord>& records, bool timing);
void write_json(std::ostream& out, const std::vector<TrialRecord>& records, bool timing);

/// Seeded 1-sparse trials: x_hat = v e_l + w_hat, |v| = 1, ||w_hat|| = noise.
struct OneSparseExperiment {
  double eps = 0.01;
  double mu = 0.1;
  double noise = 0.0;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  OneSparseConfig solver{};
};

struct OneSparseRecord {
  std::size_t trial = 0;
  std::size_t index = 0;
  double value = 0.0;
  bool solved = false;  // false when the solver threw RecoveryFailure
  std::size_t recovered_index = 0;
  double recovered_value = 0.0;
  std::string stage;
  std::uint64_t queries = 0;
  /// Exact index and |v' - v| <= 13 eps |v|.
  bool success = false;
};

OneSparseRecord run_one_sparse_trial(const TransformPlan& plan, const OneSparseExperiment& cfg,
                                     std::size_t trial);
std::vector<OneSparseRecord> run_one_sparse_trials(const TransformPlan& plan,
                                                   const OneSparseExperiment& cfg);

}  // namespace opsparse::tools
