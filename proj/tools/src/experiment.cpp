// SPDX-License-Identifier: Apache-2.0
#include "opsparse_tools/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include <json.hpp>

#include "opsparse_tools/synth.hpp"

namespace opsparse::tools {

Rng trial_rng(std::uint64_t seed, std::size_t trial) {
  const auto t = static_cast<std::uint64_t>(trial);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
  return Rng(seq);
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("OPSPARSE_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<std::size_t>(n, cap);
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  const std::size_t workers = worker_count(count);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

TrialRecord run_trial(const TransformPlan& plan, const ExperimentConfig& cfg, std::size_t trial) {
  Rng rng = trial_rng(cfg.seed, trial);
  const std::size_t n = plan.size();
  const SynthSignal sig = synthesize({n, cfg.reduction.k, cfg.sigma, cfg.noise}, rng);
  QueryOracle oracle = QueryOracle::from_vector(apply_inverse(plan, sig.noisy));

  const auto t0 = std::chrono::steady_clock::now();
  const RecoverResult res = recover(plan, oracle, cfg.reduction, rng);
  const auto t1 = std::chrono::steady_clock::now();

  TrialRecord r;
  r.trial = trial;
  r.support = sig.support;
  r.values = sig.values;
  for (const auto& [i, v] : res.z) {
    r.recovered_support.push_back(i);
    r.recovered_values.push_back(v);
  }
  double err = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = sig.xhat[i] - res.z.get(i);
    err += d * d;
    norm += sig.xhat[i] * sig.xhat[i];
  }
  r.rel_error = std::sqrt(err / norm);
  r.queries = oracle.queries();
  r.peels = res.peels;
  r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  r.success = r.rel_error <= 3.0 * cfg.reduction.delta;
  return r;
}

std::vector<TrialRecord> run_trials(const TransformPlan& plan, const ExperimentConfig& cfg) {
  std::vector<TrialRecord> out(cfg.trials);
  parallel_for(cfg.trials, [&](std::size_t t) { out[t] = run_trial(plan, cfg, t); });
  return out;
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T, class F>
std::string joined(const std::vector<T>& xs, F fmt) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ';';
    s += fmt(xs[i]);
  }
  return s;
}

std::string index_list(const std::vector<std::size_t>& xs) {
  return joined(xs, [](std::size_t i) { return std::to_string(i); });
}

std::string value_list(const std::vector<double>& xs) { return joined(xs, num); }

}  // namespace

std::vector<std::string> csv_columns(bool timing) {
  std::vector<std::string> cols{"trial",           "support",          "values",
                                "recovered_support", "recovered_values", "rel_error",
                                "queries",         "peels",            "success"};
  if (timing) cols.push_back("wall_ms");
  return cols;
}

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records, bool timing) {
  const auto cols = csv_columns(timing);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : records) {
    out << r.trial << ',' << index_list(r.support) << ',' << value_list(r.values) << ','
        << index_list(r.recovered_support) << ',' << value_list(r.recovered_values) << ','
        << num(r.rel_error) << ',' << r.queries << ',' << r.peels << ',' << (r.success ? 1 : 0);
    if (timing) out << ',' << num(r.wall_ms);
    out << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<TrialRecord>& records, bool timing) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j{{"trial", r.trial},
                     {"support", r.support},
                     {"values", r.values},
                     {"recovered_support", r.recovered_support},
                     {"recovered_values", r.recovered_values},
                     {"rel_error", r.rel_error},
                     {"queries", r.queries},
                     {"peels", r.peels},
                     {"success", r.success}};
    if (timing) j["wall_ms"] = r.wall_ms;
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

OneSparseRecord run_one_sparse_trial(const TransformPlan& plan, const OneSparseExperiment& cfg,
                                     std::size_t trial) {
  Rng rng = trial_rng(cfg.seed, trial);
  const std::size_t n = plan.size();
  SynthSignal sig = synthesize({n, 1, 0.0, cfg.noise}, rng);
  QueryOracle oracle = QueryOracle::from_vector(apply_inverse(plan, sig.noisy));

  OneSparseRecord r;
  r.trial = trial;
  r.index = sig.support[0];
  r.value = sig.values[0];
  try {
    const OneSparseResult res = solve_one_sparse(plan, oracle, cfg.eps, cfg.mu, rng, cfg.solver);
    r.solved = true;
    r.recovered_index = res.index;
    r.recovered_value = res.value;
    r.stage = res.stage;
    r.success = res.index == r.index &&
                std::abs(res.value - r.value) <= 13.0 * cfg.eps * std::abs(r.value);
  } catch (const RecoveryFailure&) {
    r.stage = "failed";
  }
  r.queries = oracle.queries();
  return r;
}

std::vector<OneSparseRecord> run_one_sparse_trials(const TransformPlan& plan,
                                                   const OneSparseExperiment& cfg) {
  std::vector<OneSparseRecord> out(cfg.trials);
  parallel_for(cfg.trials, [&](std::size_t t) { out[t] = run_one_sparse_trial(plan, cfg, t); });
  return out;
}

}  // namespace opsparse::tools
