// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <benchmark/benchmark.h>

#include "opsparse/arccos.hpp"
#include "opsparse/boxcar.hpp"
#include "opsparse/dct_bridge.hpp"
#include "opsparse/ksparse.hpp"
#include "opsparse/numtheory.hpp"
#include "opsparse/onesparse.hpp"
#include "opsparse/transform_plan.hpp"

using namespace opsparse;

namespace {

constexpr double kPi = std::numbers::pi;

// Plans are shared across benchmarks of the same (N, d).
const TransformPlan& cached_plan(std::size_t n, std::size_t d) {
  static std::map<std::pair<std::size_t, std::size_t>, TransformPlan> plans;
  auto it = plans.find({n, d});
  if (it == plans.end()) it = plans.emplace(std::pair{n, d}, build_plan(JacobiParams(0, 0), n, PlanOptions{d})).first;
  return it->second;
}

std::vector<double> spike_signal(const TransformPlan& plan, std::size_t l) {
  std::vector<double> xh(plan.size(), 0.0);
  xh[l] = 1.0;
  return apply_inverse(plan, xh);
}

}  // namespace

static void BM_BuildPlan(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_plan(JacobiParams(0.5, -0.3), n, PlanOptions{0, 0}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildPlan)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_BuildMoments(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const OrthonormalRecurrence rec(JacobiParams(0, 0), 2049);
  for (auto _ : state) benchmark::DoNotOptimize(build_moments(rec, 2048, d));
}
BENCHMARK(BM_BuildMoments)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_CombineRow(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const TransformPlan& plan = cached_plan(2048, 128);
  const std::vector<double> coeffs(d + 1, 0.5);
  std::vector<double> row(2 * d + 1);
  std::size_t j = 500;
  for (auto _ : state) {
    plan.moments().combine_row(coeffs, j, row);
    benchmark::DoNotOptimize(row.data());
    j = (j + 97) % 1000 + 500;
  }
}
BENCHMARK(BM_CombineRow)->Arg(32)->Arg(64)->Arg(128);

static void BM_BuildBoxcar(benchmark::State& state) {
  const double eps = 1.0 / static_cast<double>(state.range(0));
  double c = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_boxcar(c, 0.1, eps));
    c = std::fmod(c + 0.37, kPi);
  }
}
BENCHMARK(BM_BuildBoxcar)->Arg(10)->Arg(100)->Unit(benchmark::kMicrosecond);

static void BM_SimulateQuery(benchmark::State& state) {
  const TransformPlan& plan = cached_plan(2048, 128);
  QueryOracle v = QueryOracle::from_vector(spike_signal(plan, 700));
  const BoxcarFilter f = build_boxcar(1.2, 0.2, 0.01, BoxcarOptions{0, 128});
  SparseApprox z;
  z.set(300, 0.5);
  std::size_t j = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_query(plan, v, z, f, j));
    j = (j + 131) % 2048;
  }
}
BENCHMARK(BM_SimulateQuery);

static void BM_ApproxArcCos(benchmark::State& state) {
  const unsigned tau = static_cast<unsigned>(state.range(0));
  double theta = 0.3;
  for (auto _ : state) {
    const CosQuery q = [theta](std::uint64_t w) { return std::cos(static_cast<double>(w) * theta); };
    benchmark::DoNotOptimize(approx_arccos(q, tau, 1e-4));
    theta = std::fmod(theta + 0.71, kPi - 0.2) + 0.1;
  }
}
BENCHMARK(BM_ApproxArcCos)->Arg(8)->Arg(16);

static void BM_BadIntervals(benchmark::State& state) {
  const double eps = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bad_intervals(4096, eps));
}
BENCHMARK(BM_BadIntervals)->Arg(1)->Arg(10)->Arg(100);

static void BM_ChebyshevViaFft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> c(n);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (double& x : c) x = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(chebyshev_transform_fourier(c));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ChebyshevViaFft)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oNLogN);

// Queries per solve are reported as a counter; the dense transform used to
// build the signal is outside the timed region.
static void BM_SolveOneSparse(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const TransformPlan& plan = cached_plan(n, 0);
  Rng rng(3);
  double queries = 0;
  std::size_t solves = 0;
  for (auto _ : state) {
    state.PauseTiming();
    QueryOracle y = QueryOracle::from_vector(spike_signal(plan, rng() % n));
    state.ResumeTiming();
    try {
      benchmark::DoNotOptimize(solve_one_sparse(plan, y, 0.01, 0.1, rng));
    } catch (const RecoveryFailure&) {
    }
    queries += static_cast<double>(y.queries());
    ++solves;
  }
  state.counters["queries"] = queries / static_cast<double>(solves);
}
BENCHMARK(BM_SolveOneSparse)->RangeMultiplier(4)->Range(1024, 16384)->Unit(benchmark::kMillisecond);

static void BM_RecoverKSparse(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const std::size_t n = 2048;
  ReductionConfig cfg;
  cfg.k = k;
  const TransformPlan& plan = cached_plan(n, required_moment_degree(cfg, n));
  Rng rng(4);
  double queries = 0;
  std::size_t runs = 0;
  for (auto _ : state) {
    state.PauseTiming();
    std::vector<double> xh(n, 0.0);
    // Spikes spread over the whole index range, far apart for k <= 2.
    for (std::size_t i = 0; i < k; ++i) {
      xh[rng() % 50 + i * (n - 100) / std::max<std::size_t>(1, k - 1)] = 1.0 - 0.2 * static_cast<double>(i);
    }
    QueryOracle v = QueryOracle::from_vector(apply_inverse(plan, xh));
    state.ResumeTiming();
    benchmark::DoNotOptimize(recover(plan, v, cfg, rng));
    queries += static_cast<double>(v.queries());
    ++runs;
  }
  state.counters["queries"] = queries / static_cast<double>(runs);
}
BENCHMARK(BM_RecoverKSparse)->Arg(1)->Arg(2)->Iterations(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
