// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "opsparse/arccos.hpp"
#include "opsparse/numtheory.hpp"
#include "opsparse/onesparse.hpp"

using namespace opsparse;

namespace {

constexpr double kPi = std::numbers::pi;

// y = F^T (v e_l + w_hat) with ||w_hat|| = noise.
std::vector<double> spike(const TransformPlan& plan, std::size_t l, double v, double noise,
                          std::uint64_t seed) {
  std::vector<double> xh(plan.size(), 0.0);
  if (noise > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    double s = 0;
    for (double& x : xh) {
      x = g(rng);
      s += x * x;
    }
    for (double& x : xh) x *= noise / std::sqrt(s);
  }
  xh[l] += v;
  return apply_inverse(plan, xh);
}

class OneSparse : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { plan_ = new TransformPlan(build_plan(JacobiParams(0, 0), 1024)); }
  static void TearDownTestSuite() { delete plan_; }
  static const TransformPlan& plan() { return *plan_; }
  static TransformPlan* plan_;
};
TransformPlan* OneSparse::plan_ = nullptr;

}  // namespace

TEST(OneSparseSizes, SampleSizeAndRounds) {
  const OneSparseConfig cfg;
  const std::size_t a = check_sample_size(4096, std::sqrt(2.0 / 4096), 0.01, cfg);
  const std::size_t b = check_sample_size(4096, std::sqrt(2.0 / 4096), 0.002, cfg);
  EXPECT_EQ(a, check_sample_size(4096, std::sqrt(2.0 / 4096), 0.05, cfg));
  EXPECT_LT(a, b);
  for (std::size_t c : {1u, 2u, 10u, 1000u}) EXPECT_EQ(check_rounds(c, 0.1, cfg) % 2, 1u);
  EXPECT_LE(check_rounds(1, 0.1, cfg), check_rounds(1000, 0.1, cfg));
}

TEST(OneSparseSizes, SpreadConstants) {
  OneSparseConfig cfg;
  cfg.delta0 = 0.0;
  cfg.arccos_eps0 = 0.0;
  const SpreadConstants asym = spread_constants(cfg, 0.04);
  EXPECT_NEAR(asym.delta0, 0.2 / 5000.0, 1e-18);
  EXPECT_NEAR(asym.arccos_eps0, 0.2, 1e-15);
  const SpreadConstants prac = spread_constants(OneSparseConfig{}, 0.04);
  EXPECT_NEAR(prac.rho_delta0, 2 * std::sqrt(5 * prac.delta0), 1e-15);
  EXPECT_THROW(spread_constants(cfg, 0.0), std::invalid_argument);
}

TEST_F(OneSparse, CheckAcceptsTrueIndexWithSmallError) {
  const double eps = 0.01;
  Rng rng(1);
  int accepted = 0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t l = rng() % 1024;
    QueryOracle y = QueryOracle::from_vector(spike(plan(), l, 1.0, 0.0, 0));
    const CheckResult c = check(plan(), y, l, 0.1, eps, rng);
    if (c.accepted && std::abs(c.value - 1.0) <= 13 * eps) ++accepted;
  }
  EXPECT_GE(accepted, 18);
}

TEST_F(OneSparse, CheckRejectsWrongIndex) {
  Rng rng(2);
  int rejected = 0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t l = rng() % 1024, other = (l + 1 + rng() % 1023) % 1024;
    QueryOracle y = QueryOracle::from_vector(spike(plan(), l, 1.0, 0.0, 0));
    rejected += !check(plan(), y, other, 0.1, 0.01, rng).accepted;
  }
  EXPECT_GE(rejected, 18);
}

TEST_F(OneSparse, CheckOnZeroSignal) {
  Rng rng(3);
  QueryOracle y = QueryOracle::from_vector(std::vector<double>(1024, 0.0));
  const CheckResult c = check(plan(), y, 5, 0.1, 0.01, rng);
  EXPECT_FALSE(c.accepted);
  EXPECT_EQ(c.value, 0.0);
}

TEST_F(OneSparse, SampleSetQueriesEachDrawOnce) {
  Rng rng(4);
  QueryOracle y = QueryOracle::from_vector(spike(plan(), 10, 1.0, 0.0, 0));
  const SampleSet s = draw_samples(y, 50, 3, rng);
  EXPECT_EQ(y.queries(), 150u);
  ASSERT_EQ(s.index.size(), 150u);
  for (std::size_t i = 0; i < s.index.size(); ++i) {
    EXPECT_EQ(s.value[i], spike(plan(), 10, 1.0, 0.0, 0)[s.index[i]]);
  }
}

TEST_F(OneSparse, PruneFindsIndexInNarrowWindow) {
  Rng rng(5);
  for (std::size_t l : {0u, 300u, 1023u}) {
    QueryOracle y = QueryOracle::from_vector(spike(plan(), l, -2.0, 0.0, 0));
    const double th = plan().theta()[l];
    const auto r = prune(plan(), y, th - kPi / 4096, th + kPi / 4096, 0.1, 0.01, rng);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->index, l);
    EXPECT_NEAR(r->value, -2.0, 0.26);
  }
}

TEST_F(OneSparse, PruneOnEmptyRangeMakesNoQueries) {
  Rng rng(6);
  QueryOracle y = QueryOracle::from_vector(spike(plan(), 7, 1.0, 0.0, 0));
  const double gap = 0.5 * (plan().theta()[7] + plan().theta()[8]);
  EXPECT_FALSE(prune(plan(), y, gap, gap, 0.1, 0.01, rng).has_value());
  EXPECT_EQ(y.queries(), 0u);
}

TEST(OneSparseSmall, ExhaustivePruneAtN64) {
  const TransformPlan plan = build_plan(JacobiParams(0.5, 0.5), 64);
  Rng rng(7);
  for (std::size_t l = 0; l < 64; l += 9) {
    QueryOracle y = QueryOracle::from_vector(spike(plan, l, 1.0, 0.0, 0));
    const auto r = prune(plan, y, 0.0, kPi, 0.1, 0.01, rng);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->index, l);
  }
}

TEST_F(OneSparse, NonSpreadCandidatesMatchBadIntervals) {
  const double delta0 = 0.2;
  const auto cands = non_spread_candidates(plan(), delta0);
  const double eps_bad = std::min(1.0, 2.0 * arccos_radius(delta0) / kPi);
  const BadIntervalSet bad = bad_intervals(1024, eps_bad);
  std::size_t c = 0;
  for (std::size_t l = 0; l < 1024; ++l) {
    const bool in = bad.contains(plan().theta()[l] / kPi);
    if (in) {
      ASSERT_LT(c, cands.size());
      EXPECT_EQ(cands[c++], l);
    }
  }
  EXPECT_EQ(c, cands.size());
  // Root nearest theta = pi/2 lies next to the center 1/2.
  const std::size_t mid = plan().roots_in(kPi / 2 - kPi / 1024, kPi / 2 + kPi / 1024).front();
  EXPECT_TRUE(std::binary_search(cands.begin(), cands.end(), mid));
  // Count bound: one raw interval of width 2/N per Farey center, a few roots each.
  EXPECT_LE(cands.size(), 4 * bad.centers.size());
}

TEST_F(OneSparse, SpreadIndexIsNotAmongNonSpreadCandidates) {
  const double delta0 = 0.2;
  const auto cands = non_spread_candidates(plan(), delta0);
  const BadIntervalSet bad = bad_intervals(1024, std::min(1.0, 2.0 * arccos_radius(delta0) / kPi));
  std::size_t spread = 1024;
  for (std::size_t l = 0; l < 1024 && spread == 1024; ++l) {
    if (!bad.contains(plan().theta()[l] / kPi)) spread = l;
  }
  ASSERT_LT(spread, 1024u);
  EXPECT_FALSE(std::binary_search(cands.begin(), cands.end(), spread));
  Rng rng(8);
  QueryOracle y = QueryOracle::from_vector(spike(plan(), spread, 1.0, 0.0, 0));
  EXPECT_FALSE(prune_non_spread(plan(), y, delta0, 0.1, 0.01, rng).has_value());
}

TEST(QueryCos, ZeroStretchIsOne) {
  const TransformPlan plan = build_plan(JacobiParams(0, 0), 64);
  QueryOracle y = QueryOracle::from_vector(std::vector<double>(64, 1.0));
  Rng rng(1);
  EXPECT_EQ(query_cos(plan, y, 0, 8, 5, 0.01, rng), 1.0);
  EXPECT_EQ(y.queries(), 0u);
  EXPECT_THROW(query_cos(plan, y, 9, 8, 5, 0.01, rng), std::invalid_argument);
  EXPECT_THROW(query_cos(plan, y, 1, 40, 5, 0.01, rng), std::invalid_argument);
}

TEST(QueryCos, EstimatesCosineAtLargeN) {
  const std::size_t n = 4096;
  const TransformPlan plan = build_plan(JacobiParams(0, 0), n);
  Rng rng(12);
  const std::size_t nprime = n / 4;
  int good = 0, total = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t l = 64 + rng() % (n - 128);
    QueryOracle y = QueryOracle::from_vector(spike(plan, l, 1.0, 0.0, 0));
    const double est = query_cos(plan, y, 7, nprime, 32, 0.01, rng);
    EXPECT_EQ(y.queries(), 3u * 32u);
    good += std::abs(est - std::cos(7 * plan.theta()[l])) <= 0.1;
    ++total;
  }
  EXPECT_GE(good, 95 * total / 100);
}

TEST(QueryCos, ZeroDenominatorStaysFinite) {
  const TransformPlan plan = build_plan(JacobiParams(0, 0), 128);
  std::vector<double> v(128);
  for (std::size_t i = 0; i < 128; ++i) v[i] = i % 2 ? 1.0 : 0.0;
  Rng rng(3);
  QueryOracle y = QueryOracle::from_vector(v);
  EXPECT_TRUE(std::isfinite(query_cos(plan, y, 3, 32, 9, 0.01, rng)));
  QueryOracle z = QueryOracle::from_vector(std::vector<double>(128, 0.0));
  EXPECT_EQ(query_cos(plan, z, 3, 32, 9, 0.01, rng), 0.0);
}

TEST_F(OneSparse, RecoversNoiselessSpikes) {
  Rng rng(21);
  int ok = 0;
  for (int t = 0; t < 25; ++t) {
    const std::size_t l = rng() % 1024;
    QueryOracle y = QueryOracle::from_vector(spike(plan(), l, 1.0, 0.0, 0));
    try {
      const OneSparseResult r = solve_one_sparse(plan(), y, 0.01, 0.1, rng);
      EXPECT_EQ(r.queries, y.queries());
      ok += r.index == l && std::abs(r.value - 1.0) <= 0.13;
    } catch (const RecoveryFailure&) {
    }
  }
  EXPECT_GE(ok, 23);
}

TEST_F(OneSparse, RecoversNoisySpikes) {
  Rng rng(22);
  int ok = 0;
  for (int t = 0; t < 25; ++t) {
    const std::size_t l = rng() % 1024;
    const double v = t % 2 ? 3.0 : -0.5;
    QueryOracle y = QueryOracle::from_vector(spike(plan(), l, v, 0.01 * std::abs(v), t));
    try {
      const OneSparseResult r = solve_one_sparse(plan(), y, 0.01, 0.1, rng);
      ok += r.index == l && std::abs(r.value - v) <= 0.13 * std::abs(v);
    } catch (const RecoveryFailure&) {
    }
  }
  EXPECT_GE(ok, 22);
}

TEST_F(OneSparse, BoundaryRootsCaughtByFirstPrunes) {
  Rng rng(23);
  QueryOracle y0 = QueryOracle::from_vector(spike(plan(), 0, 1.0, 0.0, 0));
  const OneSparseResult r0 = solve_one_sparse(plan(), y0, 0.01, 0.1, rng);
  EXPECT_EQ(r0.index, 0u);
  EXPECT_EQ(r0.stage, "prune-low");
  QueryOracle y1 = QueryOracle::from_vector(spike(plan(), 1023, 1.0, 0.0, 0));
  const OneSparseResult r1 = solve_one_sparse(plan(), y1, 0.01, 0.1, rng);
  EXPECT_EQ(r1.index, 1023u);
  EXPECT_EQ(r1.stage, "prune-high");
}

TEST_F(OneSparse, ZeroSignalFails) {
  Rng rng(24);
  QueryOracle y = QueryOracle::from_vector(std::vector<double>(1024, 0.0));
  EXPECT_THROW(solve_one_sparse(plan(), y, 0.01, 0.1, rng), RecoveryFailure);
}

TEST_F(OneSparse, ValidatesArguments) {
  Rng rng(25);
  QueryOracle small = QueryOracle::from_vector(std::vector<double>(10, 0.0));
  EXPECT_THROW(solve_one_sparse(plan(), small, 0.01, 0.1, rng), std::invalid_argument);
  QueryOracle y = QueryOracle::from_vector(std::vector<double>(1024, 0.0));
  EXPECT_THROW(solve_one_sparse(plan(), y, 0.01, 1.5, rng), std::invalid_argument);
  EXPECT_THROW(solve_one_sparse(plan(), y, 1.5, 0.1, rng), std::invalid_argument);
}
