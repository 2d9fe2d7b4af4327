// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "opsparse/boxcar.hpp"
#include "opsparse/moments.hpp"
#include "opsparse/transform_plan.hpp"
#include "test_util.hpp"

using namespace opsparse;
using opsparse::testing::conjugate_diag;
using opsparse::testing::dense_f;

namespace {

// F^T diag(T_r(lambda)) F.
std::vector<double> dense_moment(const TransformPlan& plan, std::size_t r) {
  std::vector<double> t(plan.size());
  for (std::size_t l = 0; l < plan.size(); ++l) t[l] = std::cos(r * std::acos(plan.lambda()[l]));
  return conjugate_diag(dense_f(plan), t, plan.size());
}

}  // namespace

TEST(Banded, StoresDiagonalsAndMirrors) {
  BandedSymmetric b(5, 2);
  EXPECT_EQ(b.diagonal(0).size(), 5u);
  EXPECT_EQ(b.diagonal(2).size(), 3u);
  b.diagonal(1)[2] = 4.0;
  EXPECT_EQ(b.at(2, 3), 4.0);
  EXPECT_EQ(b.at(3, 2), 4.0);
  EXPECT_EQ(b.at(0, 4), 0.0);
}

TEST(Moments, ZerothIsIdentity) {
  const TransformPlan plan = build_plan(JacobiParams(0, 0), 16, 0);
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 16; ++j) EXPECT_NEAR(plan.moments().at(0, i, j), i == j, 1e-8);
  }
}

TEST(Moments, MatchDenseConjugation) {
  for (auto ab : {std::pair{0.0, 0.0}, std::pair{1.5, -0.3}}) {
    const TransformPlan plan = build_plan(JacobiParams(ab.first, ab.second), 16, 3);
    for (std::size_t r = 0; r <= 3; ++r) {
      const auto m = dense_moment(plan, r);
      for (std::size_t i = 0; i < 16; ++i) {
        for (std::size_t j = 0; j < 16; ++j) {
          EXPECT_NEAR(plan.moments().at(r, i, j), m[i * 16 + j], 1e-8) << r << " " << i << " " << j;
        }
      }
    }
  }
}

TEST(Moments, OutsideBandIsZeroInDenseOracle) {
  const TransformPlan plan = build_plan(JacobiParams(0, 0), 16, 2);
  const auto m2 = dense_moment(plan, 2);
  for (std::size_t i = 0; i + 3 < 16; ++i) {
    EXPECT_LE(std::abs(m2[i * 16 + i + 3]), 1e-8);
    EXPECT_EQ(plan.moments().at(2, i, i + 3), 0.0);
  }
}

TEST(Moments, CombineMatchesDenseFilterConjugation) {
  const std::size_t n = 48, d = 9;
  const TransformPlan plan = build_plan(JacobiParams(0.5, -0.2), n, d);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> b(d + 1);
  for (double& x : b) x = u(rng);
  std::vector<double> bl(n);
  for (std::size_t l = 0; l < n; ++l) bl[l] = eval_chebyshev(b, plan.lambda()[l]);
  const auto want = conjugate_diag(dense_f(plan), bl, n);
  const BandedSymmetric comb = plan.moments().combine(b);
  std::vector<double> row(2 * d + 1);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t lo = j >= d ? j - d : 0, hi = std::min(n - 1, j + d);
    std::span<double> out(row.data(), hi - lo + 1);
    plan.moments().combine_row(b, j, out);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(comb.at(j, i), want[j * n + i], 1e-7);
      if (i >= lo && i <= hi) {
        EXPECT_NEAR(out[i - lo], want[j * n + i], 1e-7);
      }
    }
  }
}

TEST(Moments, ShortCoefficientVectorUsesNarrowBand) {
  const TransformPlan plan = build_plan(JacobiParams(0, 0), 20, 6);
  const std::vector<double> b{0.5, -1.0, 0.25};
  std::vector<double> row(5);
  plan.moments().combine_row(b, 10, row);
  for (std::size_t c = 0; c < 5; ++c) {
    double s = 0;
    for (std::size_t r = 0; r < b.size(); ++r) s += b[r] * plan.moments().at(r, 10, 8 + c);
    EXPECT_NEAR(row[c], s, 1e-13);
  }
}
