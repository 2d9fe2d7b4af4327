// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "opsparse/transform_plan.hpp"
#include "test_util.hpp"

using namespace opsparse;
using opsparse::testing::dense_f;
using opsparse::testing::jacobi_explicit;
using opsparse::testing::weighted_integral;

namespace {

constexpr double kPi = std::numbers::pi;

struct AB {
  double a, b;
};
const AB kParams[] = {{-0.5, -0.5}, {0.0, 0.0}, {0.5, 0.5}, {1.5, -0.3}};

}  // namespace

TEST(Roots, ChebyshevClosedForm) {
  const RootSet r = compute_roots(JacobiParams(-0.5, -0.5), 4);
  ASSERT_EQ(r.theta.size(), 4u);
  for (std::size_t l = 0; l < 4; ++l) {
    EXPECT_NEAR(r.theta[l], (2.0 * l + 1.0) * kPi / 8.0, 1e-14);
    EXPECT_NEAR(r.lambda[l], std::cos(r.theta[l]), 1e-15);
  }
}

TEST(Roots, GaussLegendreTwoPoint) {
  const RootSet r = compute_roots(JacobiParams(0, 0), 2);
  ASSERT_EQ(r.lambda.size(), 2u);
  EXPECT_NEAR(r.lambda[0], 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.lambda[1], -1.0 / std::sqrt(3.0), 1e-15);
  const auto w = compute_weights(JacobiParams(0, 0), r.lambda);
  EXPECT_NEAR(w[0], 1.0, 1e-14);
  EXPECT_NEAR(w[1], 1.0, 1e-14);
}

TEST(Roots, AreSimpleRootsInAscendingAngle) {
  for (const auto& ab : kParams) {
    for (std::size_t n : {1u, 7u, 64u, 300u}) {
      const JacobiParams p(ab.a, ab.b);
      const RootSet r = compute_roots(p, n);
      ASSERT_EQ(r.theta.size(), n);
      for (std::size_t l = 0; l < n; ++l) {
        if (l) {
          EXPECT_LT(r.theta[l - 1], r.theta[l]);
        }
        EXPECT_GT(r.theta[l], 0.0);
        EXPECT_LT(r.theta[l], kPi);
        // Residual relative to the derivative scale of the orthonormal p_N.
        const double res = eval_orthonormal(p, n, r.lambda[l]);
        const double slope = std::abs(eval_derivative(p, n, r.lambda[l])) / std::sqrt(norm_factor(p, n));
        EXPECT_LT(std::abs(res), 1e-12 * std::max(1.0, slope)) << "n=" << n << " l=" << l;
      }
    }
  }
}

TEST(Weights, SymmetricForSymmetricWeight) {
  const JacobiParams p(0.7, 0.7);
  const RootSet r = compute_roots(p, 33);
  const auto w = compute_weights(p, r.lambda);
  for (std::size_t l = 0; l < w.size(); ++l) EXPECT_NEAR(w[l], w[w.size() - 1 - l], 1e-12);
}

TEST(Weights, SumToTotalMass) {
  for (const auto& ab : kParams) {
    const JacobiParams p(ab.a, ab.b);
    const RootSet r = compute_roots(p, 50);
    const auto w = compute_weights(p, r.lambda);
    double s = 0.0;
    for (double x : w) s += x;
    const double mass = weighted_integral(ab.a, ab.b, [](double) { return 1.0; });
    EXPECT_NEAR(s / mass, 1.0, 1e-10);
  }
}

TEST(Plan, OrthogonalForTestedParameters) {
  for (const auto& ab : kParams) {
    for (std::size_t n : {16u, 64u, 256u}) {
      const TransformPlan plan = build_plan(JacobiParams(ab.a, ab.b), n);
      const auto f = dense_f(plan);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
          double s = 0.0;
          for (std::size_t l = 0; l < n; ++l) s += f[l * n + i] * f[l * n + j];
          err = std::max(err, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
      }
      EXPECT_LE(err, 1e-8) << "a=" << ab.a << " b=" << ab.b << " n=" << n;
    }
  }
}

TEST(Plan, QuadratureExactForMonomials) {
  for (const auto& ab : kParams) {
    const std::size_t n = 16;
    const TransformPlan plan = build_plan(JacobiParams(ab.a, ab.b), n);
    for (std::size_t m = 0; m <= 2 * n - 1; ++m) {
      double s = 0.0;
      for (std::size_t l = 0; l < n; ++l) s += std::pow(plan.lambda()[l], m) * plan.weights()[l];
      const double want = weighted_integral(ab.a, ab.b, [&](double x) { return std::pow(x, m); });
      const double scale = weighted_integral(ab.a, ab.b, [&](double x) { return std::pow(std::abs(x), m); });
      EXPECT_NEAR(s, want, 1e-8 * scale) << "m=" << m;
    }
  }
}

TEST(Plan, ChebyshevEntriesAreCosines) {
  const std::size_t n = 32;
  const TransformPlan plan = build_plan(JacobiParams(-0.5, -0.5), n);
  const auto f = dense_f(plan);
  for (std::size_t j = 0; j < n; ++j) {
    const double sign = f[j] < 0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double want = j == 0 ? std::sqrt(1.0 / n)
                                 : std::sqrt(2.0 / n) * std::cos(kPi / n * j * (i + 0.5));
      EXPECT_NEAR(sign * f[i * n + j], want, 1e-12);
    }
  }
  // The largest sampled cosine is cos(pi / (2N)), reached at j = 1, i = N - 1.
  EXPECT_NEAR(plan.flatness(), std::sqrt(2.0 / n) * std::cos(kPi / (2.0 * n)), 1e-12);
}

TEST(Plan, EntriesMatchExplicitPolynomials) {
  const double a = 1.5, b = -0.3;
  const TransformPlan plan = build_plan(JacobiParams(a, b), 12);
  for (std::size_t l = 0; l < 12; ++l) {
    for (std::size_t j = 0; j < 12; ++j) {
      const double want = std::sqrt(plan.weights()[l]) * jacobi_explicit(a, b, j, plan.lambda()[l]) /
                          std::sqrt(norm_factor(JacobiParams(a, b), j));
      EXPECT_NEAR(plan.entry(l, j), want, 1e-11);
    }
  }
}

TEST(Plan, FlatnessBoundedAndMatchesScan) {
  for (const auto& ab : kParams) {
    for (std::size_t n : {64u, 128u, 256u, 512u}) {
      const TransformPlan plan = build_plan(JacobiParams(ab.a, ab.b), n);
      const auto f = dense_f(plan);
      double u = 0.0;
      for (double x : f) u = std::max(u, std::abs(x));
      EXPECT_NEAR(plan.flatness(), u, 1e-14);
      EXPECT_GT(plan.flatness(), 0.0);
      EXPECT_LE(std::sqrt(double(n)) * plan.flatness(), 5.0);
    }
  }
}

TEST(Plan, ForwardInverseRoundTrip) {
  const TransformPlan plan = build_plan(JacobiParams(0.5, 0.5), 128);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> x(128);
  for (double& v : x) v = g(rng);
  const auto xh = apply_forward(plan, x);
  double nx = 0, nxh = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    nx += x[i] * x[i];
    nxh += xh[i] * xh[i];
  }
  EXPECT_NEAR(std::sqrt(nxh), std::sqrt(nx), 1e-8);
  const auto back = apply_inverse(plan, xh);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back[i], x[i], 1e-10);

  std::vector<double> e0(128, 0.0);
  e0[0] = 1.0;
  const auto col = apply_forward(plan, apply_inverse(plan, e0));
  for (std::size_t i = 0; i < col.size(); ++i) EXPECT_NEAR(col[i], i == 0 ? 1.0 : 0.0, 1e-8);
}

TEST(Plan, DenseAndRecurrencePathsAgree) {
  const JacobiParams p(0.2, -0.6);
  const TransformPlan dense = build_plan(p, 200, PlanOptions{0, 4096});
  const TransformPlan lean = build_plan(p, 200, PlanOptions{0, 0});
  ASSERT_NE(dense.dense(), nullptr);
  ASSERT_EQ(lean.dense(), nullptr);
  std::vector<double> r1(200), r2(200), pre(57);
  for (std::size_t l : {0u, 99u, 199u}) {
    dense.row(l, r1);
    lean.row(l, r2);
    lean.row_prefix(l, pre);
    for (std::size_t j = 0; j < 200; ++j) {
      EXPECT_NEAR(r1[j], r2[j], 1e-13);
      EXPECT_NEAR(lean.entry(l, j), r1[j], 1e-13);
      if (j < pre.size()) {
        EXPECT_EQ(pre[j], r2[j]);
      }
    }
  }
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<double> x(200);
  for (double& v : x) v = g(rng);
  const auto a = apply_forward(dense, x), b = apply_forward(lean, x);
  for (std::size_t i = 0; i < 200; ++i) EXPECT_NEAR(a[i], b[i], 1e-11);
}

TEST(Plan, MultiplyRowsMatchesRows) {
  const TransformPlan plan = build_plan(JacobiParams(0, 1), 40);
  const std::vector<std::size_t> rows{3, 17, 39};
  std::vector<double> mat(40 * 2);
  for (std::size_t i = 0; i < mat.size(); ++i) mat[i] = std::sin(0.3 * i);
  std::vector<double> out(rows.size() * 2);
  plan.multiply_rows(rows, mat, 2, out);
  std::vector<double> row(40);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    plan.row(rows[r], row);
    for (std::size_t c = 0; c < 2; ++c) {
      double s = 0;
      for (std::size_t j = 0; j < 40; ++j) s += row[j] * mat[j * 2 + c];
      EXPECT_NEAR(out[r * 2 + c], s, 1e-12);
    }
  }
}

TEST(Plan, BucketsAndRangesPartitionRoots) {
  const TransformPlan plan = build_plan(JacobiParams(1.5, -0.3), 100);
  std::vector<int> seen(100, 0);
  for (std::size_t i = 0; i < 100; ++i) {
    for (std::size_t l : plan.bucket(i)) {
      ++seen[l];
      EXPECT_GE(plan.theta()[l], i * kPi / 100 - 1e-15);
      EXPECT_LT(plan.theta()[l], (i + 1) * kPi / 100 + 1e-15);
    }
  }
  for (int c : seen) EXPECT_EQ(c, 1);
  const double a = 0.7, b = 1.9;
  const auto in = plan.roots_in(a, b);
  std::vector<std::size_t> want;
  for (std::size_t l = 0; l < 100; ++l) {
    if (plan.theta()[l] >= a && plan.theta()[l] <= b) want.push_back(l);
  }
  EXPECT_EQ(in, want);
  EXPECT_TRUE(plan.roots_in(1.0, 1.0 + 1e-9).size() <= 1);
  EXPECT_TRUE(plan.roots_in(2.0, 1.0).empty());
}

TEST(Plan, RootSpacingConstantIsStable) {
  for (const auto& ab : kParams) {
    double prev = -1.0;
    for (std::size_t n : {64u, 256u, 1024u}) {
      const TransformPlan plan = build_plan(JacobiParams(ab.a, ab.b), n);
      double c = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        c = std::max(c, std::abs(plan.theta()[l] * n / kPi - static_cast<double>(l)));
      }
      if (prev > 0) {
        EXPECT_NEAR(c / prev, 1.0, 0.2) << "a=" << ab.a << " n=" << n;
      }
      prev = c;
    }
  }
}

TEST(Plan, WindowsHoldDensityRange) {
  for (const auto& ab : kParams) {
    const std::size_t n = 256;
    const TransformPlan plan = build_plan(JacobiParams(ab.a, ab.b), n);
    // Windows theta_i +/- g/2 with g well above the edge effect scale.
    for (double g : {0.3, 0.6}) {
      for (std::size_t i = 0; i < n; i += 7) {
        const double t = plan.theta()[i];
        if (t - g / 2 < 0 || t + g / 2 > kPi) continue;
        const double cnt = static_cast<double>(plan.roots_in(t - g / 2, t + g / 2).size());
        EXPECT_GE(cnt, g * n / (2 * kPi));
        EXPECT_LE(cnt, 3 * g * n / (2 * kPi));
      }
    }
  }
}

TEST(Plan, DeterministicAndValidated) {
  const TransformPlan a = build_plan(JacobiParams(0.5, 0.5), 64, 4);
  const TransformPlan b = build_plan(JacobiParams(0.5, 0.5), 64, 4);
  EXPECT_TRUE(std::equal(a.theta().begin(), a.theta().end(), b.theta().begin()));
  EXPECT_TRUE(std::equal(a.weights().begin(), a.weights().end(), b.weights().begin()));
  EXPECT_TRUE(a.moments() == b.moments());
  EXPECT_THROW(build_plan(JacobiParams(0, 0), 0), std::invalid_argument);
}
