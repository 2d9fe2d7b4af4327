// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "opsparse/jacobi.hpp"
#include "test_util.hpp"

using namespace opsparse;
using opsparse::testing::jacobi_explicit;
using opsparse::testing::weighted_integral;

TEST(Jacobi, RejectsParametersAtOrBelowMinusOne) {
  EXPECT_THROW(JacobiParams(-1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(JacobiParams(0.0, -1.5), std::invalid_argument);
  EXPECT_NO_THROW(JacobiParams(-0.99, 3.0));
}

TEST(Jacobi, LowDegreeValues) {
  EXPECT_DOUBLE_EQ(eval_unnormalized(JacobiParams(0.5, -0.3), 0, 0.7), 1.0);
  EXPECT_NEAR(eval_unnormalized(JacobiParams(1.0, 0.0), 1, 0.5), 1.25, 1e-15);
  EXPECT_NEAR(eval_unnormalized(JacobiParams(0.0, 0.0), 2, 0.5), -0.125, 1e-15);
}

TEST(Jacobi, MatchesExplicitSum) {
  const double params[][2] = {{-0.5, -0.5}, {0.0, 0.0}, {0.5, 1.5}, {1.5, -0.3}, {-0.7, 2.2}};
  for (const auto& ab : params) {
    const JacobiParams p(ab[0], ab[1]);
    for (std::size_t n = 0; n <= 12; ++n) {
      for (double x : {-0.95, -0.4, 0.0, 0.33, 0.8, 1.0}) {
        const double want = jacobi_explicit(ab[0], ab[1], n, x);
        EXPECT_NEAR(eval_unnormalized(p, n, x), want, 1e-11 * std::max(1.0, std::abs(want)))
            << "a=" << ab[0] << " b=" << ab[1] << " n=" << n << " x=" << x;
      }
    }
  }
}

TEST(Jacobi, NormFactorClosedForms) {
  EXPECT_NEAR(norm_factor(JacobiParams(0, 0), 3), 2.0 / 7.0, 1e-14);
  // P_2^{(-1/2,-1/2)} = (3/8) T_2 and T_2 has squared norm pi/2 under (1-x^2)^{-1/2}.
  EXPECT_NEAR(norm_factor(JacobiParams(-0.5, -0.5), 2), 9.0 / 64.0 * std::numbers::pi / 2.0, 1e-14);
  const double t2 = weighted_integral(-0.5, -0.5, [](double x) { return std::pow(2 * x * x - 1, 2); });
  EXPECT_NEAR(t2, std::numbers::pi / 2.0, 1e-10);
}

TEST(Jacobi, NormFactorMatchesQuadrature) {
  const double params[][2] = {{1.0, 0.0}, {-0.5, -0.5}, {0.5, 1.5}, {1.5, -0.3}};
  for (const auto& ab : params) {
    for (std::size_t j : {0u, 1u, 2u, 5u, 9u}) {
      const double want = weighted_integral(ab[0], ab[1], [&](double x) {
        const double v = jacobi_explicit(ab[0], ab[1], j, x);
        return v * v;
      });
      EXPECT_NEAR(norm_factor(JacobiParams(ab[0], ab[1]), j) / want, 1.0, 1e-10)
          << "a=" << ab[0] << " b=" << ab[1] << " j=" << j;
    }
  }
}

TEST(Jacobi, LogNormFactorFiniteAtLargeDegree) {
  const JacobiParams p(1.5, -0.3);
  for (std::size_t j : {100u, 10000u, 1000000u}) {
    const double v = log_norm_factor(p, j);
    EXPECT_TRUE(std::isfinite(v));
  }
  // h_j ~ 1/j for Legendre.
  EXPECT_NEAR(log_norm_factor(JacobiParams(0, 0), 100000), std::log(2.0 / 200001.0), 1e-9);
}

TEST(Jacobi, OrthonormalValues) {
  const JacobiParams p(0.3, 0.9);
  EXPECT_NEAR(eval_orthonormal(p, 0, 0.1), 1.0 / std::sqrt(norm_factor(p, 0)), 1e-14);
  EXPECT_NEAR(eval_orthonormal(JacobiParams(0, 0), 1, 1.0), std::sqrt(1.5), 1e-14);
  for (std::size_t j = 0; j < 20; ++j) {
    const double x = -0.77 + 0.08 * static_cast<double>(j);
    EXPECT_NEAR(eval_orthonormal(p, j, x),
                jacobi_explicit(0.3, 0.9, j, x) / std::sqrt(norm_factor(p, j)), 1e-10);
  }
}

TEST(Jacobi, DerivativeMatchesFiniteDifference) {
  EXPECT_NEAR(eval_derivative(JacobiParams(0, 0), 1, 0.3), 1.0, 1e-14);
  const auto fd = [](const JacobiParams& p, std::size_t j, double x) {
    const double h = 1e-5;
    return (eval_unnormalized(p, j, x + h) - eval_unnormalized(p, j, x - h)) / (2 * h);
  };
  EXPECT_NEAR(eval_derivative(JacobiParams(0, 0), 3, 0.2), fd(JacobiParams(0, 0), 3, 0.2), 1e-6);
  const JacobiParams q(0.5, 1.5);
  EXPECT_NEAR(eval_derivative(q, 4, -0.4), fd(q, 4, -0.4), 1e-6);
}

TEST(Jacobi, RecurrenceAgreesWithDirectEvaluation) {
  const JacobiParams p(-0.5, 0.25);
  const OrthonormalRecurrence rec(p, 40);
  EXPECT_EQ(rec.max_degree(), 40u);
  EXPECT_NEAR(rec.p0(), eval_orthonormal(p, 0, 0.0), 1e-15);
  std::vector<double> out(41);
  rec.fill(0.37, out);
  for (std::size_t j = 0; j <= 40; ++j) {
    EXPECT_NEAR(out[j], rec.value(j, 0.37), 1e-12);
    EXPECT_NEAR(out[j], eval_orthonormal(p, j, 0.37), 1e-10);
  }
  // x p_j = a_{j+1} p_{j+1} + b_j p_j + a_j p_{j-1}
  for (std::size_t j = 1; j < 40; ++j) {
    EXPECT_NEAR(0.37 * out[j], rec.a(j + 1) * out[j + 1] + rec.b(j) * out[j] + rec.a(j) * out[j - 1],
                1e-12);
  }
}

TEST(Jacobi, ValueManyAndSumSquares) {
  const OrthonormalRecurrence rec(JacobiParams(1.0, 0.5), 30);
  const std::vector<double> xs{-0.9, -0.1, 0.45, 0.99};
  std::vector<double> vals(xs.size()), sumsq(xs.size()), maxabs(xs.size());
  rec.value_many(17, xs, vals);
  rec.sum_squares_many(25, xs, sumsq, maxabs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(vals[i], rec.value(17, xs[i]), 1e-12);
    double s = 0.0, m = 0.0;
    for (std::size_t j = 0; j < 25; ++j) {
      const double v = rec.value(j, xs[i]);
      s += v * v;
      m = std::max(m, std::abs(v));
    }
    EXPECT_NEAR(sumsq[i], s, 1e-10 * s);
    EXPECT_NEAR(maxabs[i], m, 1e-12);
  }
}
