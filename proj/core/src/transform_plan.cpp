// SPDX-License-Identifier: Apache-2.0
#include "opsparse/transform_plan.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace opsparse {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kLanes = 8;

struct Bracket {
  double lo;
  double hi;
  double flo;  // f(lo)
  double start;
};

// Sign changes of f on a uniform angle grid with K*n intervals.
std::vector<Bracket> scan_grid(const OrthonormalRecurrence& rec, std::size_t n, std::size_t K) {
  const std::size_t m = K * n;
  std::vector<double> t(m + 1), x(m + 1), f(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    t[i] = kPi * static_cast<double>(i) / static_cast<double>(m);
    x[i] = std::cos(t[i]);
  }
  x[0] = 1.0;
  x[m] = -1.0;
  rec.value_many(n, x, f);
  std::vector<Bracket> out;
  for (std::size_t i = 0; i < m; ++i) {
    if (f[i] == 0.0) {
      // Exact zero on the grid: bracket it tightly.
      const double lo = i == 0 ? t[0] : 0.5 * (t[i - 1] + t[i]);
      out.push_back({lo, 0.5 * (t[i] + t[i + 1]), i == 0 ? f[0] : f[i - 1], t[i]});
    } else if ((f[i] < 0) != (f[i + 1] < 0) && f[i + 1] != 0.0) {
      out.push_back({t[i], t[i + 1], f[i], 0.5 * (t[i] + t[i + 1])});
    }
  }
  return out;
}

}  // namespace

RootSet compute_roots(const JacobiParams& p, std::size_t n) {
  if (n == 0) throw std::invalid_argument("N must be positive");
  const OrthonormalRecurrence rec(p, n);
  const JacobiParams shifted(p.alpha + 1.0, p.beta + 1.0);
  const OrthonormalRecurrence drec(shifted, n - 1);
  const double nn = static_cast<double>(n);
  // d/dx p_n = (n+a+b+1)/2 * sqrt(h'_{n-1} / h_n) * p'_{n-1} with primed
  // quantities for the shifted parameters.
  const double dscale = 0.5 * (nn + p.alpha + p.beta + 1.0) *
                        std::sqrt(norm_factor(shifted, n - 1) / norm_factor(p, n));

  // Asymptotic guesses, then midpoints between consecutive guesses as brackets.
  std::vector<double> guess(n);
  const double denom = nn + p.n_shift();
  for (std::size_t m = 0; m < n; ++m) {
    const double g = (static_cast<double>(m) + 0.5 * p.alpha + 0.75) * kPi / denom;
    guess[m] = std::clamp(g, 1e-300, kPi);
  }
  std::vector<double> edge(n + 1), ex(n + 1), ef(n + 1);
  edge[0] = 0.0;
  edge[n] = kPi;
  for (std::size_t m = 1; m < n; ++m) edge[m] = 0.5 * (guess[m - 1] + guess[m]);
  for (std::size_t m = 0; m <= n; ++m) ex[m] = std::cos(edge[m]);
  ex[0] = 1.0;
  ex[n] = -1.0;
  rec.value_many(n, ex, ef);

  std::vector<Bracket> brackets;
  bool ok = true;
  for (std::size_t m = 0; m < n && ok; ++m) {
    ok = ef[m] != 0.0 && ef[m + 1] != 0.0 && ((ef[m] < 0) != (ef[m + 1] < 0)) &&
         guess[m] > edge[m] && guess[m] < edge[m + 1];
  }
  if (ok) {
    brackets.reserve(n);
    for (std::size_t m = 0; m < n; ++m) brackets.push_back({edge[m], edge[m + 1], ef[m], guess[m]});
  } else {
    for (std::size_t K = 4; K <= 256 && brackets.size() != n; K *= 2) {
      brackets = scan_grid(rec, n, K);
    }
    if (brackets.size() != n) {
      throw std::runtime_error("root bracketing found " + std::to_string(brackets.size()) +
                               " sign changes, expected " + std::to_string(n));
    }
  }

  // Safeguarded Newton in the angle variable, all roots advanced together.
  std::vector<double> theta(n);
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), 0);
  for (std::size_t m = 0; m < n; ++m) theta[m] = brackets[m].start;
  std::vector<double> xs, fv, dv;
  for (int iter = 0; iter < 100 && !active.empty(); ++iter) {
    xs.resize(active.size());
    fv.resize(active.size());
    dv.resize(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) xs[i] = std::cos(theta[active[i]]);
    rec.value_many(n, xs, fv);
    drec.value_many(n - 1, xs, dv);
    std::vector<std::size_t> still;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const std::size_t m = active[i];
      Bracket& b = brackets[m];
      const double t = theta[m];
      const double f = fv[i];
      if (f == 0.0) continue;
      if ((f < 0) == (b.flo < 0)) {
        b.lo = t;
        b.flo = f;
      } else {
        b.hi = t;
      }
      const double df = -std::sin(t) * dscale * dv[i];
      double next = df != 0.0 ? t - f / df : 0.5 * (b.lo + b.hi);
      if (!(next >= b.lo && next <= b.hi)) next = 0.5 * (b.lo + b.hi);
      theta[m] = next;
      const double step = std::abs(next - t);
      // Quadratic convergence: once a step is this small the new iterate is
      // accurate to rounding.
      if (step > 1e-9 * std::max(t, 1e-3) && b.hi > b.lo) {
        still.push_back(m);
      }
    }
    active.swap(still);
  }

  RootSet roots;
  roots.theta = std::move(theta);
  roots.lambda.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    roots.lambda[m] = std::cos(roots.theta[m]);
    if (!(roots.theta[m] > 0.0 && roots.theta[m] < kPi) ||
        (m > 0 && !(roots.theta[m] > roots.theta[m - 1]))) {
      throw std::runtime_error("root refinement produced an invalid ordering");
    }
  }
  return roots;
}

std::vector<double> compute_weights(const JacobiParams& p, std::span<const double> lambda) {
  const std::size_t n = lambda.size();
  const OrthonormalRecurrence rec(p, n == 0 ? 0 : n - 1);
  std::vector<double> sumsq(n), maxabs(n), w(n);
  rec.sum_squares_many(n, lambda, sumsq, maxabs);
  for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / sumsq[i];
  return w;
}

TransformPlan::TransformPlan(const JacobiParams& p, std::vector<double> theta,
                             std::vector<double> lambda, std::vector<double> weights,
                             double flatness, MomentMatrices moments, std::size_t dense_limit)
    : params_(p),
      theta_(std::move(theta)),
      lambda_(std::move(lambda)),
      weights_(std::move(weights)),
      flatness_(flatness),
      moments_(std::move(moments)) {
  const std::size_t n = theta_.size();
  if (n == 0 || lambda_.size() != n || weights_.size() != n) {
    throw std::invalid_argument("plan arrays must have equal nonzero length");
  }
  if (moments_.size() != n) throw std::invalid_argument("moment size mismatch");
  finish(dense_limit);
}

void TransformPlan::finish(std::size_t dense_limit) {
  const std::size_t n = theta_.size();
  rec_ = OrthonormalRecurrence(params_, n);
  bucket_start_.assign(n + 1, 0);
  std::vector<std::size_t> which(n);
  for (std::size_t l = 0; l < n; ++l) {
    const double pos = theta_[l] * static_cast<double>(n) / kPi;
    which[l] = std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::max(0.0, pos)));
    ++bucket_start_[which[l] + 1];
  }
  std::partial_sum(bucket_start_.begin(), bucket_start_.end(), bucket_start_.begin());
  bucket_items_.resize(n);
  std::vector<std::size_t> fill = bucket_start_;
  for (std::size_t l = 0; l < n; ++l) bucket_items_[fill[which[l]]++] = l;

  dense_.clear();
  if (n <= dense_limit) {
    dense_.resize(n * n);
    for (std::size_t l = 0; l < n; ++l) {
      std::span<double> r(dense_.data() + l * n, n);
      rec_.fill(lambda_[l], r);
      const double s = std::sqrt(weights_[l]);
      for (double& v : r) v *= s;
    }
  }
}

std::span<const std::size_t> TransformPlan::bucket(std::size_t i) const {
  return {bucket_items_.data() + bucket_start_[i], bucket_start_[i + 1] - bucket_start_[i]};
}

std::vector<std::size_t> TransformPlan::roots_in(double a, double b) const {
  std::vector<std::size_t> out;
  const std::size_t n = size();
  if (!(b >= a)) return out;
  const double scale = static_cast<double>(n) / kPi;
  const double lo = std::max(0.0, std::floor(a * scale));
  const double hi = std::min(static_cast<double>(n - 1), std::floor(b * scale));
  if (lo > hi) return out;
  for (auto i = static_cast<std::size_t>(lo); i <= static_cast<std::size_t>(hi); ++i) {
    for (std::size_t l : bucket(i)) {
      if (theta_[l] >= a && theta_[l] <= b) out.push_back(l);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void TransformPlan::row(std::size_t l, std::span<double> out) const {
  if (out.size() != size()) throw std::invalid_argument("row buffer must have length N");
  row_prefix(l, out);
}

void TransformPlan::row_prefix(std::size_t l, std::span<double> out) const {
  if (l >= size() || out.size() > size()) throw std::out_of_range("row index out of range");
  if (!dense_.empty()) {
    std::copy_n(dense_.data() + l * size(), out.size(), out.begin());
    return;
  }
  rec_.fill(lambda_[l], out);
  const double s = std::sqrt(weights_[l]);
  for (double& v : out) v *= s;
}

double TransformPlan::entry(std::size_t l, std::size_t j) const {
  if (l >= size() || j >= size()) throw std::out_of_range("entry index out of range");
  if (!dense_.empty()) return dense_[l * size() + j];
  return std::sqrt(weights_[l]) * rec_.value(j, lambda_[l]);
}

void TransformPlan::multiply_rows(std::span<const std::size_t> rows, std::span<const double> mat,
                                  std::size_t ncols, std::span<double> out) const {
  const std::size_t n = size();
  if (mat.size() != n * ncols || out.size() != rows.size() * ncols) {
    throw std::invalid_argument("multiply_rows: shape mismatch");
  }
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> C(mat.data(), static_cast<Eigen::Index>(n),
                             static_cast<Eigen::Index>(ncols));
  Eigen::Map<RowMat> O(out.data(), static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(ncols));
  if (!dense_.empty()) {
    Eigen::Map<const RowMat> F(dense_.data(), static_cast<Eigen::Index>(n),
                               static_cast<Eigen::Index>(n));
    if (rows.size() * 4 >= n) {
      RowMat all = F * C;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        O.row(static_cast<Eigen::Index>(r)) = all.row(static_cast<Eigen::Index>(rows[r]));
      }
    } else {
      for (std::size_t r = 0; r < rows.size(); ++r) {
        O.row(static_cast<Eigen::Index>(r)) = F.row(static_cast<Eigen::Index>(rows[r])) * C;
      }
    }
    return;
  }
  // No dense copy: run the recurrence for a batch of rows and accumulate.
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> acc(kLanes * ncols);
  for (std::size_t base = 0; base < rows.size(); base += kLanes) {
    const std::size_t m = std::min(kLanes, rows.size() - base);
    std::array<double, kLanes> x{}, prev{}, cur{};
    for (std::size_t i = 0; i < m; ++i) x[i] = lambda_[rows[base + i]];
    cur.fill(rec_.p0());
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double* cj = mat.data() + j * ncols;
      for (std::size_t i = 0; i < kLanes; ++i) {
        double* ai = acc.data() + i * ncols;
        for (std::size_t c = 0; c < ncols; ++c) ai[c] += cur[i] * cj[c];
      }
      if (j + 1 == n) break;
      const double bj = rec_.b(j), aj = rec_.a(j), ia = 1.0 / rec_.a(j + 1);
      for (std::size_t i = 0; i < kLanes; ++i) {
        const double next = ((x[i] - bj) * cur[i] - aj * prev[i]) * ia;
        prev[i] = cur[i];
        cur[i] = next;
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      const double s = std::sqrt(weights_[rows[base + i]]);
      for (std::size_t c = 0; c < ncols; ++c) out[(base + i) * ncols + c] = s * acc[i * ncols + c];
    }
  }
}

TransformPlan build_plan(const JacobiParams& p, std::size_t n, const PlanOptions& options) {
  if (n < 2) throw std::invalid_argument("build_plan requires N >= 2");
  if (options.moment_degree >= n) throw std::invalid_argument("moment degree must be below N");
  TransformPlan plan;
  plan.params_ = p;
  RootSet roots = compute_roots(p, n);
  plan.theta_ = std::move(roots.theta);
  plan.lambda_ = std::move(roots.lambda);

  const OrthonormalRecurrence rec(p, n);
  std::vector<double> sumsq(n), maxabs(n);
  rec.sum_squares_many(n, plan.lambda_, sumsq, maxabs);
  plan.weights_.resize(n);
  double U = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    plan.weights_[l] = 1.0 / sumsq[l];
    U = std::max(U, std::sqrt(plan.weights_[l]) * maxabs[l]);
  }
  plan.flatness_ = U;
  plan.moments_ = build_moments(rec, n, options.moment_degree);
  plan.finish(options.dense_limit);
  return plan;
}

TransformPlan build_plan(const JacobiParams& p, std::size_t n, std::size_t moment_degree) {
  PlanOptions options;
  options.moment_degree = moment_degree;
  return build_plan(p, n, options);
}

std::vector<double> apply_forward(const TransformPlan& plan, std::span<const double> x) {
  const std::size_t n = plan.size();
  if (x.size() != n) throw std::invalid_argument("apply_forward: length mismatch");
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  std::vector<double> out(n);
  plan.multiply_rows(rows, x, 1, out);
  return out;
}

std::vector<double> apply_inverse(const TransformPlan& plan, std::span<const double> xhat) {
  const std::size_t n = plan.size();
  if (xhat.size() != n) throw std::invalid_argument("apply_inverse: length mismatch");
  std::vector<double> out(n, 0.0);
  if (const double* F = plan.dense()) {
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMat> Fm(F, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::Map<const Eigen::VectorXd> v(xhat.data(), static_cast<Eigen::Index>(n));
    Eigen::Map<Eigen::VectorXd> o(out.data(), static_cast<Eigen::Index>(n));
    o.noalias() = Fm.transpose() * v;
    return out;
  }
  std::vector<double> r(n);
  for (std::size_t l = 0; l < n; ++l) {
    if (xhat[l] == 0.0) continue;
    plan.row(l, r);
    for (std::size_t j = 0; j < n; ++j) out[j] += xhat[l] * r[j];
  }
  return out;
}

double flatness(const TransformPlan& plan) { return plan.flatness(); }

}  // namespace opsparse
