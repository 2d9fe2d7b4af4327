// SPDX-License-Identifier: Apache-2.0
#include "opsparse/ksparse.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace opsparse {

namespace {

constexpr double kPi = std::numbers::pi;
// Lower density constant of the root angles: a window of width g holds at
// least g N / (2 pi) roots.
constexpr double kDensity = 1.0 / (2.0 * kPi);

template <class Query, class ZAt>
double simulate(const TransformPlan& plan, Query&& v, ZAt&& z_at, const BoxcarFilter& filter,
                std::size_t j, std::vector<double>& row) {
  const std::size_t n = plan.size();
  if (j >= n) throw std::out_of_range("simulate_query: index out of range");
  if (filter.degree() > plan.moment_degree()) {
    throw std::invalid_argument("simulate_query: filter degree exceeds plan moment degree");
  }
  const std::size_t d = filter.degree();
  const std::size_t lo = j >= d ? j - d : 0;
  const std::size_t hi = std::min(n - 1, j + d);
  row.resize(hi - lo + 1);
  plan.moments().combine_row(filter.coeffs, j, row);
  double acc = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) acc += row[i - lo] * (v(i) - z_at(i));
  return acc;
}

// F^T z_hat at every index, O(|supp| N).
std::vector<double> inverse_dense(const TransformPlan& plan, const SparseApprox& zhat) {
  const std::size_t n = plan.size();
  std::vector<double> out(n, 0.0), row(n);
  for (const auto& [h, val] : zhat) {
    plan.row(h, row);
    for (std::size_t i = 0; i < n; ++i) out[i] += val * row[i];
  }
  return out;
}

// Query access to y = F^{-1} D_b (v_hat - z_hat) for one filter, each entry
// simulated at most once.
struct FilteredAccess {
  const TransformPlan* plan;
  CachedOracle* v;
  const std::vector<double>* z;
  BoxcarFilter filter;
  std::vector<double> value;
  std::vector<char> known;
  std::vector<double> row;

  double operator()(std::size_t j) {
    if (!known[j]) {
      value[j] = simulate(
          *plan, [this](std::size_t i) { return v->query(i); },
          [this](std::size_t i) { return (*z)[i]; }, filter, j, row);
      known[j] = 1;
    }
    return value[j];
  }
};

}  // namespace

double default_gamma(std::size_t k) {
  if (k <= 1) return 1.0;
  return std::min(1.0, 1.7 * kPi / (3.0 * static_cast<double>(k - 1)));
}

ReductionSizes reduction_sizes(const ReductionConfig& cfg, std::size_t n, double flatness) {
  if (cfg.k == 0) throw std::invalid_argument("k must be positive");
  if (!(cfg.delta > 0.0 && cfg.delta <= cfg.delta_cap)) {
    throw std::invalid_argument("delta must lie in (0, delta_cap]");
  }
  if (!(cfg.mu > 0.0 && cfg.mu < 1.0)) throw std::invalid_argument("mu must lie in (0, 1)");
  if (!(cfg.C_big > 0.0 && cfg.c_T0 > 0.0 && cfg.c_T1 > 0.0 && cfg.c_T2 > 0.0 &&
        cfg.c_mu0 > 0.0 && cfg.c_d > 0.0)) {
    throw std::invalid_argument("reduction constants must be positive");
  }
  ReductionSizes s;
  const double k = static_cast<double>(cfg.k);
  s.eps = cfg.delta / cfg.C_big;
  if (!(s.eps < 1.0)) throw std::invalid_argument("delta / C_big must be below 1");
  s.gamma = cfg.gamma > 0.0 ? cfg.gamma : default_gamma(cfg.k);
  const double c0g = kDensity * s.gamma;
  s.mu0 = std::min(0.5, cfg.c_mu0 * cfg.mu * cfg.mu * c0g * c0g / (k * k));
  s.T0 = static_cast<std::size_t>(std::ceil(cfg.c_T0 * std::log(1.0 / s.mu0) / c0g));
  s.T1 = verify_sample_count(n, flatness, s.mu0 / 2.0, s.eps, cfg.c_T1);
  s.T2 = static_cast<std::size_t>(
      std::ceil(cfg.c_T2 * k * std::log(k / s.eps) / std::log(1.0 / s.eps)));
  s.T0 = std::max<std::size_t>(s.T0, 1);
  s.T2 = std::max<std::size_t>(s.T2, 1);
  s.degree_hint = static_cast<std::size_t>(std::ceil(cfg.c_d * std::sqrt(k) / (s.eps * s.gamma)));
  s.filter_width = s.gamma / 4.0;
  s.filter_eps = s.eps / std::sqrt(k);
  return s;
}

std::size_t required_moment_degree(const ReductionConfig& cfg, std::size_t n) {
  const ReductionSizes s = reduction_sizes(cfg, n, 1.0);
  BoxcarOptions opt;
  opt.min_degree = s.degree_hint;
  std::size_t d = 0;
  constexpr int kCenters = 17;
  for (int i = 0; i < kCenters; ++i) {
    const double c = kPi * i / (kCenters - 1);
    d = std::max(d, build_boxcar(c, s.filter_width, s.filter_eps, opt).degree());
  }
  return d;
}

double CachedOracle::query(std::size_t j) {
  if (j >= value_.size()) throw std::out_of_range("oracle index out of range");
  if (!known_[j]) {
    value_[j] = base_->query(j);
    known_[j] = 1;
    ++forwarded_;
  }
  return value_[j];
}

double inverse_at(const TransformPlan& plan, const SparseApprox& zhat, std::size_t i) {
  double acc = 0.0;
  for (const auto& [h, val] : zhat) acc += val * plan.entry(h, i);
  return acc;
}

double simulate_query(const TransformPlan& plan, QueryOracle& v, const SparseApprox& zhat,
                      const BoxcarFilter& filter, std::size_t j) {
  std::vector<double> row;
  return simulate(
      plan, [&](std::size_t i) { return v.query(i); },
      [&](std::size_t i) { return inverse_at(plan, zhat, i); }, filter, j, row);
}

double simulate_query(const TransformPlan& plan, CachedOracle& v, const SparseApprox& zhat,
                      const BoxcarFilter& filter, std::size_t j) {
  std::vector<double> row;
  return simulate(
      plan, [&](std::size_t i) { return v.query(i); },
      [&](std::size_t i) { return inverse_at(plan, zhat, i); }, filter, j, row);
}

std::size_t verify_sample_count(std::size_t n, double flatness, double mu, double eps,
                                double c_T1) {
  if (!(mu > 0.0 && mu < 1.0) || !(eps > 0.0)) {
    throw std::invalid_argument("verify: mu must lie in (0, 1) and eps be positive");
  }
  const double t =
      c_T1 * static_cast<double>(n) * flatness * flatness * std::log(1.0 / mu) / (eps * eps);
  return static_cast<std::size_t>(std::max(1.0, std::ceil(t)));
}

bool verify_samples(const TransformPlan& plan, QueryOracle& y, double v, std::size_t h,
                    std::size_t samples, Rng& rng) {
  if (h >= plan.size()) throw std::out_of_range("verify: index out of range");
  if (v == 0.0 || samples == 0) return false;
  const std::size_t n = plan.size();
  const double cap = 100.0 * std::abs(v) * plan.flatness();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> omega(samples);
  for (auto& j : omega) j = pick(rng);
  const std::size_t top = *std::max_element(omega.begin(), omega.end());
  std::vector<double> frow;
  const double* dense = plan.dense();
  if (!dense) {
    frow.resize(top + 1);
    plan.row_prefix(h, frow);
  }
  double g = 0.0;
  for (std::size_t j : omega) {
    const double fhj = dense ? dense[h * n + j] : frow[j];
    const double r = std::clamp(y.query(j) - v * fhj, -cap, cap);
    g += r * r;
  }
  g *= static_cast<double>(n) / static_cast<double>(samples);
  return g <= v * v / 1000.0;
}

bool verify(const TransformPlan& plan, QueryOracle& y, double v, std::size_t h, double mu,
            double eps, Rng& rng, double c_T1) {
  return verify_samples(plan, y, v, h,
                        verify_sample_count(plan.size(), plan.flatness(), mu, eps, c_T1), rng);
}

OneSparseSolver default_solver(const TransformPlan& plan, const OneSparseConfig& cfg) {
  return [&plan, cfg](QueryOracle& y, double eps, double mu, Rng& rng) {
    return solve_one_sparse(plan, y, eps, mu, rng, cfg);
  };
}

PeelResult peeler(const TransformPlan& plan, CachedOracle& v, const SparseApprox& zhat,
                  const ReductionConfig& cfg, const OneSparseSolver& solver, Rng& rng,
                  PeelStats* stats) {
  const std::size_t n = plan.size();
  if (v.size() != n) throw std::invalid_argument("peeler: oracle size mismatch");
  if (zhat.size() >= cfg.k) throw std::invalid_argument("peeler: z_hat already has k entries");
  const ReductionSizes s = reduction_sizes(cfg, n, plan.flatness());
  PeelStats local;
  PeelStats& st = stats ? *stats : local;

  BoxcarOptions bopt;
  bopt.min_degree = std::min(s.degree_hint, plan.moment_degree());
  bopt.max_degree = plan.moment_degree();
  const auto theta = plan.theta();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  PeelResult out{zhat, false};
  for (std::size_t outer = 0; outer < s.T2; ++outer) {
    const std::vector<double> ztime = inverse_dense(plan, out.z);
    struct Candidate {
      double value;
      std::size_t index;
    };
    std::vector<Candidate> list;
    for (std::size_t t = 0; t < s.T0; ++t) {
      const std::size_t l = pick(rng);
      auto access = std::make_shared<FilteredAccess>(FilteredAccess{
          &plan, &v, &ztime, build_boxcar(theta[l], s.filter_width, s.filter_eps, bopt),
          std::vector<double>(n), std::vector<char>(n), {}});
      QueryOracle y(n, [access](std::size_t j) { return (*access)(j); });
      OneSparseResult r;
      ++st.solves;
      try {
        r = solver(y, 6.0 * s.eps, s.mu0 / 2.0, rng);
      } catch (const RecoveryFailure&) {
        ++st.solver_failures;
        continue;
      }
      if (std::abs(theta[r.index] - theta[l]) > s.gamma / 4.0) continue;
      ++st.in_range;
      if (verify_samples(plan, y, r.value, r.index, s.T1, rng)) {
        ++st.verified;
        list.push_back({r.value, r.index});
      }
    }
    if (list.empty()) continue;
    const Candidate best = *std::max_element(
        list.begin(), list.end(),
        [](const Candidate& a, const Candidate& b) { return std::abs(a.value) < std::abs(b.value); });
    const bool fresh = !out.z.contains(best.index);
    out.z.add(best.index, best.value);
    if (fresh) return out;
  }
  out.stop = true;
  return out;
}

RecoverResult recover(const TransformPlan& plan, QueryOracle& v, const ReductionConfig& cfg,
                      const OneSparseSolver& solver, Rng& rng) {
  CachedOracle cached(v);
  RecoverResult res;
  for (std::size_t i = 0; i < cfg.k; ++i) {
    PeelResult p = peeler(plan, cached, res.z, cfg, solver, rng, &res.stats);
    ++res.peels;
    if (p.stop) break;
    res.z = std::move(p.z);
  }
  res.queries = cached.queries();
  return res;
}

RecoverResult recover(const TransformPlan& plan, QueryOracle& v, const ReductionConfig& cfg,
                      Rng& rng) {
  return recover(plan, v, cfg, default_solver(plan, cfg.one_sparse), rng);
}

double large(std::size_t s, std::span<const double> x) {
  if (s == 0 || s > x.size()) throw std::out_of_range("large: s must lie in [1, N]");
  std::vector<double> a(x.size());
  std::transform(x.begin(), x.end(), a.begin(), [](double t) { return std::abs(t); });
  std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(s - 1), a.end(),
                   std::greater<>());
  return a[s - 1];
}

}  // namespace opsparse
