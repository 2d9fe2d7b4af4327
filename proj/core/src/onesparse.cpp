// SPDX-License-Identifier: Apache-2.0
#include "opsparse/onesparse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "opsparse/arccos.hpp"
#include "opsparse/numtheory.hpp"

namespace opsparse {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCheckEpsCap = 1.0 / 200.0;

double median(std::vector<double> v) {
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
  if (v.size() % 2 == 1) return v[m];
  const double hi = v[m];
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
  return 0.5 * (lo + hi);
}

std::size_t max_index(const SampleSet& s) {
  return s.index.empty() ? 0 : *std::max_element(s.index.begin(), s.index.end());
}

// F[l, j] for every sampled j.  Uses the dense copy when present, otherwise one
// recurrence sweep up to the largest sampled column.
void gather_row(const TransformPlan& plan, const SampleSet& s, std::size_t l,
                std::vector<double>& scratch, std::vector<double>& out) {
  out.resize(s.index.size());
  if (const double* f = plan.dense()) {
    const double* row = f + l * plan.size();
    for (std::size_t i = 0; i < s.index.size(); ++i) out[i] = row[s.index[i]];
    return;
  }
  scratch.resize(max_index(s) + 1);
  plan.row_prefix(l, scratch);
  for (std::size_t i = 0; i < s.index.size(); ++i) out[i] = scratch[s.index[i]];
}

CheckResult check_with_row(const SampleSet& s, std::span<const double> frow, std::size_t n) {
  CheckResult res;
  if (s.rounds == 0 || s.per_round == 0) return res;
  const double scale = static_cast<double>(n) / static_cast<double>(s.per_round);
  std::vector<double> u(s.rounds), v(s.rounds);
  for (std::size_t r = 0; r < s.rounds; ++r) {
    double sq = 0.0, ip = 0.0;
    for (std::size_t i = r * s.per_round; i < (r + 1) * s.per_round; ++i) {
      sq += s.value[i] * s.value[i];
      ip += s.value[i] * frow[i];
    }
    u[r] = std::sqrt(scale * sq);
    v[r] = scale * ip;
  }
  res.norm = median(std::move(u));
  if (res.norm == 0.0) return res;
  res.value = median(std::move(v));
  res.accepted = std::abs(res.value) > res.norm / 10.0;
  return res;
}

double log_cos_weight(const JacobiParams& p, std::size_t j) {
  // log sqrt(h_j * j)
  return 0.5 * (log_norm_factor(p, j) + std::log(static_cast<double>(j)));
}

}  // namespace

SpreadConstants spread_constants(const OneSparseConfig& cfg, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  SpreadConstants c;
  c.nu = cfg.nu;
  c.delta0 = cfg.delta0 > 0.0 ? cfg.delta0 : std::sqrt(eps) / 5000.0;
  c.rho_delta0 = arccos_radius(c.delta0);
  c.arccos_eps0 = cfg.arccos_eps0 > 0.0 ? cfg.arccos_eps0 : std::sqrt(eps);
  c.rho_arccos = arccos_radius(c.arccos_eps0);
  return c;
}

SampleSet draw_samples(QueryOracle& y, std::size_t per_round, std::size_t rounds, Rng& rng) {
  SampleSet s;
  s.rounds = rounds;
  s.per_round = per_round;
  if (y.size() == 0) throw std::invalid_argument("draw_samples: empty oracle");
  std::uniform_int_distribution<std::size_t> pick(0, y.size() - 1);
  s.index.resize(rounds * per_round);
  s.value.resize(rounds * per_round);
  for (auto& j : s.index) j = pick(rng);
  // Querying in ascending index order lets simulated oracles walk their data
  // sequentially; the count is unchanged.
  std::vector<std::size_t> order(s.index.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return s.index[a] < s.index[b]; });
  for (std::size_t o : order) s.value[o] = y.query(s.index[o]);
  return s;
}

std::size_t check_sample_size(std::size_t n, double flatness, double eps,
                              const OneSparseConfig& cfg) {
  const double nd = static_cast<double>(n);
  // The acceptance ratio 1/10 only separates candidates for eps below 1/200,
  // so larger eps do not shrink the sample.
  const double e = std::min(eps, kCheckEpsCap);
  const double l = std::max(std::log(nd) / (e * e), std::numbers::e);
  const double s = cfg.c_s * flatness * flatness * nd * l * std::log(l);
  return static_cast<std::size_t>(std::max(1.0, std::ceil(s)));
}

std::size_t check_rounds(std::size_t candidates, double mu, const OneSparseConfig& cfg) {
  const double r = std::ceil(cfg.c_R * std::log(std::max<double>(1.0, static_cast<double>(candidates)) / mu));
  auto rounds = static_cast<std::size_t>(std::max(1.0, r));
  if (rounds % 2 == 0) ++rounds;
  return rounds;
}

CheckResult check(const TransformPlan& plan, const SampleSet& samples, std::size_t l) {
  if (l >= plan.size()) throw std::out_of_range("check: index out of range");
  std::vector<double> scratch, frow;
  gather_row(plan, samples, l, scratch, frow);
  return check_with_row(samples, frow, plan.size());
}

CheckResult check(const TransformPlan& plan, QueryOracle& y, std::size_t l, double mu, double eps,
                  Rng& rng, const OneSparseConfig& cfg) {
  const SampleSet s = draw_samples(y, check_sample_size(plan.size(), plan.flatness(), eps, cfg),
                                   check_rounds(1, mu, cfg), rng);
  return check(plan, s, l);
}

std::optional<PruneResult> prune(const TransformPlan& plan, QueryOracle& y,
                                 std::span<const std::size_t> candidates, double mu, double eps,
                                 Rng& rng, const OneSparseConfig& cfg) {
  if (candidates.empty()) return std::nullopt;
  const SampleSet s = draw_samples(y, check_sample_size(plan.size(), plan.flatness(), eps, cfg),
                                   check_rounds(candidates.size(), mu, cfg), rng);
  std::optional<PruneResult> best;
  std::vector<double> scratch, frow;
  for (std::size_t l : candidates) {
    gather_row(plan, s, l, scratch, frow);
    const CheckResult c = check_with_row(s, frow, plan.size());
    if (c.accepted && (!best || std::abs(c.value) > std::abs(best->value))) {
      best = PruneResult{l, c.value};
    }
  }
  return best;
}

std::optional<PruneResult> prune(const TransformPlan& plan, QueryOracle& y, double a, double b,
                                 double mu, double eps, Rng& rng, const OneSparseConfig& cfg) {
  const std::vector<std::size_t> cands = plan.roots_in(a, b);
  return prune(plan, y, cands, mu, eps, rng, cfg);
}

std::vector<std::size_t> non_spread_candidates(const TransformPlan& plan, double delta0) {
  const double eps_bad = std::min(1.0, 2.0 * arccos_radius(delta0) / kPi);
  const BadIntervalSet bad = bad_intervals(plan.size(), eps_bad);
  std::vector<std::size_t> out;
  const auto theta = plan.theta();
  for (std::size_t l = 0; l < theta.size(); ++l) {
    if (bad.contains(theta[l] / kPi)) out.push_back(l);
  }
  return out;
}

std::optional<PruneResult> prune_non_spread(const TransformPlan& plan, QueryOracle& y,
                                            double delta0, double mu, double eps, Rng& rng,
                                            const OneSparseConfig& cfg) {
  const std::vector<std::size_t> cands = non_spread_candidates(plan, delta0);
  return prune(plan, y, cands, mu, eps, rng, cfg);
}

double query_cos(const TransformPlan& plan, QueryOracle& y, std::size_t w, std::size_t nprime,
                 std::size_t rounds, double eps, Rng& rng) {
  const std::size_t n = plan.size();
  if (w == 0) return 1.0;
  if (w > nprime || 2 * nprime > n - 1) {
    throw std::invalid_argument("query_cos: need w <= N' and 2 N' <= N - 1");
  }
  if (rounds == 0) throw std::invalid_argument("query_cos: rounds must be positive");
  const JacobiParams& p = plan.params();
  const double floor_d = eps / std::pow(static_cast<double>(n), 1.5);
  std::uniform_int_distribution<std::size_t> pick(nprime, n - 1 - nprime);
  std::vector<double> est(rounds);
  for (std::size_t i = 0; i < rounds; ++i) {
    const std::size_t d = pick(rng);
    const double yd = y.query(d);
    const double ym = y.query(d - w);
    const double yp = y.query(d + w);
    const double den = (yd < 0.0 ? -1.0 : 1.0) * std::max(std::abs(yd), floor_d);
    const double lc = log_cos_weight(p, d);
    const double cm = d - w == 0 ? 0.0 : std::exp(log_cos_weight(p, d - w) - lc);
    const double cp = std::exp(log_cos_weight(p, d + w) - lc);
    est[i] = (cp * yp + cm * ym) / (2.0 * den);
  }
  return median(std::move(est));
}

OneSparseResult solve_one_sparse(const TransformPlan& plan, QueryOracle& y, double eps, double mu,
                                 Rng& rng, const OneSparseConfig& cfg) {
  const std::size_t n = plan.size();
  if (y.size() != n) throw std::invalid_argument("solve_one_sparse: oracle size mismatch");
  if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in (0, 1)");
  const SpreadConstants sc = spread_constants(cfg, eps);
  const double nd = static_cast<double>(n);
  const std::uint64_t start = y.queries();
  auto finish = [&](const PruneResult& r, const char* stage) {
    OneSparseResult out{r.index, r.value, y.queries() - start, stage};
    return out;
  };

  const double c_prime = std::max(cfg.c_theta, 4.0 * std::sqrt(eps) * sc.delta0 * sc.nu);
  const double low = std::min(kPi, c_prime / (sc.nu * std::sqrt(eps) * sc.delta0 * nd));
  if (auto r = prune(plan, y, 0.0, low, mu / 6.0, eps, rng, cfg)) return finish(*r, "prune-low");

  const double high = std::max(0.0, kPi - cfg.c_theta / (sc.nu * nd));
  if (auto r = prune(plan, y, high, kPi, mu / 6.0, eps, rng, cfg)) return finish(*r, "prune-high");

  const double rho2 = std::min(1.0, sc.rho_delta0 * sc.rho_delta0);
  if (auto r = prune_non_spread(plan, y, sc.delta0, mu * rho2, eps, rng, cfg)) {
    return finish(*r, "non-spread");
  }

  const double nu_n = sc.nu * nd;
  if (nu_n < 4.0) throw RecoveryFailure("solve_one_sparse: N too small for the arccos stage");
  const auto tau = static_cast<unsigned>(std::floor(std::log2(nu_n))) - 1;
  const auto nprime = static_cast<std::size_t>(std::floor(2.0 * nu_n));
  const double lnln = std::log(std::max(std::log(nd), 1.0));
  const auto r_cos = static_cast<std::size_t>(
      std::max(1.0, std::ceil(cfg.c_Rcos * (lnln + std::log(1.0 / mu)))));
  const CosQuery cq = [&](std::uint64_t w) {
    return query_cos(plan, y, static_cast<std::size_t>(w), nprime, r_cos, eps, rng);
  };
  Interval ab;
  try {
    ab = approx_arccos(cq, tau, sc.arccos_eps0).interval;
  } catch (const ArcCosError& e) {
    throw RecoveryFailure(std::string("solve_one_sparse: ") + e.what());
  }

  const auto r = prune(plan, y, ab.lo, ab.hi, mu / 6.0, eps, rng, cfg);
  if (!r) throw RecoveryFailure("solve_one_sparse: final prune found no index");
  const CheckResult c = check(plan, y, r->index, mu / 6.0, eps, rng, cfg);
  return finish(PruneResult{r->index, c.value}, "arccos");
}

}  // namespace opsparse
