// SPDX-License-Identifier: Apache-2.0
// opsparse: plan management, signal synthesis and recovery experiments.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "opsparse/dct_bridge.hpp"
#include "opsparse/ksparse.hpp"
#include "opsparse/onesparse.hpp"
#include "opsparse/plan_io.hpp"
#include "opsparse/transform_plan.hpp"
#include "opsparse_tools/experiment.hpp"
#include "opsparse_tools/signal_io.hpp"
#include "opsparse_tools/synth.hpp"

using namespace opsparse;
using namespace opsparse::tools;

namespace {

/// Bad flags or inputs; exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int fail(const std::string& kind, const std::string& message, int code) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
  return code;
}

struct PlanSource {
  std::string path;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t n = 0;

  void add(CLI::App* app, bool need_n = true) {
    app->add_option("--plan", path, "Plan file from 'opsparse plan'");
    app->add_option("--alpha", alpha, "Jacobi alpha (> -1)");
    app->add_option("--beta", beta, "Jacobi beta (> -1)");
    auto* opt = app->add_option("--n", n, "Transform length");
    if (need_n) opt->check(CLI::PositiveNumber);
  }

  /// Loads the plan file or builds one with the requested moment degree.
  TransformPlan get(std::size_t degree = 0) const {
    const JacobiParams p(alpha, beta);
    if (!path.empty()) {
      TransformPlan plan = load_plan(std::filesystem::path(path));
      if (plan.moment_degree() < degree) {
        throw UsageError("plan moment degree " + std::to_string(plan.moment_degree()) +
                         " is below the required " + std::to_string(degree));
      }
      return plan;
    }
    if (n == 0) throw UsageError("either --plan or --n is required");
    return build_plan(p, n, PlanOptions{degree, 4096});
  }
};

void check_params(const TransformPlan& plan, const JacobiParams& p) {
  if (!(plan.params() == p)) throw UsageError("signal and plan have different (alpha, beta)");
}

struct OneSparseFlags {
  OneSparseConfig cfg;
  void add(CLI::App* app) {
    app->add_option("--nu", cfg.nu, "Spread threshold nu")->capture_default_str();
    app->add_option("--delta0", cfg.delta0, "Spread accuracy delta0 (0: asymptotic)")
        ->capture_default_str();
    app->add_option("--arccos-eps0", cfg.arccos_eps0, "ArcCos noise level (0: asymptotic)")
        ->capture_default_str();
    app->add_option("--c-theta", cfg.c_theta)->capture_default_str();
    app->add_option("--c-s", cfg.c_s, "Check sample multiplier")->capture_default_str();
    app->add_option("--c-R", cfg.c_R, "Check rounds multiplier")->capture_default_str();
    app->add_option("--c-Rcos", cfg.c_Rcos, "Cosine query rounds multiplier")->capture_default_str();
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::vector<double> complex_to_pairs(const std::vector<cplx>& f) {
  std::vector<double> out;
  out.reserve(2 * f.size());
  for (const cplx& z : f) {
    out.push_back(z.real());
    out.push_back(z.imag());
  }
  return out;
}

std::vector<cplx> pairs_to_complex(const std::vector<double>& d) {
  if (d.size() % 2 != 0) throw UsageError("embedded signal has odd length");
  std::vector<cplx> out(d.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {d[2 * i], d[2 * i + 1]};
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse recovery for Jacobi polynomial transforms"};
  app.require_subcommand(1);

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Build and save a transform plan");
  PlanSource plan_src;
  plan_src.add(plan_cmd);
  std::size_t plan_degree = 0, plan_k = 0;
  double plan_delta = 0.05;
  std::string plan_out;
  plan_cmd->add_option("--degree", plan_degree, "Moment degree d");
  plan_cmd->add_option("--for-k", plan_k, "Use the moment degree recover needs for this k");
  plan_cmd->add_option("--delta", plan_delta, "Target accuracy used with --for-k")->capture_default_str();
  plan_cmd->add_option("--out", plan_out, "Output plan file")->required();

  // transform
  auto* tr_cmd = app.add_subcommand("transform", "Apply F (time -> transform) or F^T");
  PlanSource tr_src;
  tr_src.add(tr_cmd, false);
  std::string tr_in, tr_out;
  bool tr_inverse = false;
  tr_cmd->add_option("--in", tr_in, "Input signal file")->required();
  tr_cmd->add_option("--out", tr_out, "Output signal file")->required();
  tr_cmd->add_flag("--inverse", tr_inverse, "Apply F^T to a transform-domain vector");

  // synth
  auto* syn_cmd = app.add_subcommand("synth", "Generate v = F^T (x_hat + w_hat)");
  PlanSource syn_src;
  syn_src.add(syn_cmd, false);
  SynthOptions syn;
  std::uint64_t syn_seed = 0;
  std::string syn_out;
  syn_cmd->add_option("--k", syn.k, "Number of spikes")->check(CLI::PositiveNumber);
  syn_cmd->add_option("--sigma", syn.sigma, "Separation as a fraction of N (0: default)");
  syn_cmd->add_option("--noise", syn.noise, "||w_hat|| relative to the smallest spike")
      ->check(CLI::NonNegativeNumber);
  syn_cmd->add_option("--seed", syn_seed);
  syn_cmd->add_option("--out", syn_out, "Output signal file")->required();

  // recover1
  auto* r1_cmd = app.add_subcommand("recover1", "Run the 1-sparse solver on a signal file");
  PlanSource r1_src;
  r1_src.add(r1_cmd, false);
  OneSparseFlags r1_flags;
  r1_flags.add(r1_cmd);
  std::string r1_in;
  double r1_eps = 0.01, r1_mu = 0.1;
  std::uint64_t r1_seed = 0;
  r1_cmd->add_option("--signal", r1_in, "Time-domain signal file")->required();
  r1_cmd->add_option("--eps", r1_eps, "Noise level eps")->capture_default_str();
  r1_cmd->add_option("--mu", r1_mu, "Failure probability")->capture_default_str();
  r1_cmd->add_option("--seed", r1_seed);

  // recover
  auto* rc_cmd = app.add_subcommand("recover", "Seeded k-sparse recovery trials");
  PlanSource rc_src;
  rc_src.n = 2048;
  rc_src.add(rc_cmd);
  ExperimentConfig ex;
  ReductionConfig& red = ex.reduction;
  OneSparseFlags rc_flags;
  rc_flags.add(rc_cmd);
  std::string rc_format = "csv", rc_out = "-";
  bool rc_timing = false;
  rc_cmd->add_option("--k", red.k, "Sparsity")->check(CLI::PositiveNumber)->capture_default_str();
  rc_cmd->add_option("--delta", red.delta, "Target accuracy")->capture_default_str();
  rc_cmd->add_option("--mu", red.mu, "Failure probability")->capture_default_str();
  rc_cmd->add_option("--gamma", red.gamma, "Spike angle separation (0: default)");
  rc_cmd->add_option("--sigma", ex.sigma, "Index separation as a fraction of N (0: default)");
  rc_cmd->add_option("--noise", ex.noise, "||w_hat|| relative to the smallest spike")
      ->check(CLI::NonNegativeNumber);
  rc_cmd->add_option("--trials", ex.trials)->check(CLI::PositiveNumber)->capture_default_str();
  rc_cmd->add_option("--seed", ex.seed)->capture_default_str();
  rc_cmd->add_option("--c-T0", red.c_T0)->capture_default_str();
  rc_cmd->add_option("--c-T1", red.c_T1)->capture_default_str();
  rc_cmd->add_option("--c-T2", red.c_T2)->capture_default_str();
  rc_cmd->add_option("--c-mu0", red.c_mu0)->capture_default_str();
  rc_cmd->add_option("--c-d", red.c_d)->capture_default_str();
  rc_cmd->add_option("--C-big", red.C_big)->capture_default_str();
  rc_cmd->add_option("--format", rc_format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  rc_cmd->add_option("--out", rc_out, "Output file, - for stdout")->capture_default_str();
  rc_cmd->add_flag("--timing", rc_timing, "Add the wall_ms column");
  std::string columns;
  for (const auto& c : csv_columns(true)) columns += (columns.empty() ? "" : ",") + c;
  rc_cmd->footer(
      "CSV columns: " + columns +
      "\n  support/values lists are ';'-separated; success = rel_error <= 3 delta;"
      "\n  wall_ms only with --timing.  OPSPARSE_THREADS caps the worker count.");

  // dct
  auto* dct_cmd = app.add_subcommand("dct", "Chebyshev transform through a length-2N DFT");
  std::string dct_mode = "transform", dct_in, dct_out = "-";
  dct_cmd->add_option("mode", dct_mode, "transform | embed | extract | check")
      ->check(CLI::IsMember({"transform", "embed", "extract", "check"}))
      ->capture_default_str();
  dct_cmd->add_option("--in", dct_in, "Input signal file")->required();
  dct_cmd->add_option("--out", dct_out, "Output signal file (check: report, - for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    if (*plan_cmd) {
      const JacobiParams p(plan_src.alpha, plan_src.beta);
      std::size_t d = plan_degree;
      if (plan_k > 0) {
        ReductionConfig cfg;
        cfg.k = plan_k;
        cfg.delta = plan_delta;
        d = std::max(d, required_moment_degree(cfg, plan_src.n));
      }
      const TransformPlan plan = build_plan(p, plan_src.n, PlanOptions{d, 0});
      save_plan(plan, std::filesystem::path(plan_out));
      std::cout << nlohmann::json{{"n", plan.size()},
                                  {"moment_degree", plan.moment_degree()},
                                  {"flatness", plan.flatness()}}
                       .dump()
                << '\n';
    } else if (*tr_cmd) {
      SignalFile s = read_signal(tr_in);
      tr_src.alpha = s.params.alpha;
      tr_src.beta = s.params.beta;
      if (tr_src.n == 0) tr_src.n = s.data.size();
      const TransformPlan plan = tr_src.get();
      check_params(plan, s.params);
      if (plan.size() != s.data.size()) throw UsageError("signal length does not match the plan");
      const char* want = tr_inverse ? "transform" : "time";
      if (s.domain != want) throw UsageError("expected a " + std::string(want) + "-domain signal");
      s.data = tr_inverse ? apply_inverse(plan, s.data) : apply_forward(plan, s.data);
      s.domain = tr_inverse ? "time" : "transform";
      write_signal(tr_out, s);
    } else if (*syn_cmd) {
      const TransformPlan plan = syn_src.get();
      Rng rng = trial_rng(syn_seed, 0);
      syn.n = plan.size();
      const SynthSignal sig = synthesize(syn, rng);
      SignalFile s;
      s.params = plan.params();
      s.data = apply_inverse(plan, sig.noisy);
      s.meta = {{"support", sig.support},
                {"values", sig.values},
                {"k", syn.k},
                {"noise", syn.noise},
                {"seed", syn_seed}};
      write_signal(syn_out, s);
    } else if (*r1_cmd) {
      const SignalFile s = read_signal(r1_in);
      if (s.domain != "time") throw UsageError("recover1 needs a time-domain signal");
      r1_src.alpha = s.params.alpha;
      r1_src.beta = s.params.beta;
      r1_src.n = s.data.size();
      const TransformPlan plan = r1_src.get();
      check_params(plan, s.params);
      if (plan.size() != s.data.size()) throw UsageError("signal length does not match the plan");
      QueryOracle y = QueryOracle::from_vector(s.data);
      Rng rng = trial_rng(r1_seed, 0);
      const OneSparseResult r = solve_one_sparse(plan, y, r1_eps, r1_mu, rng, r1_flags.cfg);
      std::cout << nlohmann::json{{"index", r.index},
                                  {"value", r.value},
                                  {"queries", y.queries()},
                                  {"stage", r.stage}}
                       .dump()
                << '\n';
    } else if (*rc_cmd) {
      const JacobiParams p(rc_src.alpha, rc_src.beta);
      ex.alpha = p.alpha;
      ex.beta = p.beta;
      ex.n = rc_src.n;
      red.one_sparse = rc_flags.cfg;
      if (!(red.delta > 0.0 && red.delta <= red.delta_cap)) {
        throw UsageError("--delta must lie in (0, " + std::to_string(red.delta_cap) + "]");
      }
      const TransformPlan plan = rc_src.get(required_moment_degree(red, rc_src.n));
      check_params(plan, p);
      const auto records = run_trials(plan, ex);
      std::ostringstream os;
      if (rc_format == "csv") {
        write_csv(os, records, rc_timing);
      } else {
        write_json(os, records, rc_timing);
      }
      write_text(rc_out, os.str());
    } else if (*dct_cmd) {
      SignalFile s = read_signal(dct_in);
      if (dct_mode == "extract") {
        s.data = extract(fft(pairs_to_complex(s.data)));
        s.domain = "chebyshev";
        write_signal(dct_out, s);
      } else if (dct_mode == "embed") {
        s.data = complex_to_pairs(embed(s.data).f);
        s.domain = "embedded";
        write_signal(dct_out, s);
      } else if (dct_mode == "transform") {
        s.data = chebyshev_transform_fourier(s.data);
        s.domain = "chebyshev";
        write_signal(dct_out, s);
      } else {
        const auto a = chebyshev_transform_fourier(s.data);
        const auto b = chebyshev_transform_direct(s.data);
        double diff = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
        write_text(dct_out, nlohmann::json{{"n", a.size()}, {"max_abs_diff", diff}}.dump() + "\n");
      }
    }
  } catch (const UsageError& e) {
    return fail("usage", e.what(), 2);
  } catch (const std::invalid_argument& e) {
    return fail("validation", e.what(), 2);
  } catch (const SignalFormatError& e) {
    return fail("signal-format", e.what(), 2);
  } catch (const PlanFormatError& e) {
    return fail("plan-format", e.what(), 2);
  } catch (const RecoveryFailure& e) {
    return fail("recovery", e.what(), 1);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 1);
  }
  return 0;
}
