// Copyright 2026 The CBwLC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../lp_oracles.h"
#include "../test_instances.h"
#include "cbwlc/benchmark.h"
#include "cbwlc/experiment.h"
#include "cbwlc/orchestrator.h"
#include "cbwlc/primal_squarecb.h"
#include "cbwlc/regression.h"
#include "cbwlc/rng.h"

namespace cbwlc {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return 0.5 * (v[(n - 1) / 2] + v[n / 2]);
}

constexpr std::uint64_t kBaseSeed = 1000;
const Noise kBernoulli{NoiseKind::kBernoulli, 0};

// Criteria 3 and 6: one context, arms (r, c_packing, c_covering).
const testing::MeanTable kBanditTable = {
    {{0.9, 0.9, 0.3}, {0.4, 0.1, 0.9}, {0.1, 0.0, 0.6}}};

InstanceSpec BanditInstance(int horizon) {
  return testing::StationaryInstance(horizon, horizon / 2.0, {1, -1},
                                     kBanditTable, kBernoulli, kBernoulli);
}

MetricsReport RunBandit(const InstanceSpec& spec, const BenchmarkValues& bench,
                        RunConfig config, std::optional<int> switches) {
  const AlgorithmView view = PrepareRun(spec, config);
  auto primal = MakeExp3Primal(view, spec.num_arms, 0.05, switches);
  auto dual = MakeHedgeDual(view, switches);
  const RunLog log = Run(spec, view, *primal, *dual, config);
  return ComputeMetrics(log, spec, bench);
}

// Contextual instances for criteria 4 and 5: four contexts, each a
// permutation of three base arms.
constexpr int kContexts = 4;
constexpr int kPerm[kContexts][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}};
constexpr int kClassSize = 16;

testing::MeanTable PermutedTable(const std::vector<std::vector<double>>& base,
                                 bool null_arm) {
  testing::MeanTable rows(kContexts);
  for (int x = 0; x < kContexts; ++x) {
    for (int a = 0; a < 3; ++a) rows[x].push_back(base[kPerm[x][a]]);
    if (null_arm) rows[x].push_back(std::vector<double>(base[0].size(), 0.0));
  }
  return rows;
}

// Per coordinate: the true table followed by kClassSize - 1 perturbations.
std::vector<std::vector<FunctionTable>> FiniteClasses(const InstanceSpec& spec) {
  const OutcomeModel& m = spec.segments[0].model;
  const int d = spec.num_resources();
  const int k = spec.num_arms;
  const double time_rate = spec.budget() / spec.horizon;
  Rng rng(77);
  std::vector<std::vector<FunctionTable>> classes(d + 1);
  for (int j = 0; j <= d; ++j) {
    FunctionTable truth(kContexts * k);
    for (int x = 0; x < kContexts; ++x) {
      for (int a = 0; a < k; ++a) {
        truth[x * k + a] = j == 0 ? m.reward(x, a)
                           : spec.constraints.is_time[j - 1]
                               ? time_rate
                               : m.consumption(x, a, j - 1);
      }
    }
    classes[j].push_back(truth);
    for (int f = 1; f < kClassSize; ++f) {
      FunctionTable t = truth;
      for (double& v : t) v = std::clamp(v + (rng.Uniform() - 0.5) * 0.6, 0.0, 1.0);
      classes[j].push_back(t);
    }
  }
  return classes;
}

struct SquareCbRun {
  MetricsReport metrics;
  ErrorTrace trace;
  double error_bound = 0.0;
};

SquareCbRun RunSquareCb(const InstanceSpec& spec, const BenchmarkValues& bench,
                        const std::vector<std::vector<FunctionTable>>& classes,
                        const RunConfig& config) {
  const AlgorithmView view = PrepareRun(spec, config);
  const int d = spec.num_resources();
  OracleSet oracles;
  for (int j = 0; j <= d; ++j) {
    oracles.push_back(std::make_unique<FiniteClassOracle>(
        kContexts, spec.num_arms, 0.0, 1.0, classes[j]));
  }
  IgwConfig igw;
  const double u = std::log(static_cast<double>(kClassSize) * (d + 1) / 0.05);
  igw.gamma = SquareCbGamma(spec.budget(), spec.horizon, spec.num_arms, d, u);
  SquareCbPrimal primal(std::move(oracles), view.params, view.signs, igw);
  auto dual = MakeHedgeDual(view, std::nullopt);
  const RunLog log = Run(spec, view, primal, *dual, config);
  SquareCbRun out;
  out.metrics = ComputeMetrics(log, spec, bench);
  out.trace = SquaredErrorTrace(log, spec);
  out.error_bound = LagrangeErrorBound(out.trace, view.params);
  return out;
}

// Logged SquareCB runs, shared by criteria 4, 5 and 8.
struct SquareCbLedger {
  int runs = 0;
  int failures = 0;
  double worst_ratio = 0.0;
  void Add(const SquareCbRun& r) {
    ++runs;
    if (!(r.trace.lagrange <= r.error_bound)) ++failures;
    if (r.error_bound > 0.0) {
      worst_ratio = std::max(worst_ratio, r.trace.lagrange / r.error_bound);
    }
  }
};
SquareCbLedger g_squarecb;

Outcome LpEquivalence() {
  Rng rng(2026);
  double worst = 0.0;
  int mismatched_status = 0;
  int feasible = 0;
  for (int n = 0; n < 200; ++n) {
    const InstanceSpec s = testing::RandomLpInstance(rng, 4, 4, 3);
    const OutcomeModel& m = s.segments[0].model;
    const LpSolution lp = SolveOptLp(m, s.arrival_probs, s.constraints,
                                     s.horizon, s.budget());
    const std::optional<double> brute = testing::VertexEnumerationValue(
        m, s.arrival_probs, s.constraints, s.horizon, s.budget());
    if (brute.has_value() != (lp.status == LpStatus::kOptimal)) {
      ++mismatched_status;
      continue;
    }
    if (!brute) continue;
    ++feasible;
    worst = std::max(worst, std::abs(lp.value - *brute));
  }
  return {mismatched_status == 0 && worst <= 1e-6,
          Format("200 instances (%d feasible), max |simplex - vertex| = %.2e, "
                 "status mismatches = %d",
                 feasible, worst, mismatched_status)};
}

Outcome SaddleMachinery() {
  Rng rng(7);
  int instances = 0;
  int perturbed = 0;
  int norm_failures = 0;
  int exact_failures = 0;
  int bound_failures = 0;
  double worst_exact = 0.0;
  double worst_bound_ratio = 0.0;
  while (instances < 50) {
    const InstanceSpec s = testing::RandomLpInstance(rng, 3, 4, 3);
    const OutcomeModel& m = s.segments[0].model;
    const double zeta = SlaterMargin(m, s.arrival_probs, s.constraints,
                                     s.horizon, s.budget());
    // eta = 2 / zeta must be a valid scale (>= 1).
    if (!(zeta >= 0.2 && zeta <= 2.0)) continue;
    const LpSolution lp = SolveOptLp(m, s.arrival_probs, s.constraints,
                                     s.horizon, s.budget());
    if (lp.status != LpStatus::kOptimal) continue;
    ++instances;
    double norm = 0.0;
    for (double mu : lp.multipliers) norm += mu;
    if (norm > 1.0 / zeta + 1e-9) ++norm_failures;

    const double eta = 2.0 / zeta;
    const LagrangeParams p = MakeLagrangeParams(eta, s.horizon / s.budget());
    const int d = s.num_resources();
    std::vector<double> lambda(d, 0.0);
    double used = 0.0;
    for (int i = 0; i < d; ++i) {
      lambda[i] = lp.multipliers[i] / eta;
      used += lambda[i];
    }
    lambda[s.constraints.time_index()] += 1.0 - used;
    const SaddleReport exact = CheckSaddlePointAt(
        lp.policy, lambda, m, s.arrival_probs, s.constraints, p, s.horizon,
        s.budget(), zeta, 1e-6);
    worst_exact = std::max(worst_exact, exact.nu);
    if (!exact.is_saddle) ++exact_failures;

    // Mix (D*, lambda*) with random points at random weights.
    const int contexts = m.num_contexts();
    const int arms = m.num_arms();
    for (int k = 0; k < 20; ++k) {
      const double w = std::pow(rng.Uniform(), 2.0);
      MixedPolicy policy = lp.policy;
      for (int x = 0; x < contexts; ++x) {
        std::vector<double> q(arms);
        double total = 0.0;
        for (double& v : q) total += (v = -std::log(1.0 - rng.Uniform()));
        for (int a = 0; a < arms; ++a) {
          policy.at(x, a) = (1.0 - w) * lp.policy.at(x, a) + w * q[a] / total;
        }
      }
      std::vector<double> mixed(d);
      double total = 0.0;
      for (double& v : mixed) total += (v = -std::log(1.0 - rng.Uniform()));
      const double wl = rng.Uniform() * w;
      for (int i = 0; i < d; ++i) {
        mixed[i] = (1.0 - wl) * lambda[i] + wl * mixed[i] / total;
      }
      const SaddleReport rep =
          CheckSaddlePointAt(policy, mixed, m, s.arrival_probs, s.constraints,
                             p, s.horizon, s.budget(), zeta, 1.0);
      ++perturbed;
      if (!rep.violation_bound_holds) ++bound_failures;
      if (rep.nu > 1e-9) {
        worst_bound_ratio = std::max(worst_bound_ratio, rep.scaled_vmax / (4.0 * rep.nu));
      }
    }
  }
  return {norm_failures == 0 && exact_failures == 0 && bound_failures == 0,
          Format("50 LPs: ||mu*||_1 > 1/zeta in %d, exact nu max %.2e; "
                 "%d perturbed points, (eta/B) Vmax > 4 nu in %d (max ratio %.3f)",
                 norm_failures, worst_exact, perturbed, bound_failures,
                 worst_bound_ratio)};
}

Outcome BanditScaling() {
  const std::vector<int> horizons = {5000, 20000, 80000};
  std::vector<double> medians;
  double zeta = 0.0;
  for (int t : horizons) {
    const InstanceSpec spec = BanditInstance(t);
    const BenchmarkValues bench = ComputeBenchmarks(spec);
    zeta = bench.zeta;
    std::vector<double> reg;
    for (int r = 0; r < 20; ++r) {
      RunConfig config;
      config.zeta = bench.zeta;
      config.seed = kBaseSeed + r;
      reg.push_back(RunBandit(spec, bench, config, std::nullopt).reg_out);
    }
    medians.push_back(Median(reg));
  }
  const double r1 = medians[1] / medians[0];
  const double r2 = medians[2] / medians[1];
  const double per_round = medians[2] / horizons[2];
  return {zeta >= 0.3 && r1 <= 3.0 && r2 <= 3.0 && per_round <= 0.05,
          Format("zeta %.3f, median RegOut %.1f / %.1f / %.1f, step ratios "
                 "%.2f %.2f, RegOut/T at 8e4 = %.4f",
                 zeta, medians[0], medians[1], medians[2], r1, r2, per_round)};
}

Outcome ContextualSquareCb() {
  std::vector<double> medians;
  double worst_err = 0.0;
  double zeta = 0.0;
  for (int t : {10000, 40000}) {
    const InstanceSpec spec = testing::StationaryInstance(
        t, t / 2.0, {1, -1}, PermutedTable(kBanditTable[0], false), kBernoulli,
        kBernoulli);
    const BenchmarkValues bench = ComputeBenchmarks(spec);
    zeta = bench.zeta;
    const auto classes = FiniteClasses(spec);
    std::vector<double> reg;
    for (int r = 0; r < 20; ++r) {
      RunConfig config;
      config.zeta = bench.zeta;
      config.seed = kBaseSeed + r;
      const SquareCbRun run = RunSquareCb(spec, bench, classes, config);
      g_squarecb.Add(run);
      reg.push_back(run.metrics.reg_out);
      for (double e : run.trace.totals) worst_err = std::max(worst_err, e);
    }
    medians.push_back(Median(reg));
  }
  const double ratio = medians[1] / medians[0];
  const double err_cap = std::log(static_cast<double>(kClassSize)) + 10.0;
  return {zeta >= 0.3 && ratio <= 3.0 && worst_err <= err_cap,
          Format("zeta %.3f, median RegOut %.1f / %.1f, ratio %.2f, max err_i "
                 "%.2f (cap %.2f)",
                 zeta, medians[0], medians[1], ratio, worst_err, err_cap)};
}

Outcome HardStop() {
  constexpr double kBudgetRate = 0.1;
  const std::vector<std::vector<double>> base = {
      {0.9, 0.6, 0.2}, {0.5, 0.1, 0.3}, {0.3, 0.2, 0.05}};
  std::vector<double> medians;
  double worst_v = -1e300;
  int over = 0;
  int runs = 0;
  for (int t : {10000, 40000}) {
    const InstanceSpec spec = testing::StationaryInstance(
        t, kBudgetRate * t, {1, 1}, PermutedTable(base, true), kBernoulli,
        kBernoulli, 3);
    const BenchmarkValues bench = ComputeBenchmarks(spec);
    const auto classes = FiniteClasses(spec);
    std::vector<double> reg;
    for (int r = 0; r < 50; ++r) {
      RunConfig config;
      config.mode = RunMode::kHardStop;
      config.seed = kBaseSeed + r;
      const SquareCbRun run = RunSquareCb(spec, bench, classes, config);
      g_squarecb.Add(run);
      reg.push_back(run.metrics.regret);
      const double v = *std::max_element(run.metrics.violations.begin(),
                                         run.metrics.violations.end());
      worst_v = std::max(worst_v, v);
      if (v > 1.0) ++over;
      ++runs;
    }
    medians.push_back(Median(reg));
  }
  const double ratio = medians[1] / medians[0];
  return {over == 0 && ratio <= 3.0,
          Format("%d runs, max V %.3f (runs with V > 1: %d), median regret "
                 "%.1f / %.1f, ratio %.2f",
                 runs, worst_v, over, medians[0], medians[1], ratio)};
}

Outcome ZeroViolation() {
  constexpr int kHorizon = 40000;
  constexpr double kEpsilon = 0.05;
  const InstanceSpec spec = BanditInstance(kHorizon);
  const BenchmarkValues bench = ComputeBenchmarks(spec);
  std::vector<double> standard;
  std::vector<double> zero;
  int clean = 0;
  double eta = 0.0;
  for (int r = 0; r < 50; ++r) {
    RunConfig config;
    config.zeta = bench.zeta;
    config.seed = kBaseSeed + r;
    standard.push_back(RunBandit(spec, bench, config, std::nullopt).reg_out);
    config.mode = RunMode::kZeroViolation;
    config.epsilon = kEpsilon;
    eta = PrepareRun(spec, config).params.eta;
    const MetricsReport m = RunBandit(spec, bench, config, std::nullopt);
    zero.push_back(m.regret);
    if (*std::max_element(m.violations.begin(), m.violations.end()) <= 0.0) ++clean;
  }
  const double ratio = Median(zero) / Median(standard);
  return {kEpsilon <= bench.zeta / 2.0 && clean >= 48 && ratio <= 2.0,
          Format("zeta %.3f, eta %.2f, V <= 0 in %d/50 runs, median regret "
                 "%.1f vs standard RegOut %.1f, ratio %.2f",
                 bench.zeta, eta, clean, Median(zero), Median(standard), ratio)};
}

Outcome Switching() {
  constexpr int kHorizon = 80000;
  const testing::MeanTable a = {{{0.9, 0.0}, {0.5, 0.6}}};
  const testing::MeanTable b = {{{0.5, 0.6}, {0.9, 0.0}}};
  const InstanceSpec spec = testing::SegmentedInstance(
      kHorizon, kHorizon / 2.0, {1}, {1, kHorizon / 3 + 1, 2 * kHorizon / 3 + 1},
      {a, b, a}, kBernoulli, Noise{});
  const BenchmarkValues bench = ComputeBenchmarks(spec);
  InstanceSpec first = spec;
  first.segments = {spec.segments[0]};
  const double zeta = ComputeBenchmarks(first).zeta;
  std::vector<double> tracking;
  std::vector<double> stationary;
  for (int r = 0; r < 20; ++r) {
    RunConfig config;
    config.zeta = zeta;
    config.seed = kBaseSeed + r;
    tracking.push_back(RunBandit(spec, bench, config, 2).reg_pace);
    stationary.push_back(RunBandit(spec, bench, config, std::nullopt).reg_pace);
  }
  const double per_round = Median(tracking) / kHorizon;
  const double ratio = Median(tracking) / Median(stationary);
  return {per_round <= 0.08 && ratio <= 0.5,
          Format("median RegPace/T %.4f (EXP3.S + Fixed-Share) vs %.4f "
                 "(EXP3.P + Hedge), ratio %.2f",
                 per_round, Median(stationary) / kHorizon, ratio)};
}

Outcome ErrorAggregation() {
  return {g_squarecb.runs > 0 && g_squarecb.failures == 0,
          Format("%d logged SquareCB runs, failures %d, max err(Lag)/bound %.4f",
                 g_squarecb.runs, g_squarecb.failures, g_squarecb.worst_ratio)};
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Outcome Determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "cbwlc_acceptance";
  fs::remove_all(root);
  int experiments = 0;
  int mismatches = 0;
  for (const char* name : {"bandit_two_resources", "switching"}) {
    const ExperimentConfig config =
        LoadConfig(std::string(CBWLC_CONFIG_DIR) + "/" + name + ".json");
    std::vector<std::string> csv;
    int run = 0;
    for (int parallel : {1, 1, 8, 8}) {
      const fs::path dir = root / (std::string(name) + "_" + std::to_string(run++));
      RunOptions options;
      options.parallel = parallel;
      EmitResults(config, RunExperiment(config, options), dir.string(), false);
      csv.push_back(ReadFile(dir / "runs.csv"));
    }
    ++experiments;
    for (const std::string& c : csv) {
      if (c.empty() || c != csv[0]) ++mismatches;
    }
  }
  fs::remove_all(root);
  return {mismatches == 0,
          Format("%d shipped configs, 4 runs each at parallel 1, 1, 8, 8; "
                 "runs.csv mismatches %d",
                 experiments, mismatches)};
}

struct Criterion {
  const char* name;
  double time_limit_s;
  std::function<Outcome()> check;
};

}  // namespace
}  // namespace cbwlc

int main() {
  using cbwlc::Criterion;
  const std::vector<Criterion> criteria = {
      {"1 lp_oracle_equivalence", 10, cbwlc::LpEquivalence},
      {"2 saddle_point_machinery", 30, cbwlc::SaddleMachinery},
      {"3 bandit_sqrt_t_scaling", 300, cbwlc::BanditScaling},
      {"4 contextual_squarecb", 600, cbwlc::ContextualSquareCb},
      {"5 hard_stop", 180, cbwlc::HardStop},
      {"6 zero_violation", 300, cbwlc::ZeroViolation},
      {"7 switching", 300, cbwlc::Switching},
      {"8 error_aggregation", 0, cbwlc::ErrorAggregation},
      {"9 determinism", 0, cbwlc::Determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    cbwlc::Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    bool pass = out.pass;
    if (c.time_limit_s > 0 && secs > c.time_limit_s) {
      pass = false;
      out.detail += cbwlc::Format("; over time limit %.0f s", c.time_limit_s);
    }
    if (!pass) ++failed;
    std::printf("%s %s: %s (%.1f s)\n", pass ? "PASS" : "FAIL", c.name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
