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

#include "cbwlc/benchmark.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cbwlc/orchestrator.h"
#include "cbwlc/rng.h"
#include "lp_oracles.h"
#include "test_instances.h"

namespace cbwlc {
namespace {

LpSolution Solve(const InstanceSpec& s) {
  return SolveOptLp(s.segments[0].model, s.arrival_probs, s.constraints,
                    s.horizon, s.budget());
}

double Margin(const InstanceSpec& s) {
  return SlaterMargin(s.segments[0].model, s.arrival_probs, s.constraints,
                      s.horizon, s.budget());
}

TEST(SimplexLp, TextbookProblem) {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18: optimum 36 at (2, 6).
  LpProblem lp(2);
  lp.objective = {3.0, 5.0};
  lp.AddRow({1.0, 0.0}, RowType::kLe, 4.0);
  lp.AddRow({0.0, 2.0}, RowType::kLe, 12.0);
  lp.AddRow({3.0, 2.0}, RowType::kLe, 18.0);
  const LpResult r = SolveLp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 36.0, 1e-12);
  EXPECT_NEAR(r.x[0], 2.0, 1e-12);
  EXPECT_NEAR(r.x[1], 6.0, 1e-12);
  // Dual optimum (0, 3/2, 1).
  EXPECT_NEAR(r.duals[0], 0.0, 1e-12);
  EXPECT_NEAR(r.duals[1], 1.5, 1e-12);
  EXPECT_NEAR(r.duals[2], 1.0, 1e-12);
}

TEST(SimplexLp, InfeasibleAndUnbounded) {
  LpProblem bad(1);
  bad.objective = {1.0};
  bad.AddRow({1.0}, RowType::kLe, 1.0);
  bad.AddRow({1.0}, RowType::kGe, 2.0);
  EXPECT_EQ(SolveLp(bad).status, LpStatus::kInfeasible);
  LpProblem open(2);
  open.objective = {1.0, 0.0};
  open.AddRow({0.0, 1.0}, RowType::kLe, 1.0);
  EXPECT_EQ(SolveLp(open).status, LpStatus::kUnbounded);
}

TEST(SolveOptLp, HalfBudgetSingleResource) {
  const InstanceSpec s = testing::StationaryInstance(
      100, 50, {1}, {{{1.0, 1.0}, {0.0, 0.0}}});
  const LpSolution lp = Solve(s);
  ASSERT_EQ(lp.status, LpStatus::kOptimal);
  EXPECT_NEAR(lp.value, 0.5, 1e-12);
  EXPECT_NEAR(lp.policy.at(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(lp.policy.at(0, 1), 0.5, 1e-12);
  EXPECT_NE(std::find(lp.active.begin(), lp.active.end(), 0), lp.active.end());
}

TEST(SolveOptLp, SlackConstraintsPickArgmax) {
  const InstanceSpec s = testing::StationaryInstance(
      100, 100, {1}, {{{0.3, 0.2}, {0.8, 0.9}}, {{0.6, 0.1}, {0.1, 0.1}}});
  const LpSolution lp = Solve(s);
  ASSERT_EQ(lp.status, LpStatus::kOptimal);
  EXPECT_NEAR(lp.policy.at(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(lp.policy.at(1, 0), 1.0, 1e-12);
  EXPECT_NEAR(lp.value, 0.5 * 0.8 + 0.5 * 0.6, 1e-12);
  EXPECT_NEAR(lp.multipliers[0], 0.0, 1e-12);
}

TEST(SolveOptLp, InfeasibleCovering) {
  const InstanceSpec s = testing::StationaryInstance(
      100, 50, {-1}, {{{1.0, 0.2}, {0.0, 0.3}}});
  EXPECT_EQ(Solve(s).status, LpStatus::kInfeasible);
}

TEST(SolveOptLpProperty, MatchesVertexEnumeration) {
  Rng rng(2024);
  for (int n = 0; n < 40; ++n) {
    const InstanceSpec s = testing::RandomLpInstance(rng, 3, 3, 2);
    const LpSolution lp = Solve(s);
    const std::optional<double> brute = testing::VertexEnumerationValue(
        s.segments[0].model, s.arrival_probs, s.constraints, s.horizon, s.budget());
    ASSERT_EQ(lp.status == LpStatus::kOptimal, brute.has_value()) << "instance " << n;
    if (brute) {
      ASSERT_NEAR(lp.value, *brute, 1e-6) << "instance " << n;
    }
  }
}

TEST(SlaterMargin, NullArmAllPacking) {
  const InstanceSpec s = testing::StationaryInstance(
      100, 50, {1, 1}, {{{1.0, 1.0, 0.7}, {0.0, 0.0, 0.0}}});
  EXPECT_NEAR(Margin(s), 1.0, 1e-12);
}

TEST(SlaterMargin, TightEverywhere) {
  const InstanceSpec s = testing::StationaryInstance(
      100, 50, {1}, {{{1.0, 0.5}, {0.2, 0.5}}});
  EXPECT_NEAR(Margin(s), 0.0, 1e-12);
}

TEST(SlaterMarginProperty, MatchesGridSearch) {
  Rng rng(77);
  const int steps = 100;
  for (int n = 0; n < 20; ++n) {
    InstanceSpec s = testing::RandomLpInstance(rng, 1, 3, 3);
    while (s.num_arms != 3) s = testing::RandomLpInstance(rng, 1, 3, 3);
    const OutcomeModel& m = s.segments[0].model;
    const double ratio = s.horizon / s.budget();
    double grid = -1e300;
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; i + j <= steps; ++j) {
        const double d[3] = {static_cast<double>(i) / steps,
                             static_cast<double>(j) / steps,
                             static_cast<double>(steps - i - j) / steps};
        double worst = 1e300;
        for (int r = 0; r < s.num_resources(); ++r) {
          if (s.constraints.is_time[r]) continue;
          double c = 0.0;
          for (int a = 0; a < 3; ++a) c += d[a] * m.consumption(0, a, r);
          worst = std::min(worst, -s.constraints.signs[r] * (ratio * c - 1.0));
        }
        grid = std::max(grid, worst);
      }
    }
    const double zeta = Margin(s);
    // Grid points are feasible for the LP; the LP optimum is within one grid
    // cell of some grid point.
    EXPECT_GE(zeta, grid - 1e-9);
    EXPECT_LE(zeta, grid + ratio * 2.0 / steps);
  }
}

TEST(PacingBenchmark, TwoSegments) {
  const testing::MeanTable high = {{{0.5, 0.0}, {0.0, 0.0}}};
  const testing::MeanTable low = {{{0.2, 0.0}, {0.0, 0.0}}};
  const InstanceSpec a =
      testing::SegmentedInstance(200, 100, {1}, {1, 101}, {high, low});
  const InstanceSpec b =
      testing::SegmentedInstance(200, 100, {1}, {1, 101}, {low, high});
  EXPECT_NEAR(PacingBenchmark(a), 70.0, 1e-9);
  EXPECT_NEAR(PacingBenchmark(b), 70.0, 1e-9);
}

TEST(PacingBenchmark, StationaryEqualsOpt) {
  const InstanceSpec s = testing::StationaryInstance(
      300, 120, {1, -1}, {{{0.9, 0.9, 0.3}, {0.4, 0.1, 0.9}, {0.1, 0.0, 0.6}}});
  const BenchmarkValues b = ComputeBenchmarks(s);
  EXPECT_NEAR(b.opt_pac, b.opt, 1e-9);
  EXPECT_NEAR(b.opt, 300 * b.opt_lp, 1e-9);
}

TEST(ComputeMetrics, ViolationExamples) {
  // One arm consuming 0.35 per round on a covering resource: 20 rounds
  // consume 7 against B = 10, so V = 3. The packing resource consumes
  // 0.5 per round, exactly B.
  const InstanceSpec s = testing::StationaryInstance(
      20, 10, {1, -1}, {{{0.4, 0.5, 0.35}, {0.0, 0.0, 0.0}}});
  RunConfig config;
  config.zeta = 0.5;
  const AlgorithmView view = PrepareRun(s, config);
  testing::FixedArmPrimal primal(2, 0);
  auto dual = MakeHedgeDual(view, std::nullopt);
  const RunLog log = cbwlc::Run(s, view, primal, *dual, config);
  BenchmarkValues bench;
  bench.opt = 8.0;
  bench.opt_pac = 8.0;
  const MetricsReport m = ComputeMetrics(log, s, bench);
  EXPECT_NEAR(m.violations[0], 0.0, 1e-12);
  EXPECT_NEAR(m.violations[1], 3.0, 1e-12);
  EXPECT_NEAR(m.violations[2], 0.0, 1e-12);
  EXPECT_NEAR(m.total_reward, 8.0, 1e-12);
  EXPECT_NEAR(m.regret, 0.0, 1e-12);
  EXPECT_NEAR(m.reg_out, 3.0, 1e-12);
  EXPECT_NEAR(m.reg_pace, 3.0, 1e-12);
}

TEST(ComputeMetrics, RegOutIsMaxOfRegretAndViolation) {
  const InstanceSpec s = testing::StationaryInstance(
      2000, 1000, {1, -1}, {{{0.9, 0.9, 0.3}, {0.4, 0.1, 0.9}, {0.1, 0.0, 0.6}}},
      Noise{NoiseKind::kBernoulli, 0}, Noise{NoiseKind::kBernoulli, 0});
  const BenchmarkValues bench = ComputeBenchmarks(s);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RunConfig config;
    config.zeta = 0.8;
    config.seed = seed;
    const AlgorithmView view = PrepareRun(s, config);
    auto primal = MakeExp3Primal(view, 3, 0.05, std::nullopt);
    auto dual = MakeHedgeDual(view, std::nullopt);
    const RunLog log = cbwlc::Run(s, view, *primal, *dual, config);
    const MetricsReport m = ComputeMetrics(log, s, bench);
    double vmax = -1e300;
    for (double v : m.violations) vmax = std::max(vmax, v);
    ASSERT_EQ(m.reg_out, std::max(m.regret, vmax));
    ASSERT_EQ(m.regret, bench.opt - m.total_reward);
    double reward = 0.0;
    for (int t = 0; t < log.horizon; ++t) reward += log.Outcome(t)[0];
    ASSERT_NEAR(m.total_reward, reward, 1e-9);
  }
}

TEST(ComputeSaddleResiduals, MatchingPenniesEquilibrium) {
  // L(arm, e_i) = 1 - c_i(arm) gives the identity payoff matrix.
  OutcomeModel m(1, 2, 2);
  m.set_mean(0, 0, 1, 0.0);
  m.set_mean(0, 0, 2, 1.0);
  m.set_mean(0, 1, 1, 1.0);
  m.set_mean(0, 1, 2, 0.0);
  const std::vector<double> arrivals = {1.0};
  const LagrangeParams p = MakeLagrangeParams(1.0, 1.0);
  const std::vector<int> signs = {1, 1};
  const SaddleResiduals r = ComputeSaddleResiduals(
      MixedPolicy::Uniform(1, 2), std::vector<double>{0.5, 0.5}, m, arrivals, p, signs);
  EXPECT_NEAR(r.primal, 0.0, 1e-15);
  EXPECT_NEAR(r.dual, 0.0, 1e-15);
  const SaddleResiduals off = ComputeSaddleResiduals(
      MixedPolicy::Constant(1, 2, 0), std::vector<double>{0.5, 0.5}, m, arrivals, p,
      signs);
  EXPECT_NEAR(off.dual, 0.5, 1e-15);
  EXPECT_GE(off.primal, 0.0);
}

// lambda = mu* / eta on the real resources, the rest on time.
std::vector<double> DualPoint(const LpSolution& lp, const InstanceSpec& s,
                              double eta) {
  std::vector<double> lambda(s.num_resources(), 0.0);
  double used = 0.0;
  for (int i = 0; i < s.num_resources(); ++i) {
    lambda[i] = lp.multipliers[i] / eta;
    used += lambda[i];
  }
  lambda[s.constraints.time_index()] += 1.0 - used;
  return lambda;
}

TEST(SaddlePointProperty, LpOptimaAreExactSaddlePoints) {
  Rng rng(5);
  int checked = 0;
  while (checked < 25) {
    const InstanceSpec s = testing::RandomLpInstance(rng, 3, 4, 3);
    const double zeta = Margin(s);
    if (!(zeta >= 0.2)) continue;
    const LpSolution lp = Solve(s);
    ASSERT_EQ(lp.status, LpStatus::kOptimal);
    double norm = 0.0;
    for (double mu : lp.multipliers) norm += mu;
    ASSERT_LE(norm, 1.0 / zeta + 1e-9);
    const double eta = std::max(1.0, 2.0 / zeta);
    const LagrangeParams p = MakeLagrangeParams(eta, s.horizon / s.budget());
    const SaddleReport rep = CheckSaddlePointAt(
        lp.policy, DualPoint(lp, s, eta), s.segments[0].model, s.arrival_probs,
        s.constraints, p, s.horizon, s.budget(), zeta, 1e-6);
    ASSERT_LE(rep.residuals.primal, 1e-6);
    ASSERT_LE(rep.residuals.dual, 1e-6);
    ASSERT_GE(rep.residuals.primal, -1e-9);
    ASSERT_GE(rep.residuals.dual, -1e-9);
    ASSERT_TRUE(rep.is_saddle);
    ++checked;
  }
}

TEST(ConcReg, Values) {
  const int t = 1000;
  EXPECT_NEAR(ConcReg(t, t, 1.0, 1, 1.0 / t, 1.0),
              std::sqrt(t * std::log(static_cast<double>(t) * t)), 1e-9);
  EXPECT_EQ(ConcReg(t, 400, 2.0, 3, 0.05, 0.0), 0.0);
  // Doubling T at a fixed ratio T/B.
  const double r = ConcReg(2 * t, t, 2.0, 3, 0.05) / ConcReg(t, t / 2, 2.0, 3, 0.05);
  EXPECT_NEAR(r, std::sqrt(2.0 * std::log(3.0 * 2 * t / 0.05) /
                           std::log(3.0 * t / 0.05)),
              1e-12);
  EXPECT_GT(r, std::sqrt(2.0));
}

TEST(CheckSaddlePoint, ResidualsNonnegativeOnLoggedRun) {
  const InstanceSpec s = testing::StationaryInstance(
      3000, 1500, {1, -1}, {{{0.9, 0.9, 0.3}, {0.4, 0.1, 0.9}, {0.1, 0.0, 0.6}}},
      Noise{NoiseKind::kBernoulli, 0}, Noise{NoiseKind::kBernoulli, 0});
  RunConfig config;
  config.zeta = 0.8;
  config.seed = 3;
  const AlgorithmView view = PrepareRun(s, config);
  auto primal = MakeExp3Primal(view, 3, 0.05, std::nullopt);
  auto dual = MakeHedgeDual(view, std::nullopt);
  const RunLog log = cbwlc::Run(s, view, *primal, *dual, config);
  const SaddleReport rep = CheckSaddlePoint(log, s, 1.0);
  EXPECT_GE(rep.residuals.primal, 0.0);
  EXPECT_GE(rep.residuals.dual, 0.0);
  EXPECT_TRUE(rep.reward_bound_holds);
  EXPECT_TRUE(rep.violation_bound_holds);
  const MixedPolicy avg = AveragePlay(log);
  double sum = 0.0;
  for (int a = 0; a < 3; ++a) sum += avg.at(0, a);
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(WeakDualityProperty, HardStopRewardBelowOpt) {
  const int t_max = 2000;
  const InstanceSpec s = testing::StationaryInstance(
      t_max, 400, {1, 1},
      {{{0.9, 0.8, 0.4}, {0.6, 0.3, 0.9}, {0.3, 0.2, 0.2}, {0.0, 0.0, 0.0}}},
      Noise{NoiseKind::kBernoulli, 0}, Noise{NoiseKind::kBernoulli, 0}, 3);
  const BenchmarkValues bench = ComputeBenchmarks(s);
  // One extra unit of budget is worth at most OPT / B; the reward noise is
  // at most 1/2 per round.
  const double slack = bench.opt / s.budget() + 4.0 * 0.5 * std::sqrt(t_max);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    RunConfig config;
    config.mode = RunMode::kHardStop;
    config.seed = seed;
    const AlgorithmView view = PrepareRun(s, config);
    auto primal = MakeExp3Primal(view, 4, 0.05, std::nullopt);
    auto dual = MakeHedgeDual(view, std::nullopt);
    const RunLog log = cbwlc::Run(s, view, *primal, *dual, config);
    ASSERT_LE(ComputeMetrics(log, s, bench).total_reward, bench.opt + slack);
  }
}

}  // namespace
}  // namespace cbwlc
