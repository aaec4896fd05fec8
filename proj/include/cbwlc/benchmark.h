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

// Exact benchmarks and run diagnostics.
//
// The LP over distributions on policies depends only on the per-context arm
// marginals, so every program here optimizes D(a|x) directly:
//
//   maximize   sum_x p(x) sum_a D(a|x) r(x, a)
//   subject to sign_i ((T/B) sum_x p(x) sum_a D(a|x) c_i(x, a) - 1) <= 0.

#ifndef CBWLC_BENCHMARK_H_
#define CBWLC_BENCHMARK_H_

#include <span>
#include <vector>

#include "cbwlc/env.h"
#include "cbwlc/lagrangian.h"
#include "cbwlc/run_log.h"
#include "cbwlc/simplex.h"

namespace cbwlc {

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  MixedPolicy policy;
  // Per-round value OPT_LP; OPT = T * value.
  double value = 0.0;
  // Resources whose constraint is tight within 1e-9.
  std::vector<int> active;
  // Optimal multipliers in the units of the Lagrangian
  // L(D, mu) = r(D) + sum_i mu_i sign_i (1 - (T/B) c_i(D)). The time
  // constraint is implied by the simplex rows and gets 0.
  std::vector<double> multipliers;
};

LpSolution SolveOptLp(const OutcomeModel& model,
                      std::span<const double> arrivals,
                      const ConstraintSpec& constraints, int horizon,
                      double budget);

// Largest zeta such that some D has sign_i ((T/B) c_i(D) - 1) <= -zeta for
// every non-time resource. +infinity when there is no non-time resource.
double SlaterMargin(const OutcomeModel& model, std::span<const double> arrivals,
                    const ConstraintSpec& constraints, int horizon,
                    double budget);

// The stationary instance whose context distribution and conditional means
// match the time average of a segmented instance.
struct AveragedModel {
  OutcomeModel model;
  std::vector<double> arrivals;
};
AveragedModel TimeAveragedModel(const InstanceSpec& spec);

// Sum over segments of (length x segment OPT_LP). Throws std::runtime_error
// if some segment LP is infeasible.
double PacingBenchmark(const InstanceSpec& spec);

struct BenchmarkValues {
  double opt_lp = 0.0;
  // T * OPT_LP of the time-averaged model.
  double opt = 0.0;
  double opt_pac = 0.0;
  double zeta = 0.0;
};
// Throws std::runtime_error if the (averaged) LP is infeasible.
BenchmarkValues ComputeBenchmarks(const InstanceSpec& spec);

// Model means after the reporting transform of `view`.
OutcomeModel ReportedModel(const OutcomeModel& model, const AlgorithmView& view);

struct SaddleResiduals {
  // sup_D L(D, lambda) - L(D', lambda).
  double primal = 0.0;
  // L(D', lambda) - min_i L(D', e_i).
  double dual = 0.0;
  double nu() const { return primal > dual ? primal : dual; }
};

SaddleResiduals ComputeSaddleResiduals(const MixedPolicy& policy,
                                       std::span<const double> lambda,
                                       const OutcomeModel& model,
                                       std::span<const double> arrivals,
                                       const LagrangeParams& params,
                                       std::span<const int> signs);

struct SaddleReport {
  SaddleResiduals residuals;
  double nu = 0.0;
  bool is_saddle = false;
  // r(D*) - r(D'); the saddle property bounds it by 2 nu.
  double reward_gap = 0.0;
  bool reward_bound_holds = false;
  // (eta / B) Vmax(D').
  double scaled_vmax = 0.0;
  // <= 4 nu when zeta > 0 and eta >= 2 / zeta, else <= 2 nu + 1.
  double violation_bound = 0.0;
  bool violation_bound_holds = false;
};

// Checks a candidate pair (D', lambda') against the exact model; `zeta` is
// the Slater margin of that model.
SaddleReport CheckSaddlePointAt(const MixedPolicy& policy,
                                std::span<const double> lambda,
                                const OutcomeModel& model,
                                std::span<const double> arrivals,
                                const ConstraintSpec& constraints,
                                const LagrangeParams& params, int horizon,
                                double budget, double zeta, double nu_budget);

// Average play of a logged run: per context, the mean of p_t over the rounds
// where that context arrived (uniform for unseen contexts).
MixedPolicy AveragePlay(const RunLog& log);
std::vector<double> AverageLambda(const RunLog& log);

// Saddle check of the run's average play against the time-averaged model as
// the learners saw it (reported budget and consumptions).
SaddleReport CheckSaddlePoint(const RunLog& log, const InstanceSpec& spec,
                              double nu_budget);

// c0 (T/B) eta sqrt(T ln(d T / delta)).
double ConcReg(int horizon, double budget, double eta, int num_resources,
               double delta, double c0 = 2.0);

struct MetricsReport {
  double total_reward = 0.0;
  double opt = 0.0;
  double opt_pac = 0.0;
  // OPT - reward.
  double regret = 0.0;
  // sign_i (sum_t c_{t,i} - B) with true consumptions.
  std::vector<double> violations;
  double reg_out = 0.0;
  double reg_pace = 0.0;
  double primal_regret = 0.0;
  double dual_regret = 0.0;
  double nu_measured = 0.0;
  int stop_round = 0;
};

MetricsReport ComputeMetrics(const RunLog& log, const InstanceSpec& spec,
                             const BenchmarkValues& bench);

}  // namespace cbwlc

#endif  // CBWLC_BENCHMARK_H_
