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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cbwlc/duals.h"
#include "cbwlc/primal_squarecb.h"

namespace cbwlc {
namespace {

int Var(int context, int arm, int num_arms) { return context * num_arms + arm; }

// One equality row sum_a D(a|x) = 1 per context.
void AddPolicyRows(LpProblem& lp, const OutcomeModel& model) {
  const int k = model.num_arms();
  for (int x = 0; x < model.num_contexts(); ++x) {
    std::vector<double> row(lp.num_vars, 0.0);
    for (int a = 0; a < k; ++a) row[Var(x, a, k)] = 1.0;
    lp.AddRow(std::move(row), RowType::kEq, 1.0);
  }
}

std::vector<double> ResourceRow(const OutcomeModel& model,
                                std::span<const double> arrivals, int resource,
                                int sign, double ratio, int num_vars) {
  const int k = model.num_arms();
  std::vector<double> row(num_vars, 0.0);
  for (int x = 0; x < model.num_contexts(); ++x) {
    for (int a = 0; a < k; ++a) {
      row[Var(x, a, k)] =
          sign * ratio * arrivals[x] * model.consumption(x, a, resource);
    }
  }
  return row;
}

void CheckShapes(const OutcomeModel& model, std::span<const double> arrivals,
                 const ConstraintSpec& constraints) {
  if (static_cast<int>(arrivals.size()) != model.num_contexts()) {
    throw std::invalid_argument("arrival vector does not match contexts");
  }
  if (constraints.num_resources() != model.num_resources()) {
    throw std::invalid_argument("constraints do not match model resources");
  }
}

}  // namespace

LpSolution SolveOptLp(const OutcomeModel& model,
                      std::span<const double> arrivals,
                      const ConstraintSpec& constraints, int horizon,
                      double budget) {
  CheckShapes(model, arrivals, constraints);
  const int k = model.num_arms();
  const int n = model.num_contexts() * k;
  const double ratio = horizon / budget;
  LpProblem lp(n);
  for (int x = 0; x < model.num_contexts(); ++x) {
    for (int a = 0; a < k; ++a) {
      lp.objective[Var(x, a, k)] = arrivals[x] * model.reward(x, a);
    }
  }
  AddPolicyRows(lp, model);
  std::vector<int> row_of(constraints.num_resources(), -1);
  for (int i = 0; i < constraints.num_resources(); ++i) {
    if (constraints.is_time[i]) continue;
    const int sign = constraints.signs[i];
    row_of[i] = lp.num_rows();
    lp.AddRow(ResourceRow(model, arrivals, i, sign, ratio, n), RowType::kLe,
              static_cast<double>(sign));
  }

  LpSolution out;
  const LpResult result = SolveLp(lp);
  out.status = result.status;
  if (result.status != LpStatus::kOptimal) return out;
  out.value = result.objective;
  out.policy = MixedPolicy(model.num_contexts(), k);
  for (int x = 0; x < model.num_contexts(); ++x) {
    double total = 0.0;
    for (int a = 0; a < k; ++a) {
      out.policy.at(x, a) = std::max(0.0, result.x[Var(x, a, k)]);
      total += out.policy.at(x, a);
    }
    for (int a = 0; a < k; ++a) out.policy.at(x, a) /= total;
  }
  out.multipliers.assign(constraints.num_resources(), 0.0);
  for (int i = 0; i < constraints.num_resources(); ++i) {
    if (row_of[i] < 0) {
      out.active.push_back(i);  // the time constraint always binds
      continue;
    }
    out.multipliers[i] = std::max(0.0, result.duals[row_of[i]]);
    const double c = ExpectedConsumption(out.policy, model, arrivals, i);
    const double slack = constraints.signs[i] * (1.0 - ratio * c);
    if (std::fabs(slack) <= 1e-9) out.active.push_back(i);
  }
  return out;
}

double SlaterMargin(const OutcomeModel& model, std::span<const double> arrivals,
                    const ConstraintSpec& constraints, int horizon,
                    double budget) {
  CheckShapes(model, arrivals, constraints);
  const int k = model.num_arms();
  const int policy_vars = model.num_contexts() * k;
  // Variables: D, zeta_plus, zeta_minus.
  const int n = policy_vars + 2;
  const double ratio = horizon / budget;
  LpProblem lp(n);
  lp.objective[policy_vars] = 1.0;
  lp.objective[policy_vars + 1] = -1.0;
  AddPolicyRows(lp, model);
  int margin_rows = 0;
  for (int i = 0; i < constraints.num_resources(); ++i) {
    if (constraints.is_time[i]) continue;
    const int sign = constraints.signs[i];
    std::vector<double> row = ResourceRow(model, arrivals, i, sign, ratio, n);
    row[policy_vars] = 1.0;
    row[policy_vars + 1] = -1.0;
    lp.AddRow(std::move(row), RowType::kLe, static_cast<double>(sign));
    ++margin_rows;
  }
  if (margin_rows == 0) return std::numeric_limits<double>::infinity();
  const LpResult result = SolveLp(lp);
  if (result.status != LpStatus::kOptimal) {
    throw std::runtime_error(std::string("margin LP failed: ") +
                             LpStatusName(result.status));
  }
  return result.objective;
}

AveragedModel TimeAveragedModel(const InstanceSpec& spec) {
  const int nx = spec.num_contexts();
  const int k = spec.num_arms;
  const int coords = spec.num_resources() + 1;
  const int num_segments = static_cast<int>(spec.segments.size());
  AveragedModel out;
  out.model = OutcomeModel(nx, k, spec.num_resources());
  out.arrivals.assign(nx, 0.0);
  std::vector<double> weights(num_segments);
  for (int x = 0; x < nx; ++x) {
    // Segment s contributes in proportion to how often x arrives during it;
    // a context that never arrives gets the plain time average.
    double mass = 0.0;
    for (int s = 0; s < num_segments; ++s) {
      const double length =
          static_cast<double>(spec.SegmentLength(s)) / spec.horizon;
      weights[s] = length * spec.Arrivals(s)[x];
      mass += weights[s];
    }
    out.arrivals[x] = mass;
    if (mass <= 0.0) {
      for (int s = 0; s < num_segments; ++s) {
        weights[s] = static_cast<double>(spec.SegmentLength(s)) / spec.horizon;
      }
      mass = 1.0;
    }
    for (int a = 0; a < k; ++a) {
      for (int j = 0; j < coords; ++j) {
        double v = 0.0;
        for (int s = 0; s < num_segments; ++s) {
          v += weights[s] * spec.segments[s].model.mean(x, a, j);
        }
        out.model.set_mean(x, a, j, v / mass);
      }
    }
  }
  return out;
}

double PacingBenchmark(const InstanceSpec& spec) {
  double total = 0.0;
  for (int s = 0; s < static_cast<int>(spec.segments.size()); ++s) {
    const LpSolution lp =
        SolveOptLp(spec.segments[s].model, spec.Arrivals(s), spec.constraints,
                   spec.horizon, spec.budget());
    if (lp.status != LpStatus::kOptimal) {
      throw std::runtime_error("segment " + std::to_string(s) + " LP is " +
                               LpStatusName(lp.status));
    }
    total += spec.SegmentLength(s) * lp.value;
  }
  return total;
}

BenchmarkValues ComputeBenchmarks(const InstanceSpec& spec) {
  const AveragedModel avg = TimeAveragedModel(spec);
  const LpSolution lp = SolveOptLp(avg.model, avg.arrivals, spec.constraints,
                                   spec.horizon, spec.budget());
  if (lp.status != LpStatus::kOptimal) {
    throw std::runtime_error(std::string("benchmark LP is ") +
                             LpStatusName(lp.status));
  }
  BenchmarkValues out;
  out.opt_lp = lp.value;
  out.opt = spec.horizon * lp.value;
  out.opt_pac = spec.segments.size() == 1 ? out.opt : PacingBenchmark(spec);
  out.zeta = SlaterMargin(avg.model, avg.arrivals, spec.constraints,
                          spec.horizon, spec.budget());
  return out;
}

OutcomeModel ReportedModel(const OutcomeModel& model, const AlgorithmView& view) {
  OutcomeModel out = model;
  const int coords = model.num_coords();
  std::vector<double> row(coords);
  std::vector<double> reported(coords);
  for (int x = 0; x < model.num_contexts(); ++x) {
    for (int a = 0; a < model.num_arms(); ++a) {
      for (int j = 0; j < coords; ++j) row[j] = model.mean(x, a, j);
      view.Report(row, reported);
      for (int j = 0; j < coords; ++j) out.set_mean(x, a, j, reported[j]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

SaddleResiduals ComputeSaddleResiduals(const MixedPolicy& policy,
                                       std::span<const double> lambda,
                                       const OutcomeModel& model,
                                       std::span<const double> arrivals,
                                       const LagrangeParams& params,
                                       std::span<const int> signs) {
  const double value =
      ExpectedLagrangian(policy, lambda, model, arrivals, params, signs);
  // Best response of the primal: argmax arm per context.
  double best = 0.0;
  for (int x = 0; x < model.num_contexts(); ++x) {
    double top = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < model.num_arms(); ++a) {
      top = std::max(top,
                     ExpectedArmLagrangian(model, x, a, lambda, params, signs));
    }
    best += arrivals[x] * top;
  }
  // Best response of the dual: a vertex of the simplex.
  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> unit(lambda.size(), 0.0);
  for (size_t i = 0; i < lambda.size(); ++i) {
    unit[i] = 1.0;
    worst = std::min(worst, ExpectedLagrangian(policy, unit, model, arrivals,
                                               params, signs));
    unit[i] = 0.0;
  }
  SaddleResiduals r;
  r.primal = std::max(0.0, best - value);
  r.dual = std::max(0.0, value - worst);
  return r;
}

SaddleReport CheckSaddlePointAt(const MixedPolicy& policy,
                                std::span<const double> lambda,
                                const OutcomeModel& model,
                                std::span<const double> arrivals,
                                const ConstraintSpec& constraints,
                                const LagrangeParams& params, int horizon,
                                double budget, double zeta, double nu_budget) {
  SaddleReport report;
  report.residuals = ComputeSaddleResiduals(policy, lambda, model, arrivals,
                                            params, constraints.signs);
  report.nu = report.residuals.nu();
  report.is_saddle = report.nu <= nu_budget;

  const LpSolution lp =
      SolveOptLp(model, arrivals, constraints, horizon, budget);
  const double reward = ExpectedReward(policy, model, arrivals);
  if (lp.status == LpStatus::kOptimal) {
    report.reward_gap = lp.value - reward;
    report.reward_bound_holds = report.reward_gap <= 2.0 * report.nu + 1e-9;
  }
  double vmax = 0.0;
  for (int i = 0; i < constraints.num_resources(); ++i) {
    const double c = ExpectedConsumption(policy, model, arrivals, i);
    vmax = std::max(vmax, constraints.signs[i] * (horizon * c - budget));
  }
  report.scaled_vmax = params.eta / budget * vmax;
  const bool sharp = zeta > 0.0 && params.eta >= 2.0 / zeta - 1e-12;
  report.violation_bound = sharp ? 4.0 * report.nu : 2.0 * report.nu + 1.0;
  report.violation_bound_holds =
      report.scaled_vmax <= report.violation_bound + 1e-9;
  return report;
}

MixedPolicy AveragePlay(const RunLog& log) {
  const int k = log.num_arms;
  MixedPolicy out(log.num_contexts, k);
  std::vector<int> counts(log.num_contexts, 0);
  for (int t = 0; t < log.horizon; ++t) {
    const int x = log.contexts[t];
    ++counts[x];
    std::span<const double> p = log.Probs(t);
    for (int a = 0; a < k; ++a) out.at(x, a) += p[a];
  }
  for (int x = 0; x < log.num_contexts; ++x) {
    for (int a = 0; a < k; ++a) {
      out.at(x, a) = counts[x] > 0 ? out.at(x, a) / counts[x] : 1.0 / k;
    }
  }
  return out;
}

std::vector<double> AverageLambda(const RunLog& log) {
  std::vector<double> out(log.num_resources, 0.0);
  for (int t = 0; t < log.horizon; ++t) {
    std::span<const double> l = log.Lambda(t);
    for (int i = 0; i < log.num_resources; ++i) out[i] += l[i];
  }
  for (double& v : out) v /= log.horizon;
  return out;
}

SaddleReport CheckSaddlePoint(const RunLog& log, const InstanceSpec& spec,
                              double nu_budget) {
  const AveragedModel avg = TimeAveragedModel(spec);
  const OutcomeModel model = ReportedModel(avg.model, log.view);
  ConstraintSpec constraints = spec.constraints;
  constraints.budgets.assign(constraints.num_resources(),
                             log.view.reported_budget);
  const double zeta = SlaterMargin(model, avg.arrivals, constraints,
                                   log.horizon, log.view.reported_budget);
  return CheckSaddlePointAt(AveragePlay(log), AverageLambda(log), model,
                            avg.arrivals, constraints, log.view.params,
                            log.horizon, log.view.reported_budget, zeta,
                            nu_budget);
}

double ConcReg(int horizon, double budget, double eta, int num_resources,
               double delta, double c0) {
  const double t = horizon;
  return c0 * (t / budget) * eta *
         std::sqrt(t * std::log(num_resources * t / delta));
}

MetricsReport ComputeMetrics(const RunLog& log, const InstanceSpec& spec,
                             const BenchmarkValues& bench) {
  MetricsReport m;
  const int d = log.num_resources;
  std::vector<double> consumed(d, 0.0);
  for (int t = 0; t < log.horizon; ++t) {
    std::span<const double> o = log.Outcome(t);
    m.total_reward += o[0];
    for (int i = 0; i < d; ++i) consumed[i] += o[i + 1];
  }
  m.opt = bench.opt;
  m.opt_pac = bench.opt_pac;
  m.regret = m.opt - m.total_reward;
  m.violations.resize(d);
  double vmax = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i) {
    m.violations[i] = spec.constraints.signs[i] * (consumed[i] - spec.budget());
    vmax = std::max(vmax, m.violations[i]);
  }
  m.reg_out = std::max(m.regret, vmax);
  m.reg_pace = std::max(m.opt_pac - m.total_reward, vmax);
  const std::vector<int> switches = spec.SwitchRounds();
  m.primal_regret = RealizedPolicyRegret(log, switches);
  m.dual_regret = RealizedDualRegret(log, switches);
  m.nu_measured =
      CheckSaddlePoint(log, spec, std::numeric_limits<double>::infinity()).nu;
  m.stop_round = log.stop_round;
  return m;
}

}  // namespace cbwlc
