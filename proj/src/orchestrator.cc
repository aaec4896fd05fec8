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

#include "cbwlc/orchestrator.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cbwlc/duals.h"
#include "cbwlc/primal_bandit.h"

namespace cbwlc {

double ZeroViolationEpsilon(int horizon, double regret_estimate, double zeta,
                            double budget) {
  if (!(zeta > 0.0) || !(budget > 0.0)) {
    throw std::invalid_argument("zeta and budget must be positive");
  }
  return 16.0 * horizon * regret_estimate / (zeta * budget * budget);
}

ConsumptionSupport InstanceSupport(const InstanceSpec& spec) {
  const int d = spec.num_resources();
  ConsumptionSupport s;
  s.lo.assign(d, std::numeric_limits<double>::infinity());
  s.hi.assign(d, -std::numeric_limits<double>::infinity());
  for (const Segment& seg : spec.segments) {
    const OutcomeModel& m = seg.model;
    for (int x = 0; x < m.num_contexts(); ++x) {
      for (int a = 0; a < m.num_arms(); ++a) {
        for (int i = 0; i < d; ++i) {
          const double mean = m.consumption(x, a, i);
          const Noise& noise = m.noise(x, a, i + 1);
          double lo = mean;
          double hi = mean;
          if (noise.kind == NoiseKind::kBernoulli) {
            if (mean >= 0.0) {
              lo = mean < 1.0 ? 0.0 : 1.0;
              hi = mean > 0.0 ? 1.0 : 0.0;
            } else {
              lo = -1.0;
              hi = mean > -1.0 ? 0.0 : -1.0;
            }
          } else if (noise.kind == NoiseKind::kGaussian && noise.stddev > 0.0) {
            lo = -1.0;
            hi = 1.0;
          }
          s.lo[i] = std::min(s.lo[i], lo);
          s.hi[i] = std::max(s.hi[i], hi);
        }
      }
    }
  }
  return s;
}

AlgorithmView PrepareRun(const InstanceSpec& spec, const RunConfig& config) {
  const int horizon = spec.horizon;
  const double budget = spec.budget();
  AlgorithmView view;
  view.signs = spec.constraints.signs;
  view.time_index = spec.constraints.time_index();
  view.horizon = horizon;
  view.reported_budget = budget;

  EtaMode eta_mode = config.eta_mode;
  switch (config.mode) {
    case RunMode::kStandard:
      break;
    case RunMode::kHardStop:
      if (!spec.null_arm) {
        throw std::invalid_argument("hard_stop mode requires a null arm");
      }
      for (int s : view.signs) {
        if (s != 1) {
          throw std::invalid_argument(
              "hard_stop mode requires packing resources only");
        }
      }
      eta_mode = EtaMode::kHardStop;
      break;
    case RunMode::kZeroViolation:
      if (!(config.epsilon > 0.0) || config.epsilon > 0.5) {
        throw std::invalid_argument("epsilon must lie in (0, 1/2]");
      }
      if (!(config.zeta > 0.0) || config.epsilon > config.zeta / 2.0) {
        throw std::invalid_argument("zero_violation requires epsilon <= zeta/2");
      }
      eta_mode = EtaMode::kZeroViolation;
      view.reported_budget = budget * (1.0 - config.epsilon);
      view.covering_shift = 2.0 * config.epsilon * budget / horizon;
      break;
  }

  const LagrangeParams chosen = ChooseEta(eta_mode, config.zeta,
                                          config.regret_estimate, budget, horizon);
  const double ratio = horizon / view.reported_budget;
  view.params = MakeLagrangeParams(chosen.eta, ratio, 1.0 + view.covering_shift);
  if (config.support_range) {
    ConsumptionSupport support = InstanceSupport(spec);
    for (int i = 0; i < spec.num_resources(); ++i) {
      if (i == view.time_index) {
        support.lo[i] = support.hi[i] = view.reported_budget / horizon;
      } else if (view.signs[i] < 0) {
        support.lo[i] -= view.covering_shift;
        support.hi[i] -= view.covering_shift;
      }
    }
    view.params = WithSupportRange(view.params, view.signs, support);
  }
  return view;
}

std::unique_ptr<DualAlgorithm> MakeHedgeDual(
    const AlgorithmView& view, std::optional<int> num_switches_hint) {
  return std::make_unique<HedgeDual>(
      DualInit(static_cast<int>(view.signs.size()), view.horizon,
               view.params.payoff_lo, view.params.payoff_hi, num_switches_hint));
}

std::unique_ptr<PrimalAlgorithm> MakeExp3Primal(
    const AlgorithmView& view, int num_arms, double delta,
    std::optional<int> num_switches_hint) {
  return std::make_unique<Exp3Primal>(
      AdvBanditInit(num_arms, view.horizon, delta, view.params.payoff_lo,
                    view.params.payoff_hi, num_switches_hint));
}

// ---------------------------------------------------------------------------

GameLoop::GameLoop(const InstanceSpec& spec, const AlgorithmView& view,
                   PrimalAlgorithm& primal, DualAlgorithm& dual, Rng env_rng,
                   Rng alg_rng, bool hard_stop, int start_round)
    : spec_(spec),
      view_(view),
      primal_(primal),
      dual_(dual),
      env_rng_(env_rng),
      alg_rng_(alg_rng),
      hard_stop_(hard_stop),
      next_round_(start_round),
      consumed_(spec.num_resources(), 0.0) {
  if (hard_stop && start_round != 1) {
    throw std::invalid_argument("hard-stop loops must start at round 1");
  }
  const int d = spec.num_resources();
  log_.horizon = spec.horizon - start_round + 1;
  log_.num_arms = spec.num_arms;
  log_.num_resources = d;
  log_.num_contexts = spec.num_contexts();
  log_.view = view;
  log_.Reserve(log_.horizon, primal.HasPredictions());
  reported_.resize(d + 1);
  costs_.resize(d);
  predicted_.resize(d + 1);
}

bool GameLoop::WouldOverrun() const {
  const double budget = spec_.budget();
  const int time = view_.time_index;
  for (int i = 0; i < spec_.num_resources(); ++i) {
    const double worst = i == time ? budget / spec_.horizon : 1.0;
    if (consumed_[i] + worst > budget * (1.0 + 1e-12)) return true;
  }
  return false;
}

void GameLoop::Step() {
  const int round = next_round_++;
  const int k = spec_.num_arms;
  const int d = spec_.num_resources();

  std::span<const double> l = dual_.Lambda();
  lambda_.assign(l.begin(), l.end());
  CheckSimplex(lambda_);
  SampleRoundInto(spec_, round, env_rng_, sample_);
  const int x = sample_.context;

  if (hard_stop_ && !stopped_ && WouldOverrun()) {
    stopped_ = true;
    log_.stop_round = round;
  }
  int arm;
  if (stopped_) {
    arm = *spec_.null_arm;
    for (int a = 0; a < k; ++a) log_.probs.push_back(a == arm ? 1.0 : 0.0);
  } else {
    arm = primal_.Act(x, lambda_, alg_rng_);
    std::span<const double> p = primal_.LastDistribution();
    log_.probs.insert(log_.probs.end(), p.begin(), p.end());
  }

  log_.contexts.push_back(x);
  log_.arms.push_back(arm);
  log_.lambdas.insert(log_.lambdas.end(), lambda_.begin(), lambda_.end());
  std::span<const double> all = sample_.matrix.values();
  log_.matrices.insert(log_.matrices.end(), all.begin(), all.end());
  for (int a = 0; a < k; ++a) {
    view_.Report(sample_.matrix.Row(a), reported_);
    log_.counterfactual.push_back(LagrangePayoffUnchecked(
        reported_, lambda_, view_.params, view_.signs));
  }

  std::span<const double> true_row = sample_.matrix.Row(arm);
  for (int i = 0; i < d; ++i) consumed_[i] += true_row[i + 1];
  view_.Report(true_row, reported_);
  const double payoff =
      LagrangePayoffUnchecked(reported_, lambda_, view_.params, view_.signs);
  PerResourcePayoffsInto(reported_, view_.params, view_.signs, costs_);
  log_.payoffs.push_back(payoff);
  log_.resource_payoffs.insert(log_.resource_payoffs.end(), costs_.begin(),
                               costs_.end());

  if (primal_.HasPredictions()) {
    if (stopped_) {
      std::fill(predicted_.begin(), predicted_.end(), 0.0);
      log_.estimates.push_back(0.0);
    } else {
      primal_.LastPredictions(arm, predicted_);
      log_.estimates.push_back(primal_.LastEstimate(arm));
    }
    log_.predictions.insert(log_.predictions.end(), predicted_.begin(),
                            predicted_.end());
  }

  if (stopped_) return;
  primal_.Observe(x, arm, reported_, payoff);
  dual_.Update(costs_);
}

Rng EnvironmentStream(std::uint64_t seed) { return Rng(seed).Fork(1); }
Rng AlgorithmStream(std::uint64_t seed) { return Rng(seed).Fork(2); }

RunLog Run(const InstanceSpec& spec, const AlgorithmView& view,
           PrimalAlgorithm& primal, DualAlgorithm& dual,
           const RunConfig& config) {
  switch (config.mode) {
    case RunMode::kHardStop:
      return RunHardStop(spec, view, primal, dual, config);
    case RunMode::kZeroViolation:
      return RunZeroViolation(spec, view, primal, dual, config);
    case RunMode::kStandard:
      break;
  }
  GameLoop loop(spec, view, primal, dual, EnvironmentStream(config.seed),
                AlgorithmStream(config.seed));
  loop.RunToEnd();
  return loop.TakeLog();
}

RunLog RunHardStop(const InstanceSpec& spec, const AlgorithmView& view,
                   PrimalAlgorithm& primal, DualAlgorithm& dual,
                   const RunConfig& config) {
  if (!spec.null_arm) throw std::invalid_argument("missing null arm");
  if (view.params.eta != 1.0) {
    throw std::invalid_argument("hard_stop runs use eta = 1");
  }
  GameLoop loop(spec, view, primal, dual, EnvironmentStream(config.seed),
                AlgorithmStream(config.seed), /*hard_stop=*/true);
  loop.RunToEnd();
  return loop.TakeLog();
}

RunLog RunZeroViolation(const InstanceSpec& spec, const AlgorithmView& view,
                        PrimalAlgorithm& primal, DualAlgorithm& dual,
                        const RunConfig& config) {
  if (config.epsilon > config.zeta / 2.0) {
    throw std::invalid_argument("zero_violation requires epsilon <= zeta/2");
  }
  GameLoop loop(spec, view, primal, dual, EnvironmentStream(config.seed),
                AlgorithmStream(config.seed));
  loop.RunToEnd();
  return loop.TakeLog();
}

}  // namespace cbwlc
