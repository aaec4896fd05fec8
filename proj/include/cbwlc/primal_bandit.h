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

// Adversarial bandit primals for the non-contextual game: EXP3.P (high
// probability, with a confidence bonus) and EXP3.S (EXP3.P plus Fixed-Share
// mixing, for switching environments).

#ifndef CBWLC_PRIMAL_BANDIT_H_
#define CBWLC_PRIMAL_BANDIT_H_

#include <optional>
#include <span>
#include <vector>

#include "cbwlc/learners.h"
#include "cbwlc/rng.h"
#include "cbwlc/run_log.h"

namespace cbwlc {

struct AdvBanditState {
  std::vector<double> log_weights;
  // gamma: weight of the uniform distribution in the sampling mix.
  double exploration_mix = 1.0;
  // Step on normalized (unit-range) gain estimates.
  double learning_rate = 0.0;
  // beta: every arm's gain estimate gets beta / p(a).
  double bonus_rate = 0.0;
  double share_alpha = 0.0;
  double payoff_lo = 0.0;
  double payoff_hi = 1.0;
  std::vector<double> last_distribution;
  int last_arm = -1;
};

// Uniform weights with
//   gamma = min(1, sqrt(K ln K / T)),  lr = gamma / (2K),
//   beta  = sqrt(ln(K / delta) / (K T)).
// With a switch hint S the state runs as EXP3.S: share_alpha = S / (T - 1)
// and gamma = min(1, sqrt(K (S ln(K T) + e) / ((e - 1) T))), the EXP3.S
// exploration rate that lets weights move fast enough to track switches.
AdvBanditState AdvBanditInit(int num_arms, int horizon, double delta,
                             double payoff_lo, double payoff_hi,
                             std::optional<int> num_switches_hint = std::nullopt);

// Draws from last_distribution and remembers the draw.
int AdvBanditSample(AdvBanditState& state, Rng& rng);

// Importance-weighted update with the confidence bonus, then Fixed-Share
// mixing. Throws std::invalid_argument for a payoff outside the declared
// range.
void AdvBanditUpdate(AdvBanditState& state, int arm, double payoff);

// Interval-wise primal regret against the best fixed arm on each stretch,
// computed from the logged counterfactual payoffs.
double RealizedPrimalRegretNonContextual(std::span<const double> payoffs,
                                         std::span<const double> counterfactual,
                                         int num_arms,
                                         std::span<const int> switch_rounds);
double RealizedPrimalRegretNonContextual(const RunLog& log,
                                         std::span<const int> switch_rounds);

class Exp3Primal : public PrimalAlgorithm {
 public:
  explicit Exp3Primal(AdvBanditState state) : state_(std::move(state)) {}

  int Act(int /*context*/, std::span<const double> /*lambda*/,
          Rng& rng) override {
    return AdvBanditSample(state_, rng);
  }
  std::span<const double> LastDistribution() const override {
    return state_.last_distribution;
  }
  void Observe(int /*context*/, int arm, std::span<const double> /*outcome*/,
               double payoff) override {
    AdvBanditUpdate(state_, arm, payoff);
  }
  std::unique_ptr<PrimalAlgorithm> Clone() const override {
    return std::make_unique<Exp3Primal>(*this);
  }
  const AdvBanditState& state() const { return state_; }

 private:
  AdvBanditState state_;
};

}  // namespace cbwlc

#endif  // CBWLC_PRIMAL_BANDIT_H_
