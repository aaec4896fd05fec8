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

#include "cbwlc/primal_bandit.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "log_weights.h"

namespace cbwlc {
namespace {

void RefreshDistribution(AdvBanditState& s) {
  const double k = static_cast<double>(s.log_weights.size());
  internal::Softmax(s.log_weights, s.last_distribution);
  for (double& p : s.last_distribution) {
    p = (1.0 - s.exploration_mix) * p + s.exploration_mix / k;
  }
}

}  // namespace

AdvBanditState AdvBanditInit(int num_arms, int horizon, double delta,
                             double payoff_lo, double payoff_hi,
                             std::optional<int> num_switches_hint) {
  if (num_arms < 2) throw std::invalid_argument("need K >= 2");
  if (horizon < 1) throw std::invalid_argument("need T >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!(payoff_hi > payoff_lo)) {
    throw std::invalid_argument("payoff range must have positive width");
  }
  const double k = num_arms;
  const double t = horizon;
  AdvBanditState s;
  s.log_weights.assign(num_arms, 0.0);
  s.last_distribution.assign(num_arms, 1.0 / k);
  s.payoff_lo = payoff_lo;
  s.payoff_hi = payoff_hi;
  if (num_switches_hint) {
    const double e = std::numbers::e;
    const double switches = *num_switches_hint;
    s.exploration_mix = std::min(
        1.0, std::sqrt(k * (switches * std::log(k * t) + e) / ((e - 1.0) * t)));
    s.share_alpha =
        horizon > 1 ? std::clamp(switches / (t - 1.0), 0.0, 1.0) : 0.0;
  } else {
    s.exploration_mix = std::min(1.0, std::sqrt(k * std::log(k) / t));
  }
  s.learning_rate = s.exploration_mix / (2.0 * k);
  s.bonus_rate = std::sqrt(std::log(k / delta) / (k * t));
  return s;
}

int AdvBanditSample(AdvBanditState& state, Rng& rng) {
  state.last_arm = rng.Categorical(state.last_distribution);
  return state.last_arm;
}

void AdvBanditUpdate(AdvBanditState& state, int arm, double payoff) {
  const int k = static_cast<int>(state.log_weights.size());
  if (arm < 0 || arm >= k) throw std::invalid_argument("arm out of range");
  if (payoff < state.payoff_lo - 1e-9 || payoff > state.payoff_hi + 1e-9) {
    throw std::invalid_argument(
        "primal payoff " + std::to_string(payoff) + " outside declared range [" +
        std::to_string(state.payoff_lo) + ", " +
        std::to_string(state.payoff_hi) + "]");
  }
  const double gain = std::clamp(
      (payoff - state.payoff_lo) / (state.payoff_hi - state.payoff_lo), 0.0, 1.0);
  for (int a = 0; a < k; ++a) {
    const double p = state.last_distribution[a];
    const double estimate = ((a == arm ? gain : 0.0) + state.bonus_rate) / p;
    state.log_weights[a] += state.learning_rate * estimate;
  }
  internal::Renormalize(state.log_weights);
  internal::FixedShareMix(state.log_weights, state.share_alpha);
  RefreshDistribution(state);
}

double RealizedPrimalRegretNonContextual(std::span<const double> payoffs,
                                         std::span<const double> counterfactual,
                                         int num_arms,
                                         std::span<const int> switch_rounds) {
  const int horizon = static_cast<int>(payoffs.size());
  double total = 0.0;
  std::vector<double> per_arm(num_arms);
  std::vector<int> bounds{0};
  for (int r : switch_rounds) {
    if (r - 1 > bounds.back() && r - 1 < horizon) bounds.push_back(r - 1);
  }
  bounds.push_back(horizon);
  for (size_t j = 0; j + 1 < bounds.size(); ++j) {
    double played = 0.0;
    std::fill(per_arm.begin(), per_arm.end(), 0.0);
    for (int t = bounds[j]; t < bounds[j + 1]; ++t) {
      played += payoffs[t];
      for (int a = 0; a < num_arms; ++a) {
        per_arm[a] += counterfactual[static_cast<size_t>(t) * num_arms + a];
      }
    }
    total += *std::max_element(per_arm.begin(), per_arm.end()) - played;
  }
  return total;
}

double RealizedPrimalRegretNonContextual(const RunLog& log,
                                         std::span<const int> switch_rounds) {
  return RealizedPrimalRegretNonContextual(log.payoffs, log.counterfactual,
                                           log.num_arms, switch_rounds);
}

}  // namespace cbwlc
