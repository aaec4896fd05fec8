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

#include "cbwlc/duals.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "log_weights.h"

namespace cbwlc {

DualState DualInit(int num_resources, int horizon, double cost_lo,
                   double cost_hi, std::optional<int> num_switches_hint) {
  if (num_resources < 1) throw std::invalid_argument("need d >= 1");
  if (horizon < 1) throw std::invalid_argument("need T >= 1");
  if (!(cost_hi > cost_lo)) {
    throw std::invalid_argument("cost range must have positive width");
  }
  DualState s;
  s.log_weights.assign(num_resources, 0.0);
  s.cumulative_cost.assign(num_resources, 0.0);
  s.distribution.assign(num_resources, 1.0 / num_resources);
  s.cost_lo = cost_lo;
  s.cost_hi = cost_hi;
  s.learning_rate = std::sqrt(8.0 * std::log(static_cast<double>(num_resources)) /
                              horizon) /
                    (cost_hi - cost_lo);
  if (num_switches_hint && horizon > 1) {
    s.share_alpha = static_cast<double>(*num_switches_hint) / (horizon - 1);
    s.share_alpha = std::clamp(s.share_alpha, 0.0, 1.0);
  }
  return s;
}

void DualStep(DualState& state, std::span<const double> costs) {
  const size_t d = state.log_weights.size();
  if (costs.size() != d) throw std::invalid_argument("cost vector has wrong size");
  for (size_t i = 0; i < d; ++i) {
    if (costs[i] < state.cost_lo - 1e-9 || costs[i] > state.cost_hi + 1e-9) {
      throw std::invalid_argument(
          "dual cost " + std::to_string(costs[i]) + " outside declared range [" +
          std::to_string(state.cost_lo) + ", " + std::to_string(state.cost_hi) +
          "]");
    }
  }
  for (size_t i = 0; i < d; ++i) {
    state.cumulative_cost[i] += costs[i];
    state.log_weights[i] -= state.learning_rate * (costs[i] - state.cost_lo);
  }
  internal::Renormalize(state.log_weights);
  internal::FixedShareMix(state.log_weights, state.share_alpha);
  internal::Softmax(state.log_weights, state.distribution);
}

double RealizedDualRegret(std::span<const double> payoffs,
                          std::span<const double> resource_payoffs,
                          int num_resources,
                          std::span<const int> switch_rounds) {
  const int horizon = static_cast<int>(payoffs.size());
  double total = 0.0;
  int begin = 0;  // 0-based index of the first round of the interval
  size_t next_switch = 0;
  std::vector<double> per_resource(num_resources);
  while (begin < horizon) {
    int end = horizon;
    while (next_switch < switch_rounds.size() &&
           switch_rounds[next_switch] - 1 <= begin) {
      ++next_switch;
    }
    if (next_switch < switch_rounds.size()) {
      end = std::min(horizon, switch_rounds[next_switch] - 1);
    }
    double played = 0.0;
    std::fill(per_resource.begin(), per_resource.end(), 0.0);
    for (int t = begin; t < end; ++t) {
      played += payoffs[t];
      for (int i = 0; i < num_resources; ++i) {
        per_resource[i] += resource_payoffs[static_cast<size_t>(t) * num_resources + i];
      }
    }
    total += played - *std::min_element(per_resource.begin(), per_resource.end());
    begin = end;
  }
  return total;
}

double RealizedDualRegret(const RunLog& log, std::span<const int> switch_rounds) {
  return RealizedDualRegret(log.payoffs, log.resource_payoffs, log.num_resources,
                            switch_rounds);
}

}  // namespace cbwlc
