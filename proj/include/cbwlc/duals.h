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

// Full-feedback learners over resources: Hedge (share_alpha = 0) and
// Fixed-Share (share_alpha > 0), both minimizing Lagrange costs.

#ifndef CBWLC_DUALS_H_
#define CBWLC_DUALS_H_

#include <optional>
#include <span>
#include <vector>

#include "cbwlc/learners.h"
#include "cbwlc/run_log.h"

namespace cbwlc {

struct DualState {
  std::vector<double> log_weights;
  // Step size per unit of raw cost; applied to (cost - cost_lo), which is the
  // textbook rate sqrt(8 ln d / T) on costs normalized to [0, 1].
  double learning_rate = 0.0;
  double share_alpha = 0.0;
  double cost_lo = 0.0;
  double cost_hi = 1.0;
  std::vector<double> cumulative_cost;
  // lambda = softmax(log_weights), refreshed after every step.
  std::vector<double> distribution;
};

// Uniform weights, learning_rate = sqrt(8 ln d / T) / (cost_hi - cost_lo),
// share_alpha = S / (T - 1) when a switch hint S is given, else 0.
DualState DualInit(int num_resources, int horizon, double cost_lo,
                   double cost_hi,
                   std::optional<int> num_switches_hint = std::nullopt);

// Multiplicative-weights step followed by Fixed-Share mixing
// w <- (1 - alpha) w + alpha * mean(w). Throws std::invalid_argument when a
// cost leaves [cost_lo, cost_hi] by more than 1e-9.
void DualStep(DualState& state, std::span<const double> costs);

// Interval-wise dual regret: for each stretch between consecutive switch
// rounds, sum_t Lag_t(a_t, lambda_t) - min_i sum_t Lag_t(a_t, i). An empty
// switch list gives the full-horizon regret.
double RealizedDualRegret(std::span<const double> payoffs,
                          std::span<const double> resource_payoffs,
                          int num_resources, std::span<const int> switch_rounds);
double RealizedDualRegret(const RunLog& log, std::span<const int> switch_rounds);

class HedgeDual : public DualAlgorithm {
 public:
  explicit HedgeDual(DualState state) : state_(std::move(state)) {}

  std::span<const double> Lambda() const override {
    return state_.distribution;
  }
  void Update(std::span<const double> costs) override {
    DualStep(state_, costs);
  }
  std::unique_ptr<DualAlgorithm> Clone() const override {
    return std::make_unique<HedgeDual>(*this);
  }
  const DualState& state() const { return state_; }

 private:
  DualState state_;
};

}  // namespace cbwlc

#endif  // CBWLC_DUALS_H_
