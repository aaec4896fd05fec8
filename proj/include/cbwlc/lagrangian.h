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

// Lagrange payoffs of the primal-dual game. For an outcome row
// (r; c_1, ..., c_d) and a dual distribution lambda over resources,
//
//   Lag(a, lambda) = r + eta * sum_i sign_i * lambda_i * (1 - (T/B) * c_i).
//
// The same quantity is the primal's reward and the dual's cost. Its
// expectation under a fixed distribution D over arms equals the LP Lagrangian
// evaluated at the scaled dual vector eta * lambda.

#ifndef CBWLC_LAGRANGIAN_H_
#define CBWLC_LAGRANGIAN_H_

#include <span>
#include <vector>

#include "cbwlc/env.h"

namespace cbwlc {

struct LagrangeParams {
  double eta = 1.0;
  // T / B.
  double ratio = 1.0;
  // eta * T / B.
  double eta_prime = 1.0;
  // Every realized payoff lies in [payoff_lo, payoff_hi].
  double payoff_lo = 0.0;
  double payoff_hi = 1.0;

  double range_width() const { return payoff_hi - payoff_lo; }
};

// Parameters with the generic range bound
//   [-eta (1 + ratio * c_max), 1 + eta (1 + ratio * c_max)],
// where c_max bounds |c_i| for every reported consumption.
LagrangeParams MakeLagrangeParams(double eta, double ratio,
                                  double max_consumption = 1.0);

// Per-resource interval that realized consumptions can take.
struct ConsumptionSupport {
  std::vector<double> lo;
  std::vector<double> hi;
};

// Narrows [payoff_lo, payoff_hi] to what the given consumption supports and
// signs can actually produce. The result still contains every payoff.
LagrangeParams WithSupportRange(LagrangeParams params,
                                std::span<const int> signs,
                                const ConsumptionSupport& support);

enum class EtaMode { kSlater, kGeneral, kHardStop, kZeroViolation };

// slater: eta = 2 / zeta; general: eta = max(1, (B/T) sqrt(T / R));
// hard_stop: eta = 1; zero_violation: eta = 4 / zeta. eta is floored at 1.
// Throws std::invalid_argument for zeta <= 0 in the margin-based modes and
// for a non-positive regret estimate in general mode.
LagrangeParams ChooseEta(EtaMode mode, double zeta,
                         double combined_regret_estimate, double budget,
                         int horizon);

// Checks that lambda is a probability vector (tolerance 1e-12).
void CheckSimplex(std::span<const double> lambda);

// Payoff of one outcome row. Throws std::invalid_argument when lambda is not
// on the simplex.
double LagrangePayoff(std::span<const double> outcome,
                      std::span<const double> lambda,
                      const LagrangeParams& params,
                      std::span<const int> signs);

// Same formula without the simplex check, for inner loops that already
// validated lambda.
double LagrangePayoffUnchecked(std::span<const double> outcome,
                               std::span<const double> lambda,
                               const LagrangeParams& params,
                               std::span<const int> signs);

// Entry i is the payoff against the unit vector e_i. This is the full cost
// vector the dual learner observes.
std::vector<double> PerResourcePayoffs(std::span<const double> outcome,
                                       const LagrangeParams& params,
                                       std::span<const int> signs);
void PerResourcePayoffsInto(std::span<const double> outcome,
                            const LagrangeParams& params,
                            std::span<const int> signs,
                            std::span<double> out);

// Distribution over arms for every context, stored row-major (context, arm).
class MixedPolicy {
 public:
  MixedPolicy() = default;
  MixedPolicy(int num_contexts, int num_arms)
      : num_contexts_(num_contexts),
        num_arms_(num_arms),
        probs_(static_cast<size_t>(num_contexts) * num_arms, 0.0) {}

  static MixedPolicy Uniform(int num_contexts, int num_arms);
  // Every context plays `arm` with probability one.
  static MixedPolicy Constant(int num_contexts, int num_arms, int arm);

  int num_contexts() const { return num_contexts_; }
  int num_arms() const { return num_arms_; }
  double& at(int context, int arm) {
    return probs_[static_cast<size_t>(context) * num_arms_ + arm];
  }
  double at(int context, int arm) const {
    return probs_[static_cast<size_t>(context) * num_arms_ + arm];
  }
  std::span<const double> Row(int context) const {
    return {probs_.data() + static_cast<size_t>(context) * num_arms_,
            static_cast<size_t>(num_arms_)};
  }
  std::span<double> MutableRow(int context) {
    return {probs_.data() + static_cast<size_t>(context) * num_arms_,
            static_cast<size_t>(num_arms_)};
  }

 private:
  int num_contexts_ = 0;
  int num_arms_ = 0;
  std::vector<double> probs_;
};

// Expected reward r(D) and expected consumption c_i(D) under the model.
double ExpectedReward(const MixedPolicy& policy, const OutcomeModel& model,
                      std::span<const double> arrivals);
double ExpectedConsumption(const MixedPolicy& policy,
                           const OutcomeModel& model,
                           std::span<const double> arrivals, int resource);

// L(D, eta * lambda) from exact model means; lambda is any nonnegative
// vector (not necessarily on the simplex).
double ExpectedLagrangian(const MixedPolicy& policy,
                          std::span<const double> lambda,
                          const OutcomeModel& model,
                          std::span<const double> arrivals,
                          const LagrangeParams& params,
                          std::span<const int> signs);

// Expected payoff of arm `arm` in context `context` against lambda.
double ExpectedArmLagrangian(const OutcomeModel& model, int context, int arm,
                             std::span<const double> lambda,
                             const LagrangeParams& params,
                             std::span<const int> signs);

}  // namespace cbwlc

#endif  // CBWLC_LAGRANGIAN_H_
