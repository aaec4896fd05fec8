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

#include "cbwlc/lagrangian.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cbwlc {

LagrangeParams MakeLagrangeParams(double eta, double ratio,
                                  double max_consumption) {
  if (!(eta >= 1.0)) throw std::invalid_argument("eta must be >= 1");
  if (!(ratio > 0.0)) throw std::invalid_argument("T/B must be positive");
  LagrangeParams p;
  p.eta = eta;
  p.ratio = ratio;
  p.eta_prime = eta * ratio;
  const double span = 1.0 + ratio * max_consumption;
  p.payoff_lo = -eta * span;
  p.payoff_hi = 1.0 + eta * span;
  return p;
}

LagrangeParams WithSupportRange(LagrangeParams params,
                                std::span<const int> signs,
                                const ConsumptionSupport& support) {
  // The penalty sum_i sign_i lambda_i (1 - ratio c_i) is a convex combination
  // of per-resource terms, so its range is spanned by the per-resource
  // extremes.
  double term_lo = std::numeric_limits<double>::infinity();
  double term_hi = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < signs.size(); ++i) {
    const double a = signs[i] * (1.0 - params.ratio * support.lo[i]);
    const double b = signs[i] * (1.0 - params.ratio * support.hi[i]);
    term_lo = std::min({term_lo, a, b});
    term_hi = std::max({term_hi, a, b});
  }
  params.payoff_lo = params.eta * term_lo;
  params.payoff_hi = 1.0 + params.eta * term_hi;
  return params;
}

LagrangeParams ChooseEta(EtaMode mode, double zeta,
                         double combined_regret_estimate, double budget,
                         int horizon) {
  if (!(budget > 0.0) || horizon < 1) {
    throw std::invalid_argument("budget and horizon must be positive");
  }
  const double ratio = horizon / budget;
  double eta = 1.0;
  switch (mode) {
    case EtaMode::kSlater:
      if (!(zeta > 0.0)) {
        throw std::invalid_argument("slater mode requires zeta > 0");
      }
      eta = 2.0 / zeta;
      break;
    case EtaMode::kZeroViolation:
      if (!(zeta > 0.0)) {
        throw std::invalid_argument("zero_violation mode requires zeta > 0");
      }
      eta = 4.0 / zeta;
      break;
    case EtaMode::kGeneral:
      if (!(combined_regret_estimate > 0.0)) {
        throw std::invalid_argument(
            "general mode requires a positive combined regret estimate");
      }
      eta = (budget / horizon) * std::sqrt(horizon / combined_regret_estimate);
      break;
    case EtaMode::kHardStop:
      eta = 1.0;
      break;
  }
  return MakeLagrangeParams(std::max(1.0, eta), ratio);
}

void CheckSimplex(std::span<const double> lambda) {
  double total = 0.0;
  for (double v : lambda) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("lambda has a negative entry");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("lambda does not sum to 1 (sum = " +
                                std::to_string(total) + ")");
  }
}

double LagrangePayoffUnchecked(std::span<const double> outcome,
                               std::span<const double> lambda,
                               const LagrangeParams& params,
                               std::span<const int> signs) {
  double penalty = 0.0;
  for (size_t i = 0; i < lambda.size(); ++i) {
    penalty += signs[i] * lambda[i] * (1.0 - params.ratio * outcome[i + 1]);
  }
  return outcome[0] + params.eta * penalty;
}

double LagrangePayoff(std::span<const double> outcome,
                      std::span<const double> lambda,
                      const LagrangeParams& params,
                      std::span<const int> signs) {
  CheckSimplex(lambda);
  if (outcome.size() != lambda.size() + 1 || signs.size() != lambda.size()) {
    throw std::invalid_argument("outcome, lambda and signs disagree on d");
  }
  return LagrangePayoffUnchecked(outcome, lambda, params, signs);
}

void PerResourcePayoffsInto(std::span<const double> outcome,
                            const LagrangeParams& params,
                            std::span<const int> signs,
                            std::span<double> out) {
  for (size_t i = 0; i < signs.size(); ++i) {
    out[i] = outcome[0] +
             params.eta * (signs[i] * (1.0 - params.ratio * outcome[i + 1]));
  }
}

std::vector<double> PerResourcePayoffs(std::span<const double> outcome,
                                       const LagrangeParams& params,
                                       std::span<const int> signs) {
  std::vector<double> out(signs.size());
  PerResourcePayoffsInto(outcome, params, signs, out);
  return out;
}

MixedPolicy MixedPolicy::Uniform(int num_contexts, int num_arms) {
  MixedPolicy p(num_contexts, num_arms);
  for (int x = 0; x < num_contexts; ++x) {
    for (int a = 0; a < num_arms; ++a) p.at(x, a) = 1.0 / num_arms;
  }
  return p;
}

MixedPolicy MixedPolicy::Constant(int num_contexts, int num_arms, int arm) {
  MixedPolicy p(num_contexts, num_arms);
  for (int x = 0; x < num_contexts; ++x) p.at(x, arm) = 1.0;
  return p;
}

double ExpectedReward(const MixedPolicy& policy, const OutcomeModel& model,
                      std::span<const double> arrivals) {
  double total = 0.0;
  for (int x = 0; x < model.num_contexts(); ++x) {
    double row = 0.0;
    for (int a = 0; a < model.num_arms(); ++a) {
      row += policy.at(x, a) * model.reward(x, a);
    }
    total += arrivals[x] * row;
  }
  return total;
}

double ExpectedConsumption(const MixedPolicy& policy,
                           const OutcomeModel& model,
                           std::span<const double> arrivals, int resource) {
  double total = 0.0;
  for (int x = 0; x < model.num_contexts(); ++x) {
    double row = 0.0;
    for (int a = 0; a < model.num_arms(); ++a) {
      row += policy.at(x, a) * model.consumption(x, a, resource);
    }
    total += arrivals[x] * row;
  }
  return total;
}

double ExpectedArmLagrangian(const OutcomeModel& model, int context, int arm,
                             std::span<const double> lambda,
                             const LagrangeParams& params,
                             std::span<const int> signs) {
  double penalty = 0.0;
  for (size_t i = 0; i < lambda.size(); ++i) {
    penalty += signs[i] * lambda[i] *
               (1.0 - params.ratio * model.consumption(context, arm, i));
  }
  return model.reward(context, arm) + params.eta * penalty;
}

double ExpectedLagrangian(const MixedPolicy& policy,
                          std::span<const double> lambda,
                          const OutcomeModel& model,
                          std::span<const double> arrivals,
                          const LagrangeParams& params,
                          std::span<const int> signs) {
  double total = 0.0;
  for (int x = 0; x < model.num_contexts(); ++x) {
    double row = 0.0;
    for (int a = 0; a < model.num_arms(); ++a) {
      if (policy.at(x, a) == 0.0) continue;
      row += policy.at(x, a) *
             ExpectedArmLagrangian(model, x, a, lambda, params, signs);
    }
    total += arrivals[x] * row;
  }
  return total;
}

}  // namespace cbwlc
