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

// Regression-based contextual primal (SquareCB with Lagrange payoffs).
//
// One oracle per outcome coordinate predicts the mean reward and
// consumptions; their predictions are plugged into the Lagrange payoff and
// the arm is drawn by inverse gap weighting
//
//   p(a) = 1 / (c + gamma * (max_b L(b) - L(a))),
//
// with c chosen so that p sums to one.

#ifndef CBWLC_PRIMAL_SQUARECB_H_
#define CBWLC_PRIMAL_SQUARECB_H_

#include <memory>
#include <span>
#include <vector>

#include "cbwlc/lagrangian.h"
#include "cbwlc/learners.h"
#include "cbwlc/regression.h"
#include "cbwlc/run_log.h"

namespace cbwlc {

using OracleSet = std::vector<std::unique_ptr<RegressionOracle>>;

OracleSet CloneOracles(const OracleSet& oracles);

// L(a) = f_0(x, a) + eta * sum_i sign_i lambda_i (1 - (T/B) f_{i+1}(x, a))
// for every arm. `oracles` holds d + 1 oracles, reward first.
std::vector<double> EstimateLagrange(const OracleSet& oracles, int context,
                                     std::span<const double> lambda,
                                     const LagrangeParams& params,
                                     std::span<const int> signs);

struct IgwConfig {
  enum class Normalization { kBinarySearch, kClosedForm };

  double gamma = 1.0;
  Normalization normalization = Normalization::kBinarySearch;
  double bisection_tolerance = 1e-10;
};

// Throws std::invalid_argument for a non-finite estimate or gamma <= 0.
// Binary search brackets c in [1, K] and stops when the bracket is narrower
// than the tolerance, then divides by the exact sum. Closed form gives each
// non-leading arm 1 / (K + gamma * gap) and the rest to the leader (lowest
// index among ties). If `unnormalized_sum` is given it receives the sum
// before the final division (1 in closed-form mode).
std::vector<double> IgwDistribution(std::span<const double> estimates,
                                    const IgwConfig& config,
                                    double* unnormalized_sum = nullptr);
void IgwDistributionInto(std::span<const double> estimates,
                         const IgwConfig& config, std::span<double> out,
                         double* unnormalized_sum = nullptr);

// gamma = (B/T) sqrt((K T / (d + 1)) / U). Throws for U <= 0.
double SquareCbGamma(double budget, int horizon, int num_arms,
                     int num_resources, double regression_error_bound);

class SquareCbPrimal : public PrimalAlgorithm {
 public:
  SquareCbPrimal(OracleSet oracles, LagrangeParams params,
                 std::vector<int> signs, IgwConfig igw);
  SquareCbPrimal(const SquareCbPrimal& other);

  int Act(int context, std::span<const double> lambda, Rng& rng) override;
  std::span<const double> LastDistribution() const override {
    return distribution_;
  }
  // Feeds coordinate j of the reported outcome to oracle j.
  void Observe(int context, int arm, std::span<const double> outcome,
               double payoff) override;
  std::unique_ptr<PrimalAlgorithm> Clone() const override {
    return std::make_unique<SquareCbPrimal>(*this);
  }

  bool HasPredictions() const override { return true; }
  void LastPredictions(int arm, std::span<double> out) const override;
  double LastEstimate(int arm) const override { return estimates_[arm]; }

  const OracleSet& oracles() const { return oracles_; }
  const IgwConfig& igw() const { return igw_; }
  std::span<const double> LastEstimates() const { return estimates_; }

 private:
  OracleSet oracles_;
  LagrangeParams params_;
  std::vector<int> signs_;
  IgwConfig igw_;
  int num_arms_;
  std::vector<double> predictions_;  // K x (d + 1)
  std::vector<double> estimates_;
  std::vector<double> distribution_;
};

// Variant that regresses the Lagrange payoff directly. The payoff is linear
// in lambda, so each (context, arm) cell runs Vovk-Azoury-Warmuth on the
// feature vector lambda_t.
class DirectSquareCbPrimal : public PrimalAlgorithm {
 public:
  DirectSquareCbPrimal(int num_contexts, int num_arms, int num_resources,
                       LagrangeParams params, IgwConfig igw,
                       double ridge = 1.0);

  int Act(int context, std::span<const double> lambda, Rng& rng) override;
  std::span<const double> LastDistribution() const override {
    return distribution_;
  }
  void Observe(int context, int arm, std::span<const double> outcome,
               double payoff) override;
  std::unique_ptr<PrimalAlgorithm> Clone() const override {
    return std::make_unique<DirectSquareCbPrimal>(*this);
  }
  double LastEstimate(int arm) const override { return estimates_[arm]; }

 private:
  int num_arms_;
  LagrangeParams params_;
  IgwConfig igw_;
  std::vector<OnlineLeastSquares> cells_;
  Eigen::VectorXd last_lambda_;
  std::vector<double> estimates_;
  std::vector<double> distribution_;
};

// Primal regret against the best policy: on each stretch between switch
// rounds, sum over contexts of max_a sum_{t: x_t = x} Lag_t(a, lambda_t),
// minus the realized payoffs. With one context this is the best-arm regret.
double RealizedPolicyRegret(const RunLog& log,
                            std::span<const int> switch_rounds);

}  // namespace cbwlc

#endif  // CBWLC_PRIMAL_SQUARECB_H_
