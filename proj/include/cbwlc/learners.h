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

#ifndef CBWLC_LEARNERS_H_
#define CBWLC_LEARNERS_H_

#include <memory>
#include <span>

#include "cbwlc/rng.h"

namespace cbwlc {

// The arm-choosing player. Each round it sees the context and the dual's
// lambda_t before acting, then receives the reported outcome row and the
// Lagrange payoff of the arm it played.
class PrimalAlgorithm {
 public:
  virtual ~PrimalAlgorithm() = default;

  virtual int Act(int context, std::span<const double> lambda, Rng& rng) = 0;
  // Distribution the last Act() sampled from.
  virtual std::span<const double> LastDistribution() const = 0;
  virtual void Observe(int context, int arm, std::span<const double> outcome,
                       double payoff) = 0;
  virtual std::unique_ptr<PrimalAlgorithm> Clone() const = 0;

  // Regression-based primals expose the per-coordinate predictions and the
  // Lagrange estimate they used for `arm` in the last Act().
  virtual bool HasPredictions() const { return false; }
  virtual void LastPredictions(int /*arm*/, std::span<double> /*out*/) const {}
  virtual double LastEstimate(int /*arm*/) const { return 0.0; }
};

// The resource-weighting player with full feedback.
class DualAlgorithm {
 public:
  virtual ~DualAlgorithm() = default;

  virtual std::span<const double> Lambda() const = 0;
  // costs[i] is the Lagrange payoff of the played arm against e_i.
  virtual void Update(std::span<const double> costs) = 0;
  virtual std::unique_ptr<DualAlgorithm> Clone() const = 0;
};

}  // namespace cbwlc

#endif  // CBWLC_LEARNERS_H_
