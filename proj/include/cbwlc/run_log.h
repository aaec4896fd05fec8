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

#ifndef CBWLC_RUN_LOG_H_
#define CBWLC_RUN_LOG_H_

#include <span>
#include <vector>

#include "cbwlc/lagrangian.h"

namespace cbwlc {

// How the learners see the instance. In standard and hard-stop runs this is
// the instance itself; the zero-violation variant plays against a shrunken
// budget and shifted covering consumptions.
struct AlgorithmView {
  LagrangeParams params;
  std::vector<int> signs;
  // Budget the learners are told about (B or B(1 - epsilon)).
  double reported_budget = 0.0;
  // Subtracted from every covering consumption before it is reported.
  double covering_shift = 0.0;
  // Index of the time resource, whose reported consumption is always
  // reported_budget / T.
  int time_index = -1;
  int horizon = 0;

  // Converts a true outcome row into the row the learners observe.
  void Report(std::span<const double> true_row, std::span<double> out) const;
};

// Per-round trace of one run, stored column-wise. Round t (1-based) lives at
// index t - 1. Outcome matrices are the true (unshifted) realizations; all
// payoffs are computed from reported outcomes.
struct RunLog {
  int horizon = 0;
  int num_arms = 0;
  int num_resources = 0;
  int num_contexts = 0;
  AlgorithmView view;

  std::vector<int> contexts;
  std::vector<int> arms;
  std::vector<double> lambdas;              // T x d
  std::vector<double> probs;                // T x K, primal's p_t
  std::vector<double> matrices;             // T x K x (d + 1)
  std::vector<double> counterfactual;       // T x K, Lag_t(a, lambda_t)
  std::vector<double> resource_payoffs;     // T x d, Lag_t(a_t, e_i)
  std::vector<double> payoffs;              // T, Lag_t(a_t, lambda_t)
  // Regression-based primals only: oracle predictions at (x_t, a_t) and the
  // plug-in Lagrange estimate of the played arm. Empty otherwise.
  std::vector<double> predictions;          // T x (d + 1)
  std::vector<double> estimates;            // T
  // First round played by the null arm after a hard stop; 0 if none.
  int stop_round = 0;

  int num_coords() const { return num_resources + 1; }

  std::span<const double> Lambda(int t) const {
    return {lambdas.data() + static_cast<size_t>(t) * num_resources,
            static_cast<size_t>(num_resources)};
  }
  std::span<const double> Probs(int t) const {
    return {probs.data() + static_cast<size_t>(t) * num_arms,
            static_cast<size_t>(num_arms)};
  }
  std::span<const double> MatrixRow(int t, int arm) const {
    return {matrices.data() +
                (static_cast<size_t>(t) * num_arms + arm) * num_coords(),
            static_cast<size_t>(num_coords())};
  }
  std::span<const double> Outcome(int t) const { return MatrixRow(t, arms[t]); }
  std::span<const double> Counterfactual(int t) const {
    return {counterfactual.data() + static_cast<size_t>(t) * num_arms,
            static_cast<size_t>(num_arms)};
  }
  std::span<const double> ResourcePayoffs(int t) const {
    return {resource_payoffs.data() + static_cast<size_t>(t) * num_resources,
            static_cast<size_t>(num_resources)};
  }
  std::span<const double> Predictions(int t) const {
    return {predictions.data() + static_cast<size_t>(t) * num_coords(),
            static_cast<size_t>(num_coords())};
  }
  bool has_predictions() const { return !predictions.empty(); }

  void Reserve(int rounds, bool with_predictions);
};

}  // namespace cbwlc

#endif  // CBWLC_RUN_LOG_H_
