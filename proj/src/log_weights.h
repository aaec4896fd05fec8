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

// Exponential-weights helpers shared by the learners. Weights are kept in
// log space and shifted so the largest log-weight is 0.

#ifndef CBWLC_SRC_LOG_WEIGHTS_H_
#define CBWLC_SRC_LOG_WEIGHTS_H_

#include <algorithm>
#include <cmath>
#include <span>

namespace cbwlc::internal {

// exp(-700) is still a normal double; entries are never allowed to fall
// further behind the leader, so no probability underflows to zero.
inline constexpr double kMinLogWeight = -700.0;

inline void Renormalize(std::span<double> log_weights) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  for (double& w : log_weights) w = std::max(w - top, kMinLogWeight);
}

inline void Softmax(std::span<const double> log_weights, std::span<double> out) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  double total = 0.0;
  for (size_t i = 0; i < log_weights.size(); ++i) {
    out[i] = std::exp(log_weights[i] - top);
    total += out[i];
  }
  for (double& p : out) p /= total;
}

// Fixed-Share: w <- (1 - alpha) w + alpha * mean(w), done on exponentiated
// weights after shifting by the max.
inline void FixedShareMix(std::span<double> log_weights, double alpha) {
  if (alpha <= 0.0) return;
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  double mean = 0.0;
  for (double w : log_weights) mean += std::exp(w - top);
  mean /= static_cast<double>(log_weights.size());
  for (double& w : log_weights) {
    w = std::log((1.0 - alpha) * std::exp(w - top) + alpha * mean);
  }
  Renormalize(log_weights);
}

}  // namespace cbwlc::internal

#endif  // CBWLC_SRC_LOG_WEIGHTS_H_
