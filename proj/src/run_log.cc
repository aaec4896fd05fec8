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

#include "cbwlc/run_log.h"

namespace cbwlc {

void AlgorithmView::Report(std::span<const double> true_row,
                           std::span<double> out) const {
  out[0] = true_row[0];
  for (size_t i = 0; i < signs.size(); ++i) {
    const int idx = static_cast<int>(i);
    if (idx == time_index) {
      out[i + 1] = reported_budget / horizon;
    } else if (signs[i] < 0) {
      out[i + 1] = true_row[i + 1] - covering_shift;
    } else {
      out[i + 1] = true_row[i + 1];
    }
  }
}

void RunLog::Reserve(int rounds, bool with_predictions) {
  const size_t t = static_cast<size_t>(rounds);
  contexts.reserve(t);
  arms.reserve(t);
  lambdas.reserve(t * num_resources);
  probs.reserve(t * num_arms);
  matrices.reserve(t * num_arms * num_coords());
  counterfactual.reserve(t * num_arms);
  resource_payoffs.reserve(t * num_resources);
  payoffs.reserve(t);
  if (with_predictions) {
    predictions.reserve(t * num_coords());
    estimates.reserve(t);
  }
}

}  // namespace cbwlc
