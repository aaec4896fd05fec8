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

// Small instance builders shared by the tests.

#ifndef CBWLC_TESTS_TEST_INSTANCES_H_
#define CBWLC_TESTS_TEST_INSTANCES_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbwlc/env.h"
#include "cbwlc/learners.h"

namespace cbwlc::testing {

// rows[x][a] = (r, c_1, ..., c_d).
using MeanTable = std::vector<std::vector<std::vector<double>>>;

inline OutcomeModel ModelFromTable(const MeanTable& rows, Noise reward_noise,
                                   Noise consumption_noise) {
  const int contexts = static_cast<int>(rows.size());
  const int arms = static_cast<int>(rows[0].size());
  const int d = static_cast<int>(rows[0][0].size()) - 1;
  OutcomeModel m(contexts, arms, d);
  for (int x = 0; x < contexts; ++x) {
    for (int a = 0; a < arms; ++a) {
      for (int c = 0; c <= d; ++c) {
        m.set_mean(x, a, c, rows[x][a][c]);
        m.set_noise(x, a, c, c == 0 ? reward_noise : consumption_noise);
      }
    }
  }
  return m;
}

// Stationary instance with uniform arrivals and a common budget; the time
// resource is appended by normalization.
inline InstanceSpec StationaryInstance(int horizon, double budget,
                                       const std::vector<int>& signs,
                                       const MeanTable& rows,
                                       Noise reward_noise = {},
                                       Noise consumption_noise = {},
                                       std::optional<int> null_arm = {}) {
  InstanceSpec s;
  s.horizon = horizon;
  s.num_arms = static_cast<int>(rows[0].size());
  for (int sign : signs) {
    s.constraints.signs.push_back(sign);
    s.constraints.budgets.push_back(budget);
    s.constraints.is_time.push_back(false);
  }
  const int contexts = static_cast<int>(rows.size());
  for (int x = 0; x < contexts; ++x) {
    s.context_ids.push_back("x" + std::to_string(x));
    s.arrival_probs.push_back(1.0 / contexts);
  }
  Segment seg;
  seg.model = ModelFromTable(rows, reward_noise, consumption_noise);
  s.segments = {seg};
  s.null_arm = null_arm;
  return NormalizeInstance(s);
}

// Instance whose segments start at the given rounds, with one mean table
// per segment.
inline InstanceSpec SegmentedInstance(int horizon, double budget,
                                      const std::vector<int>& signs,
                                      const std::vector<int>& starts,
                                      const std::vector<MeanTable>& tables,
                                      Noise reward_noise = {},
                                      Noise consumption_noise = {}) {
  InstanceSpec s = StationaryInstance(horizon, budget, signs, tables[0],
                                      reward_noise, consumption_noise);
  InstanceSpec raw;
  raw.horizon = horizon;
  raw.num_arms = s.num_arms;
  for (int sign : signs) {
    raw.constraints.signs.push_back(sign);
    raw.constraints.budgets.push_back(budget);
    raw.constraints.is_time.push_back(false);
  }
  raw.context_ids = s.context_ids;
  raw.arrival_probs = s.arrival_probs;
  for (size_t k = 0; k < tables.size(); ++k) {
    Segment seg;
    seg.start_round = starts[k];
    seg.model = ModelFromTable(tables[k], reward_noise, consumption_noise);
    raw.segments.push_back(seg);
  }
  return NormalizeInstance(raw);
}

// Always plays the same arm.
class FixedArmPrimal : public PrimalAlgorithm {
 public:
  FixedArmPrimal(int num_arms, int arm) : dist_(num_arms, 0.0), arm_(arm) {
    dist_[arm] = 1.0;
  }
  int Act(int, std::span<const double>, Rng&) override { return arm_; }
  std::span<const double> LastDistribution() const override { return dist_; }
  void Observe(int, int, std::span<const double>, double) override {}
  std::unique_ptr<PrimalAlgorithm> Clone() const override {
    return std::make_unique<FixedArmPrimal>(*this);
  }

 private:
  std::vector<double> dist_;
  int arm_;
};

}  // namespace cbwlc::testing

#endif  // CBWLC_TESTS_TEST_INSTANCES_H_
