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

// Problem instances for contextual bandits with linear constraints: finite
// context spaces, per-(context, arm) outcome means with a noise family per
// coordinate, and piecewise-stationary environments made of segments.

#ifndef CBWLC_ENV_H_
#define CBWLC_ENV_H_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbwlc/rng.h"

namespace cbwlc {

class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Packing resources have sign +1 (total consumption at most the budget),
// covering resources have sign -1 (at least the budget).
struct ConstraintSpec {
  std::vector<int> signs;
  std::vector<double> budgets;
  std::vector<bool> is_time;

  int num_resources() const { return static_cast<int>(signs.size()); }
  // Index of the flagged time resource or -1.
  int time_index() const;
};

enum class NoiseKind {
  kDeterministic,
  // Two-point distribution with the stored mean: {0, 1} for nonnegative
  // means, {-1, 0} for negative consumption means.
  kBernoulli,
  // mean + stddev * N(0, 1), clamped to the legal interval.
  kGaussian,
};

struct Noise {
  NoiseKind kind = NoiseKind::kDeterministic;
  double stddev = 0.0;
};

// Mean outcome table. Coordinate 0 is the reward (range [0, 1]); coordinate
// 1 + i is the consumption of resource i (range [-1, 1]).
class OutcomeModel {
 public:
  OutcomeModel() = default;
  OutcomeModel(int num_contexts, int num_arms, int num_resources);

  int num_contexts() const { return num_contexts_; }
  int num_arms() const { return num_arms_; }
  int num_resources() const { return num_resources_; }
  int num_coords() const { return num_resources_ + 1; }

  double mean(int context, int arm, int coord) const {
    return means_[Index(context, arm, coord)];
  }
  void set_mean(int context, int arm, int coord, double value) {
    means_[Index(context, arm, coord)] = value;
  }
  double reward(int context, int arm) const { return mean(context, arm, 0); }
  double consumption(int context, int arm, int resource) const {
    return mean(context, arm, resource + 1);
  }

  const Noise& noise(int context, int arm, int coord) const {
    return noise_[Index(context, arm, coord)];
  }
  void set_noise(int context, int arm, int coord, Noise noise) {
    noise_[Index(context, arm, coord)] = noise;
  }
  // Applies one noise descriptor to every (context, arm, coord).
  void SetAllNoise(Noise noise);

  // Copy with one more resource whose consumption is `value` everywhere and
  // deterministic.
  OutcomeModel WithAppendedResource(double value) const;

  // Largest probability, over all Gaussian coordinates, that a draw falls
  // outside the legal interval and gets clamped.
  double MaxClampProbability() const;

 private:
  int Index(int context, int arm, int coord) const {
    return (context * num_arms_ + arm) * (num_resources_ + 1) + coord;
  }

  int num_contexts_ = 0;
  int num_arms_ = 0;
  int num_resources_ = 0;
  std::vector<double> means_;
  std::vector<Noise> noise_;
};

// One stationary stretch of the environment, covering rounds
// [start_round, next segment's start_round).
struct Segment {
  int start_round = 1;
  // Empty means the instance-level arrival distribution.
  std::vector<double> arrival_probs;
  OutcomeModel model;
};

struct InstanceSpec {
  int horizon = 0;
  int num_arms = 0;
  ConstraintSpec constraints;
  std::vector<std::string> context_ids;
  std::vector<double> arrival_probs;
  std::vector<Segment> segments;
  std::optional<int> null_arm;

  int num_resources() const { return constraints.num_resources(); }
  int num_contexts() const { return static_cast<int>(context_ids.size()); }
  int num_switches() const { return static_cast<int>(segments.size()) - 1; }
  // Common budget B. Only meaningful after NormalizeInstance.
  double budget() const { return constraints.budgets.at(0); }
  // Index of the segment containing `round` (binary search over starts).
  int SegmentIndex(int round) const;
  std::span<const double> Arrivals(int segment) const;
  // Number of rounds in segment `segment`.
  int SegmentLength(int segment) const;
  // Rounds where a new segment starts (all starts except round 1).
  std::vector<int> SwitchRounds() const;
};

// Checks dimensions, probability vectors, segment ordering, mean ranges and
// budgets. Throws InvalidInstance naming the first violation.
void ValidateInstance(const InstanceSpec& spec);

// Rescales every non-time resource so that all budgets equal B = min_i B_i,
// and makes sure exactly one resource is the time resource (deterministic
// consumption B/T, sign +1). Appends one when none is flagged.
InstanceSpec NormalizeInstance(const InstanceSpec& raw);

// K x (d + 1) realized outcomes of one round; row a is what arm a would yield.
class OutcomeMatrix {
 public:
  OutcomeMatrix() = default;
  OutcomeMatrix(int num_arms, int num_resources)
      : num_arms_(num_arms),
        num_resources_(num_resources),
        values_(static_cast<size_t>(num_arms) * (num_resources + 1), 0.0) {}

  int num_arms() const { return num_arms_; }
  int num_resources() const { return num_resources_; }
  std::span<const double> Row(int arm) const {
    return {values_.data() + static_cast<size_t>(arm) * (num_resources_ + 1),
            static_cast<size_t>(num_resources_ + 1)};
  }
  double& at(int arm, int coord) {
    return values_[static_cast<size_t>(arm) * (num_resources_ + 1) + coord];
  }
  double at(int arm, int coord) const {
    return values_[static_cast<size_t>(arm) * (num_resources_ + 1) + coord];
  }
  double reward(int arm) const { return at(arm, 0); }
  double consumption(int arm, int resource) const {
    return at(arm, resource + 1);
  }
  std::span<const double> values() const { return values_; }

 private:
  int num_arms_ = 0;
  int num_resources_ = 0;
  std::vector<double> values_;
};

struct RoundSample {
  int context = 0;
  OutcomeMatrix matrix;
};

// Draws the round-`round` context and outcome matrix from the segment that
// contains `round`. Rounds are 1-based.
RoundSample SampleRound(const InstanceSpec& spec, int round, Rng& rng);
void SampleRoundInto(const InstanceSpec& spec, int round, Rng& rng,
                     RoundSample& out);

// Draws one coordinate from its noise family. `lo`/`hi` is the legal range.
double SampleCoordinate(double mean, const Noise& noise, double lo, double hi,
                        Rng& rng);

}  // namespace cbwlc

#endif  // CBWLC_ENV_H_
