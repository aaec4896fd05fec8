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

#include "cbwlc/env.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cbwlc {
namespace {

constexpr double kProbTolerance = 1e-12;

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

void CheckDistribution(std::span<const double> probs, int expected_size,
                       const std::string& what) {
  if (static_cast<int>(probs.size()) != expected_size) {
    std::ostringstream os;
    os << what << ": expected " << expected_size << " probabilities, got "
       << probs.size();
    throw InvalidInstance(os.str());
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw InvalidInstance(what + ": negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > kProbTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": probabilities sum to " << total << ", not 1";
    throw InvalidInstance(os.str());
  }
}

}  // namespace

int ConstraintSpec::time_index() const {
  for (int i = 0; i < static_cast<int>(is_time.size()); ++i) {
    if (is_time[i]) return i;
  }
  return -1;
}

OutcomeModel::OutcomeModel(int num_contexts, int num_arms, int num_resources)
    : num_contexts_(num_contexts),
      num_arms_(num_arms),
      num_resources_(num_resources),
      means_(static_cast<size_t>(num_contexts) * num_arms *
                 (num_resources + 1),
             0.0),
      noise_(means_.size()) {}

void OutcomeModel::SetAllNoise(Noise noise) {
  std::fill(noise_.begin(), noise_.end(), noise);
}

OutcomeModel OutcomeModel::WithAppendedResource(double value) const {
  OutcomeModel out(num_contexts_, num_arms_, num_resources_ + 1);
  for (int x = 0; x < num_contexts_; ++x) {
    for (int a = 0; a < num_arms_; ++a) {
      for (int j = 0; j < num_coords(); ++j) {
        out.set_mean(x, a, j, mean(x, a, j));
        out.set_noise(x, a, j, noise(x, a, j));
      }
      out.set_mean(x, a, num_resources_ + 1, value);
      out.set_noise(x, a, num_resources_ + 1, Noise{});
    }
  }
  return out;
}

double OutcomeModel::MaxClampProbability() const {
  double worst = 0.0;
  for (int x = 0; x < num_contexts_; ++x) {
    for (int a = 0; a < num_arms_; ++a) {
      for (int j = 0; j < num_coords(); ++j) {
        const Noise& n = noise(x, a, j);
        if (n.kind != NoiseKind::kGaussian || n.stddev <= 0.0) continue;
        const double lo = j == 0 ? 0.0 : -1.0;
        const double m = mean(x, a, j);
        const double p = NormalCdf((lo - m) / n.stddev) +
                         (1.0 - NormalCdf((1.0 - m) / n.stddev));
        worst = std::max(worst, p);
      }
    }
  }
  return worst;
}

int InstanceSpec::SegmentIndex(int round) const {
  auto it = std::upper_bound(
      segments.begin(), segments.end(), round,
      [](int r, const Segment& s) { return r < s.start_round; });
  return static_cast<int>(it - segments.begin()) - 1;
}

std::span<const double> InstanceSpec::Arrivals(int segment) const {
  const Segment& s = segments.at(segment);
  return s.arrival_probs.empty() ? std::span<const double>(arrival_probs)
                                 : std::span<const double>(s.arrival_probs);
}

int InstanceSpec::SegmentLength(int segment) const {
  const int end = segment + 1 < static_cast<int>(segments.size())
                      ? segments[segment + 1].start_round
                      : horizon + 1;
  return end - segments.at(segment).start_round;
}

std::vector<int> InstanceSpec::SwitchRounds() const {
  std::vector<int> out;
  for (size_t s = 1; s < segments.size(); ++s) {
    out.push_back(segments[s].start_round);
  }
  return out;
}

void ValidateInstance(const InstanceSpec& spec) {
  if (spec.horizon < 1) throw InvalidInstance("horizon must be positive");
  if (spec.num_arms < 2) throw InvalidInstance("num_arms must be at least 2");
  const ConstraintSpec& c = spec.constraints;
  const int d = c.num_resources();
  if (d < 1) throw InvalidInstance("at least one resource is required");
  if (static_cast<int>(c.budgets.size()) != d ||
      static_cast<int>(c.is_time.size()) != d) {
    throw InvalidInstance("constraint arrays have inconsistent lengths");
  }
  int time_count = 0;
  for (int i = 0; i < d; ++i) {
    if (c.signs[i] != 1 && c.signs[i] != -1) {
      throw InvalidInstance("resource " + std::to_string(i) +
                            ": sign must be +1 or -1");
    }
    if (!(c.budgets[i] > 0.0) || c.budgets[i] > spec.horizon) {
      throw InvalidInstance("resource " + std::to_string(i) +
                            ": budget must lie in (0, T]");
    }
    if (c.is_time[i]) {
      ++time_count;
      if (c.signs[i] != 1) {
        throw InvalidInstance("time resource must have sign +1");
      }
    }
  }
  if (time_count > 1) {
    throw InvalidInstance("more than one resource flagged as time resource");
  }
  if (spec.num_contexts() < 1) {
    throw InvalidInstance("at least one context is required");
  }
  CheckDistribution(spec.arrival_probs, spec.num_contexts(), "arrival_probs");
  if (spec.segments.empty()) {
    throw InvalidInstance("at least one segment is required");
  }
  if (spec.segments.front().start_round != 1) {
    throw InvalidInstance("first segment must start at round 1");
  }
  for (size_t s = 0; s < spec.segments.size(); ++s) {
    const Segment& seg = spec.segments[s];
    const std::string where = "segment " + std::to_string(s);
    if (s > 0 && seg.start_round <= spec.segments[s - 1].start_round) {
      throw InvalidInstance(where + ": start rounds must strictly increase");
    }
    if (seg.start_round > spec.horizon) {
      throw InvalidInstance(where + ": starts after the horizon");
    }
    if (!seg.arrival_probs.empty()) {
      CheckDistribution(seg.arrival_probs, spec.num_contexts(),
                        where + " arrival_probs");
    }
    const OutcomeModel& m = seg.model;
    if (m.num_contexts() != spec.num_contexts() ||
        m.num_arms() != spec.num_arms || m.num_resources() != d) {
      throw InvalidInstance(where + ": outcome model has wrong dimensions");
    }
    for (int x = 0; x < m.num_contexts(); ++x) {
      for (int a = 0; a < m.num_arms(); ++a) {
        for (int j = 0; j < m.num_coords(); ++j) {
          const double lo = j == 0 ? 0.0 : -1.0;
          const double v = m.mean(x, a, j);
          if (!(v >= lo && v <= 1.0)) {
            std::ostringstream os;
            os << where << ": mean of coordinate " << j << " at (context " << x
               << ", arm " << a << ") = " << v << " is outside [" << lo
               << ", 1]";
            throw InvalidInstance(os.str());
          }
          if (m.noise(x, a, j).stddev < 0.0) {
            throw InvalidInstance(where + ": negative noise stddev");
          }
        }
      }
    }
  }
  if (spec.null_arm &&
      (*spec.null_arm < 0 || *spec.null_arm >= spec.num_arms)) {
    throw InvalidInstance("null_arm out of range");
  }
}

InstanceSpec NormalizeInstance(const InstanceSpec& raw) {
  const ConstraintSpec& c = raw.constraints;
  for (int i = 0; i < c.num_resources(); ++i) {
    if (!(c.budgets[i] > 0.0)) {
      throw InvalidInstance("resource " + std::to_string(i) +
                            ": budget must be positive");
    }
  }
  ValidateInstance(raw);

  const double b = *std::min_element(c.budgets.begin(), c.budgets.end());
  const double rate = b / raw.horizon;
  InstanceSpec out = raw;
  for (Segment& seg : out.segments) {
    OutcomeModel& m = seg.model;
    for (int i = 0; i < c.num_resources(); ++i) {
      const double scale = c.is_time[i] ? 0.0 : b / c.budgets[i];
      for (int x = 0; x < m.num_contexts(); ++x) {
        for (int a = 0; a < m.num_arms(); ++a) {
          if (c.is_time[i]) {
            m.set_mean(x, a, i + 1, rate);
            m.set_noise(x, a, i + 1, Noise{});
            continue;
          }
          const double v = m.consumption(x, a, i) * scale;
          if (v < -1.0 || v > 1.0) {
            throw InvalidInstance("resource " + std::to_string(i) +
                                  ": rescaled consumption leaves [-1, 1]");
          }
          m.set_mean(x, a, i + 1, v);
          Noise n = m.noise(x, a, i + 1);
          n.stddev *= scale;
          m.set_noise(x, a, i + 1, n);
        }
      }
    }
  }
  std::fill(out.constraints.budgets.begin(), out.constraints.budgets.end(), b);
  if (c.time_index() < 0) {
    for (Segment& seg : out.segments) {
      seg.model = seg.model.WithAppendedResource(rate);
    }
    out.constraints.signs.push_back(1);
    out.constraints.budgets.push_back(b);
    out.constraints.is_time.push_back(true);
  }
  ValidateInstance(out);
  return out;
}

double SampleCoordinate(double mean, const Noise& noise, double lo, double hi,
                        Rng& rng) {
  switch (noise.kind) {
    case NoiseKind::kDeterministic:
      return mean;
    case NoiseKind::kBernoulli:
      if (mean >= 0.0) return rng.Bernoulli(mean) ? 1.0 : 0.0;
      return rng.Bernoulli(-mean) ? -1.0 : 0.0;
    case NoiseKind::kGaussian: {
      const double v = mean + noise.stddev * rng.Normal();
      return std::clamp(v, lo, hi);
    }
  }
  return mean;
}

void SampleRoundInto(const InstanceSpec& spec, int round, Rng& rng,
                     RoundSample& out) {
  const int seg_index = spec.SegmentIndex(round);
  const Segment& seg = spec.segments[seg_index];
  const OutcomeModel& m = seg.model;
  out.context = rng.Categorical(spec.Arrivals(seg_index));
  if (out.matrix.num_arms() != m.num_arms() ||
      out.matrix.num_resources() != m.num_resources()) {
    out.matrix = OutcomeMatrix(m.num_arms(), m.num_resources());
  }
  for (int a = 0; a < m.num_arms(); ++a) {
    for (int j = 0; j < m.num_coords(); ++j) {
      const double lo = j == 0 ? 0.0 : -1.0;
      out.matrix.at(a, j) = SampleCoordinate(
          m.mean(out.context, a, j), m.noise(out.context, a, j), lo, 1.0, rng);
    }
  }
}

RoundSample SampleRound(const InstanceSpec& spec, int round, Rng& rng) {
  RoundSample out;
  SampleRoundInto(spec, round, rng, out);
  return out;
}

}  // namespace cbwlc
