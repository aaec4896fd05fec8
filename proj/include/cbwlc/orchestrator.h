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

// The primal-dual game loop. Each round:
//   1. the dual emits lambda_t,
//   2. the environment draws x_t and the outcome matrix,
//   3. the primal sees (x_t, lambda_t) and plays a_t,
//   4. the primal is paid Lag_t(a_t, lambda_t) and the dual is charged the
//      per-resource payoffs Lag_t(a_t, e_i).
// Learners only ever see reported outcomes (see AlgorithmView).

#ifndef CBWLC_ORCHESTRATOR_H_
#define CBWLC_ORCHESTRATOR_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "cbwlc/env.h"
#include "cbwlc/lagrangian.h"
#include "cbwlc/learners.h"
#include "cbwlc/rng.h"
#include "cbwlc/run_log.h"

namespace cbwlc {

enum class RunMode { kStandard, kHardStop, kZeroViolation };

struct RunConfig {
  RunMode mode = RunMode::kStandard;
  // Used in standard mode; hard_stop forces eta = 1 and zero_violation
  // forces eta = 4 / zeta.
  EtaMode eta_mode = EtaMode::kSlater;
  double zeta = 0.0;
  // Combined regret estimate R for the general eta rule.
  double regret_estimate = 0.0;
  // Budget shrink factor of the zero-violation variant, in (0, zeta / 2].
  double epsilon = 0.0;
  double delta = 0.05;
  std::uint64_t seed = 0;
  // Learner payoff ranges from the instance's consumption support instead of
  // the generic [-1, 1] bound.
  bool support_range = true;
};

// epsilon = 16 T R / (zeta B^2).
double ZeroViolationEpsilon(int horizon, double regret_estimate, double zeta,
                            double budget);

// Interval of realizable true consumptions per resource, over all segments,
// contexts, arms and noise.
ConsumptionSupport InstanceSupport(const InstanceSpec& spec);

// Validates the mode against the instance and derives what the learners see.
// Throws std::invalid_argument when hard_stop meets a covering resource or a
// missing null arm, or when zero_violation gets epsilon outside (0, zeta/2].
AlgorithmView PrepareRun(const InstanceSpec& spec, const RunConfig& config);

// Hedge over resources on the view's payoff range; Fixed-Share with a
// switch hint.
std::unique_ptr<DualAlgorithm> MakeHedgeDual(
    const AlgorithmView& view, std::optional<int> num_switches_hint);
// EXP3.P, or EXP3.S with a switch hint.
std::unique_ptr<PrimalAlgorithm> MakeExp3Primal(
    const AlgorithmView& view, int num_arms, double delta,
    std::optional<int> num_switches_hint);

// Round-by-round driver. Holds no state besides the learners (borrowed), the
// two random streams, the hard-stop bookkeeping and the log, so a loop can
// be restarted at any round from copies of those.
class GameLoop {
 public:
  GameLoop(const InstanceSpec& spec, const AlgorithmView& view,
           PrimalAlgorithm& primal, DualAlgorithm& dual, Rng env_rng,
           Rng alg_rng, bool hard_stop = false, int start_round = 1);

  bool done() const { return next_round_ > spec_.horizon; }
  int next_round() const { return next_round_; }
  // Plays round next_round().
  void Step();
  void RunToEnd() {
    while (!done()) Step();
  }

  const Rng& env_rng() const { return env_rng_; }
  const Rng& alg_rng() const { return alg_rng_; }
  const RunLog& log() const { return log_; }
  RunLog TakeLog() { return std::move(log_); }

 private:
  bool WouldOverrun() const;

  const InstanceSpec& spec_;
  const AlgorithmView& view_;
  PrimalAlgorithm& primal_;
  DualAlgorithm& dual_;
  Rng env_rng_;
  Rng alg_rng_;
  bool hard_stop_;
  bool stopped_ = false;
  int next_round_;
  std::vector<double> consumed_;
  RunLog log_;

  RoundSample sample_;
  std::vector<double> reported_;
  std::vector<double> lambda_;
  std::vector<double> costs_;
  std::vector<double> predicted_;
};

// Environment and algorithm streams of a seeded run.
Rng EnvironmentStream(std::uint64_t seed);
Rng AlgorithmStream(std::uint64_t seed);

// Plays all T rounds. Dispatches on config.mode; `view` must come from
// PrepareRun(spec, config) and the learners must be built from it.
RunLog Run(const InstanceSpec& spec, const AlgorithmView& view,
           PrimalAlgorithm& primal, DualAlgorithm& dual,
           const RunConfig& config);

// Stops for good, switching to the null arm, before the first round whose
// worst-case consumption (1 per packing resource, B/T for time) could push a
// running total past B. stop_round records that round.
RunLog RunHardStop(const InstanceSpec& spec, const AlgorithmView& view,
                   PrimalAlgorithm& primal, DualAlgorithm& dual,
                   const RunConfig& config);

// Runs against budget B(1 - epsilon) with covering consumptions reported
// 2 epsilon B / T lower; the log keeps true consumptions.
RunLog RunZeroViolation(const InstanceSpec& spec, const AlgorithmView& view,
                        PrimalAlgorithm& primal, DualAlgorithm& dual,
                        const RunConfig& config);

}  // namespace cbwlc

#endif  // CBWLC_ORCHESTRATOR_H_
