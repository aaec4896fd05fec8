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

// Experiment runner: JSON configs, seeded replications, result files.
//
// Config layout (JSON):
//
//   {
//     "instance": {...} | "instance_file": "path.json",
//     "algorithm": {
//       "primal": "exp3p" | "exp3s" | "squarecb",
//       "dual": "hedge" | "fixed_share",
//       "switches": S,                      // exp3s / fixed_share
//       "delta": 0.05,                      // exp3p / exp3s
//       "squarecb": {
//         "class": {"kind": "finite", "functions": [...], "share_alpha": 0}
//                | {"kind": "linear", "features": [...], "ridge": 1,
//                   "mode": "vaw" | "ridge"},
//         "gamma": g | "error_bound": U,
//         "normalization": "binary_search" | "closed_form"
//       }
//     },
//     "run": {"mode": ..., "eta_mode": ..., "zeta": ..., "epsilon": ...,
//             "regret_estimate": ..., "delta": ..., "support_range": true},
//     "replications": n, "base_seed": s, "output": {"dir": "out"}
//   }
//
// Instance layout:
//
//   {
//     "horizon": T, "num_arms": K,
//     "contexts": ["x", ...], "arrival_probs": [...],
//     "resources": [{"sign": "packing" | "covering", "budget": B,
//                    "time": false}, ...],
//     "null_arm": k,
//     "segments": [{"start_round": 1, "arrival_probs": [...],
//                   "means": [[[r, c_1, ..., c_d], ...per arm], ...per context],
//                   "noise": <noise> | {"reward": <noise>,
//                                       "consumption": <noise>}}]
//   }
//
// with <noise> one of "deterministic", "bernoulli" or
// {"kind": "gaussian", "stddev": s}. Finite-class functions are given per
// non-time outcome coordinate (reward first) as lists of [context][arm]
// tables in the instance's own units.

#ifndef CBWLC_EXPERIMENT_H_
#define CBWLC_EXPERIMENT_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbwlc/benchmark.h"
#include "cbwlc/env.h"
#include "cbwlc/learners.h"
#include "cbwlc/orchestrator.h"
#include "cbwlc/primal_squarecb.h"
#include "cbwlc/run_log.h"

namespace cbwlc {

// All violations found in a config, each prefixed with its field path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

enum class PrimalKind { kExp3P, kExp3S, kSquareCb };
enum class DualKind { kHedge, kFixedShare };

struct RegressionClassConfig {
  enum class Kind { kFinite, kLinear };
  Kind kind = Kind::kFinite;
  // kFinite: functions[coord][f] is a context x arm table, coordinates in
  // instance order without the time resource, rescaled to the common budget.
  std::vector<std::vector<FunctionTable>> functions;
  double share_alpha = 0.0;
  // kLinear: one feature vector per (context, arm); empty means one-hot.
  FeatureTable features;
  double ridge = 1.0;
  OnlineLeastSquares::Mode mode = OnlineLeastSquares::Mode::kVaw;
};

struct SquareCbConfig {
  RegressionClassConfig regression_class;
  std::optional<double> gamma;
  std::optional<double> error_bound;
  IgwConfig::Normalization normalization =
      IgwConfig::Normalization::kBinarySearch;
};

struct AlgorithmConfig {
  PrimalKind primal = PrimalKind::kExp3P;
  DualKind dual = DualKind::kHedge;
  std::optional<int> switches;
  double delta = 0.05;
  std::optional<SquareCbConfig> squarecb;
};

struct ExperimentConfig {
  // Normalized instance (common budget, time resource present).
  InstanceSpec instance;
  AlgorithmConfig algorithm;
  RunConfig run;
  int replications = 1;
  std::uint64_t base_seed = 0;
  std::string output_dir = "out";
  // The parsed document, echoed into summary.json.
  std::string source_json;
};

// Throws ConfigError listing every violation (an unreadable file is one).
ExperimentConfig LoadConfig(const std::string& path);
ExperimentConfig ParseConfig(const std::string& json_text,
                             const std::string& base_dir = ".");

// Regression error bound used for gamma when none is configured: for a
// finite class ln(|F| (d + 1) / delta); linear classes need an explicit one.
double DefaultErrorBound(const ExperimentConfig& config);

// Fresh learners for one replication.
std::unique_ptr<PrimalAlgorithm> MakePrimal(const ExperimentConfig& config,
                                            const AlgorithmView& view);
std::unique_ptr<DualAlgorithm> MakeDual(const ExperimentConfig& config,
                                        const AlgorithmView& view);

struct ReplicationResult {
  int replication = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  MetricsReport metrics;
  // Kept only when a trace is requested.
  std::optional<RunLog> log;
};

struct MetricSummary {
  std::string name;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double iqr() const { return q75 - q25; }
};

struct ExperimentResult {
  BenchmarkValues bench;
  std::vector<ReplicationResult> rows;  // replication order
  std::vector<MetricSummary> summary;   // over successful rows
  int failures() const;
};

struct RunOptions {
  int parallel = 1;
  bool keep_logs = false;
};

// Replication r uses seed base_seed + r. Replications run on up to
// `parallel` threads; a failing replication records its error and does not
// stop the others.
ExperimentResult RunExperiment(const ExperimentConfig& config,
                               const RunOptions& options = {});

// Column names of runs.csv for d resources.
std::vector<std::string> RunsCsvHeader(int num_resources);
// The numeric row for one replication, in header order.
std::vector<double> RunsCsvValues(const ReplicationResult& row);
std::string FormatNumber(double value);

// Linear-interpolation quantile of an unsorted sample.
double Quantile(std::vector<double> values, double q);

// Writes runs.csv and summary.json into `dir` (created if needed) and, when
// `trace` is set, trace.csv.gz. Throws std::runtime_error on I/O failure.
void EmitResults(const ExperimentConfig& config, const ExperimentResult& result,
                 const std::string& dir, bool trace);

}  // namespace cbwlc

#endif  // CBWLC_EXPERIMENT_H_
