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

// cbwlc run <config.json> [--out DIR] [--trace] [--parallel N]
// cbwlc bench-lp <config.json>
// cbwlc validate <config.json>
//
// Exit codes: 0 success, 2 config error, 3 runtime error.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "cbwlc/benchmark.h"
#include "cbwlc/experiment.h"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

int Run(const std::string& path, const std::string& out_flag, bool trace,
        int parallel) {
  const cbwlc::ExperimentConfig config = cbwlc::LoadConfig(path);
  cbwlc::RunOptions options;
  options.parallel = parallel;
  options.keep_logs = trace;
  const cbwlc::ExperimentResult result = cbwlc::RunExperiment(config, options);
  const std::string dir = out_flag.empty() ? config.output_dir : out_flag;
  cbwlc::EmitResults(config, result, dir, trace);
  for (const cbwlc::MetricSummary& m : result.summary) {
    std::printf("%-14s median %s  iqr %s\n", m.name.c_str(),
                cbwlc::FormatNumber(m.median).c_str(),
                cbwlc::FormatNumber(m.iqr()).c_str());
  }
  for (const cbwlc::ReplicationResult& row : result.rows) {
    if (!row.ok) {
      std::fprintf(stderr, "replication %d (seed %llu) failed: %s\n",
                   row.replication, static_cast<unsigned long long>(row.seed),
                   row.error.c_str());
    }
  }
  return result.failures() == 0 ? 0 : kRuntimeError;
}

int BenchLp(const std::string& path) {
  const cbwlc::ExperimentConfig config = cbwlc::LoadConfig(path);
  const cbwlc::BenchmarkValues b = cbwlc::ComputeBenchmarks(config.instance);
  std::printf("OPT_LP  %s\n", cbwlc::FormatNumber(b.opt_lp).c_str());
  std::printf("zeta    %s\n", cbwlc::FormatNumber(b.zeta).c_str());
  std::printf("OPT_pac %s\n", cbwlc::FormatNumber(b.opt_pac).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primal-dual contextual bandits with linear constraints"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool trace = false;
  int parallel = 1;

  CLI::App* run = app.add_subcommand("run", "Run all replications of a config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides the config)");
  run->add_flag("--trace", trace, "Also write trace.csv.gz");
  run->add_option("--parallel", parallel, "Replications run concurrently")
      ->check(CLI::PositiveNumber);

  CLI::App* bench = app.add_subcommand("bench-lp", "Print OPT_LP, zeta, OPT_pac");
  bench->add_option("config", config_path, "Experiment config (JSON)")->required();

  CLI::App* validate = app.add_subcommand("validate", "Check a config");
  validate->add_option("config", config_path, "Experiment config (JSON)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) return Run(config_path, out_dir, trace, parallel);
    if (*bench) return BenchLp(config_path);
    cbwlc::LoadConfig(config_path);
    std::printf("ok\n");
    return 0;
  } catch (const cbwlc::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
}
