// Copyright 2026 The monosde Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MONOSDE_RUNNER_H_
#define MONOSDE_RUNNER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "monosde/config.h"
#include "monosde/metrics.h"

namespace monosde {

struct RunOptions {
  int threads = 1;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed_override;
  bool write_files = true;
};

struct CellFailure {
  std::string method;
  std::int64_t replica = 0;
  std::string message;
  std::optional<long> step;  // divergence step when known
};

struct MethodResult {
  std::string method;
  double gamma = 0.0;  // discrete methods: absolute step size
  std::int64_t replicas_ok = 0;
  EnsembleSummary summary;  // over the replicas that finished
  // OGDA: per-replica ||x1 - x*||^2 and ||x1 - x0||^2 (x1 may be random).
  std::vector<double> x1_dist_sq;
  std::vector<double> x1_x0_sq;
  // SDE: step actually used.
  double sde_step = 0.0;
  std::vector<std::string> warnings;
  std::string csv_path;
};

struct ExperimentResult {
  ExperimentConfig config;  // with overrides applied
  ResolvedProblem problem;
  std::vector<MethodResult> methods;
  std::vector<CellFailure> failures;
  double wall_seconds = 0.0;
  nlohmann::json manifest;
};

// Validates the config (throws ConfigError), then runs every method x
// replica cell on a pool of `threads` workers. Replica r of every method uses
// SeedSpec{master_seed, r, .}. Results are collected by replica index, so the
// output does not depend on the thread count. Divergent cells are recorded as
// failures and left out of the ensemble.
ExperimentResult RunExperiment(const ExperimentConfig& cfg,
                               const RunOptions& options);

// 0 when every cell finished, 1 otherwise.
int ExitCode(const ExperimentResult& result);

}  // namespace monosde

#endif  // MONOSDE_RUNNER_H_
