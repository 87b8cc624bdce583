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

#ifndef MONOSDE_CONFIG_H_
#define MONOSDE_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "monosde/linalg.h"
#include "monosde/operators.h"
#include "monosde/oracle.h"
#include "monosde/sde.h"
#include "monosde/solvers.h"

namespace monosde {

struct ProblemConfig {
  std::string kind = "bilinear";  // bilinear, rotation, identity-strong, zero
  int n = 10;
  double kappa = 1.0;     // identity-strong
  double rotation = 1.0;  // identity-strong
  bool operator==(const ProblemConfig&) const = default;
};

struct InitialPointConfig {
  std::string mode = "zeros";  // zeros, ones, explicit
  std::vector<double> values;  // explicit only
  bool operator==(const InitialPointConfig&) const = default;
};

struct StepConfig {
  double gamma = 0.0;
  bool operator==(const StepConfig&) const = default;
};

struct SolverSection {
  std::int64_t iterations = 1000;
  std::int64_t stride = 1;
  std::vector<std::int64_t> record_at;
  std::string gamma_units = "per_L";  // per_L: gamma = value / L
  StepConfig ogda{0.125};
  StepConfig eg{0.5};
  StepConfig forward{0.1};
  std::optional<std::vector<double>> ogda_x1;
  bool operator==(const SolverSection&) const = default;
};

struct ScheduleConfig {
  std::string kind = "constant";  // constant, rational-decay
  double up = 1.0;
  double low = 1.0;
  bool operator==(const ScheduleConfig&) const = default;
};

struct DiffusionConfig {
  double sigma_star = 0.0;
  std::string envelope = "constant";  // constant, power-decay
  double power = 1.0;
  double coupling = 0.0;
  double coupling_cap = 1.0;
  bool operator==(const DiffusionConfig&) const = default;
};

struct SdeSection {
  double horizon = 10.0;
  double step = 1e-3;
  std::int64_t stride = 10;
  std::vector<std::int64_t> record_at;
  ScheduleConfig mu;
  ScheduleConfig gamma;
  DiffusionConfig diffusion;
  double lambda = 0.5;
  bool operator==(const SdeSection&) const = default;
};

struct NoiseConfig {
  std::string kind = "none";
  double sigma_star = 0.0;
  double decay_std = 0.0;
  bool operator==(const NoiseConfig&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ProblemConfig problem;
  std::vector<std::string> methods = {"ogda", "eg"};
  InitialPointConfig initial_point;
  SolverSection solver;
  SdeSection sde;
  NoiseConfig noise;
  std::int64_t replicas = 1;
  std::uint64_t master_seed = 0;
  std::string output_dir = "out";
  bool write_traces = false;
  bool operator==(const ExperimentConfig&) const = default;
};

// Parsing rejects unknown keys and wrong types with a ConfigError naming the
// offending field. Missing keys take the defaults above.
ExperimentConfig ConfigFromJson(const nlohmann::json& j);
nlohmann::json ConfigToJson(const ExperimentConfig& cfg);
ExperimentConfig LoadConfig(const std::string& path);

// The operator, starting point and reference zero a config describes. For
// the zero operator every point is a zero and x* is taken to be x0.
struct ResolvedProblem {
  std::string description;
  OperatorSpec op;
  Vector x0;
  Vector x_star;
  std::optional<BilinearProblem> bilinear;
};

ResolvedProblem ResolveProblem(const ExperimentConfig& cfg);
NoiseModel ResolveNoise(const NoiseConfig& noise);
ParamSchedule ResolveSchedule(const SdeSection& sde);
DiffusionSpec ResolveDiffusion(const DiffusionConfig& diffusion, int n);
// Absolute step size for a discrete method.
double ResolveGamma(const SolverSection& solver, Method method,
                    double lipschitz);
// Method names: ogda, eg, forward, sde.
bool IsDiscreteMethod(const std::string& name);
Method ParseMethod(const std::string& name);

// Checks every parameter against the module preconditions before any run
// starts. Throws ConfigError with the field path.
void ValidateConfig(const ExperimentConfig& cfg);

// Every built-in problem with a short description.
std::vector<std::pair<std::string, std::string>> ListProblems();

}  // namespace monosde

#endif  // MONOSDE_CONFIG_H_
