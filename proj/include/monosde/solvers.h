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

#ifndef MONOSDE_SOLVERS_H_
#define MONOSDE_SOLVERS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monosde/linalg.h"
#include "monosde/metrics.h"
#include "monosde/operators.h"
#include "monosde/oracle.h"
#include "monosde/random.h"

namespace monosde {

enum class Method { kOgda, kEg, kForward };
const char* MethodName(Method m);

struct SolverConfig {
  Method method = Method::kOgda;
  double gamma = 0.0;
  // Rows are produced for iterates x^0 .. x^iterations.
  std::int64_t iterations = 1;
  Vector x0;
  // OGDA only. Defaults to one forward step x0 - gamma M(x0, xi_0).
  std::optional<Vector> x1;
  std::int64_t stride = 1;
  std::vector<std::int64_t> record_at;
  bool keep_iterates = false;
  bool keep_oracle_draws = false;
  // Divergence is reported once ||x^k|| > divergence_factor * (1 + ||x^0||).
  double divergence_factor = 1e12;
};

struct IterateTrace {
  Method method = Method::kOgda;
  double gamma = 0.0;
  RunRecord metrics;
  // Stride-recorded iterates, only with keep_iterates.
  std::vector<std::int64_t> iterate_index;
  std::vector<Vector> x_iterates;
  std::vector<Vector> y_iterates;  // EG only
  // Every stochastic evaluation in call order, only with keep_oracle_draws.
  // OGDA: M(x^0, xi_0), M(x^1, xi_1), ...; EG: M(x^0, xi_0), M(y^0, eta_0),
  // M(x^1, xi_1), ...
  std::vector<Vector> oracle_draws;
  Vector x0;
  Vector x1;  // OGDA only: the x^1 actually used
  Vector final_x;
  // Streaming means of x^k over the squared-norm window and (EG) of y^k.
  Vector ergodic_x;
  Vector ergodic_y;
  std::vector<std::string> warnings;
};

// Stochastic OGDA:
//   x^{k+1} = x^k - 2 gamma M(x^k, xi_k) + gamma M(x^{k-1}, xi_{k-1}),  k >= 1.
// One fresh oracle call per iteration; the k-1 evaluation is reused. Metrics
// use the exact operator: the squared-norm average runs over k = 1.., the gap
// average over k = 2.., matching the bound windows.
IterateTrace RunOgda(const OperatorSpec& op, const NoiseModel& noise,
                     const SolverConfig& cfg, const SeedSpec& seed,
                     const Vector& x_star);

// Stochastic extragradient:
//   y^k = x^k - gamma M(x^k, xi_k),  x^{k+1} = x^k - gamma M(y^k, eta_k).
// xi and eta come from independent streams. The gap column holds
// <M(y^k), y^k - x*>; averages run over k = 0...
IterateTrace RunEg(const OperatorSpec& op, const NoiseModel& noise,
                   const SolverConfig& cfg, const SeedSpec& seed,
                   const Vector& x_star);

// Plain forward iteration x^{k+1} = x^k - gamma M(x^k, xi_k).
IterateTrace RunForward(const OperatorSpec& op, const NoiseModel& noise,
                        const SolverConfig& cfg, const SeedSpec& seed,
                        const Vector& x_star);

IterateTrace RunMethod(const OperatorSpec& op, const NoiseModel& noise,
                       const SolverConfig& cfg, const SeedSpec& seed,
                       const Vector& x_star);

enum class BoundKind { kSqNorm, kGap };

// Right-hand sides of the ergodic bounds in expectation for stochastic OGDA
// (requires gamma < 1/(4L)). Squared distances are passed directly so that
// callers with random x^1 can average them.
double OgdaBound(std::int64_t k, double gamma, double lipschitz,
                 double sigma_star, double x1_dist_sq, double x1_x0_sq,
                 BoundKind which);
double OgdaBound(std::int64_t k, double gamma, double lipschitz,
                 double sigma_star, const Vector& x0, const Vector& x1,
                 const Vector& x_star, BoundKind which);

// Same for stochastic EG (requires gamma < 1/(sqrt(3) L)).
double EgBound(std::int64_t k, double gamma, double lipschitz,
               double sigma_star, double x0_dist_sq, BoundKind which);
double EgBound(std::int64_t k, double gamma, double lipschitz,
               double sigma_star, const Vector& x0, const Vector& x_star,
               BoundKind which);

// Step-size regions.
double OgdaBoundStepLimit(double lipschitz);   // 1/(4L)
double OgdaStableStepLimit(double lipschitz);  // 1/(2L)
double EgBoundStepLimit(double lipschitz);     // 1/(sqrt(3) L)

}  // namespace monosde

#endif  // MONOSDE_SOLVERS_H_
