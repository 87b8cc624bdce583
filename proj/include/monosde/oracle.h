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

#ifndef MONOSDE_ORACLE_H_
#define MONOSDE_ORACLE_H_

#include <cstdint>
#include <string>

#include "monosde/linalg.h"
#include "monosde/operators.h"
#include "monosde/random.h"

namespace monosde {

struct NoiseModel {
  enum class Kind { kNone, kIidGaussian, kDecayingDirection };

  Kind kind = Kind::kNone;
  // iid-gaussian: W = sigma_star / sqrt(n) * g, so E||W||^2 = sigma_star^2.
  double sigma_star = 0.0;
  // decaying-direction: W = a / (k sqrt(n)) * (1, ..., 1), a ~ N(0, decay_std^2).
  double decay_std = 0.0;

  static NoiseModel None() { return {}; }
  static NoiseModel IidGaussian(double sigma_star) {
    return {Kind::kIidGaussian, sigma_star, 0.0};
  }
  static NoiseModel DecayingDirection(double decay_std) {
    return {Kind::kDecayingDirection, 0.0, decay_std};
  }

  // Smallest s with E||W_k||^2 <= s^2 for every admissible k (k >= 1 for the
  // decaying model). This is the sigma_* that enters the bound formulas.
  double VarianceBound() const;
};

const char* NoiseKindName(NoiseModel::Kind kind);
NoiseModel::Kind ParseNoiseKind(const std::string& name);

// Unbiased stochastic estimator M(x, xi) = M(x) + W. Evaluation number k
// selects the counter of the random stream; the decaying model also divides
// by k, so k must be >= 1 there.
class NoisyOracle {
 public:
  NoisyOracle(const OperatorSpec& op, NoiseModel noise, SeedSpec seed);

  const OperatorSpec& op() const { return *op_; }
  const NoiseModel& noise() const { return noise_; }

  void EvalInto(const Vector& x, std::uint64_t k, Vector& out) const;
  Vector Eval(const Vector& x, std::uint64_t k) const;

  // W for evaluation k, drawing from counter `draw`. Solvers use draw == k;
  // the variance estimator varies `draw` at fixed k.
  void NoiseInto(std::uint64_t k, std::uint64_t draw, Vector& out) const;

 private:
  const OperatorSpec* op_;
  NoiseModel noise_;
  CounterRng rng_;
};

Vector NoisyEval(const OperatorSpec& op, const Vector& x,
                 const NoiseModel& noise, const SeedSpec& seed,
                 std::uint64_t k);

// Sample mean of ||M(x, xi) - M(x)||^2 over `samples` independent draws at
// evaluation number k. M(x) is known exactly, so the plain mean is unbiased.
double VarianceEstimate(const OperatorSpec& op, const Vector& x,
                        const NoiseModel& noise, std::uint64_t samples,
                        const SeedSpec& seed, std::uint64_t k = 1);

}  // namespace monosde

#endif  // MONOSDE_ORACLE_H_
