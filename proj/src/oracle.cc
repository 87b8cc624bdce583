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

#include "monosde/oracle.h"

#include <cmath>

#include "monosde/error.h"

namespace monosde {

double NoiseModel::VarianceBound() const {
  switch (kind) {
    case Kind::kNone:
      return 0.0;
    case Kind::kIidGaussian:
      return sigma_star;
    case Kind::kDecayingDirection:
      return decay_std;  // attained at k = 1
  }
  return 0.0;
}

const char* NoiseKindName(NoiseModel::Kind kind) {
  switch (kind) {
    case NoiseModel::Kind::kNone:
      return "none";
    case NoiseModel::Kind::kIidGaussian:
      return "iid-gaussian";
    case NoiseModel::Kind::kDecayingDirection:
      return "decaying-direction";
  }
  return "?";
}

NoiseModel::Kind ParseNoiseKind(const std::string& name) {
  if (name == "none") return NoiseModel::Kind::kNone;
  if (name == "iid-gaussian") return NoiseModel::Kind::kIidGaussian;
  if (name == "decaying-direction" || name == "decaying") {
    return NoiseModel::Kind::kDecayingDirection;
  }
  throw ConfigError("noise.kind", "unknown noise kind '" + name +
                                      "' (expected none, iid-gaussian or "
                                      "decaying-direction)");
}

NoisyOracle::NoisyOracle(const OperatorSpec& op, NoiseModel noise,
                         SeedSpec seed)
    : op_(&op), noise_(noise), rng_(seed) {
  if (!(noise_.sigma_star >= 0.0) || !(noise_.decay_std >= 0.0)) {
    throw ParameterError("noise parameters must be >= 0");
  }
}

void NoisyOracle::NoiseInto(std::uint64_t k, std::uint64_t draw,
                            Vector& out) const {
  const Eigen::Index n = op_->dimension();
  out.resize(n);
  switch (noise_.kind) {
    case NoiseModel::Kind::kNone:
      out.setZero();
      return;
    case NoiseModel::Kind::kIidGaussian: {
      rng_.FillNormal(draw, std::span<double>(out.data(), out.size()));
      out *= noise_.sigma_star / std::sqrt(static_cast<double>(n));
      return;
    }
    case NoiseModel::Kind::kDecayingDirection: {
      if (k == 0) {
        throw ParameterError(
            "decaying-direction noise is indexed from k = 1 (it divides by k)");
      }
      const double a = noise_.decay_std * rng_.Normal(draw, 0);
      out.setConstant(a / (static_cast<double>(k) *
                           std::sqrt(static_cast<double>(n))));
      return;
    }
  }
}

void NoisyOracle::EvalInto(const Vector& x, std::uint64_t k,
                           Vector& out) const {
  if (x.size() != op_->dimension()) {
    throw DimensionError("oracle argument", op_->dimension(), x.size());
  }
  if (noise_.kind == NoiseModel::Kind::kNone) {
    op_->EvalInto(x, out);
    return;
  }
  Vector w;
  NoiseInto(k, k, w);
  op_->EvalInto(x, out);
  out += w;
}

Vector NoisyOracle::Eval(const Vector& x, std::uint64_t k) const {
  Vector out(op_->dimension());
  EvalInto(x, k, out);
  return out;
}

Vector NoisyEval(const OperatorSpec& op, const Vector& x,
                 const NoiseModel& noise, const SeedSpec& seed,
                 std::uint64_t k) {
  return NoisyOracle(op, noise, seed).Eval(x, k);
}

double VarianceEstimate(const OperatorSpec& op, const Vector& x,
                        const NoiseModel& noise, std::uint64_t samples,
                        const SeedSpec& seed, std::uint64_t k) {
  if (samples < 2) throw ParameterError("variance estimate needs >= 2 samples");
  if (x.size() != op.dimension()) {
    throw DimensionError("variance estimate argument", op.dimension(),
                         x.size());
  }
  const NoisyOracle oracle(op, noise, seed);
  Vector w;
  double sum = 0.0;
  double comp = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    oracle.NoiseInto(k, i, w);
    const double y = w.squaredNorm() - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(samples);
}

}  // namespace monosde
