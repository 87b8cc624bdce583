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

#include "monosde/solvers.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "monosde/error.h"

namespace monosde {
namespace {

double Inverse(double v) {
  return v > 0.0 ? 1.0 / v : std::numeric_limits<double>::infinity();
}

void ValidateCommon(const OperatorSpec& op, const SolverConfig& cfg,
                    const Vector& x_star) {
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) {
    throw ParameterError("step size gamma must be positive, got " +
                         std::to_string(cfg.gamma));
  }
  if (cfg.iterations < 1) throw ParameterError("iterations must be >= 1");
  if (cfg.x0.size() != op.dimension()) {
    throw DimensionError("initial point x0", op.dimension(), cfg.x0.size());
  }
  if (x_star.size() != op.dimension()) {
    throw DimensionError("reference zero x*", op.dimension(), x_star.size());
  }
}

// Holds the per-run measurement state shared by all methods.
class Recorder {
 public:
  Recorder(const OperatorSpec& op, const SolverConfig& cfg,
           const Vector& x_star, std::int64_t sq_start, std::int64_t gap_start,
           IterateTrace& trace)
      : op_(op),
        cfg_(cfg),
        x_star_(x_star),
        sq_start_(sq_start),
        tracker_(sq_start, gap_start),
        plan_(cfg.stride, cfg.iterations, cfg.record_at),
        trace_(trace),
        ergodic_x_(op.dimension()),
        ergodic_y_(op.dimension()),
        mx_(op.dimension()),
        my_(op.dimension()),
        limit_(cfg.divergence_factor * (1.0 + cfg.x0.norm())) {
    trace_.metrics.Reserve(static_cast<std::size_t>(
        cfg.iterations / cfg.stride + 2 + cfg.record_at.size()));
  }

  void CheckFinite(const Vector& x, std::int64_t k) const {
    const double norm = x.norm();
    if (!std::isfinite(norm)) throw DivergenceError("non-finite iterate", k);
    if (norm > limit_) {
      std::ostringstream os;
      os << "iterate norm " << norm << " exceeded divergence radius " << limit_;
      throw DivergenceError(os.str(), k);
    }
  }

  // Measures x^k (and y^k for EG, whose gap replaces the x gap).
  void Observe(std::int64_t k, const Vector& x, const Vector* y) {
    CheckFinite(x, k);
    op_.EvalInto(x, mx_);
    const double norm_sq = mx_.squaredNorm();
    const Vector dx = x - x_star_;
    double gap = mx_.dot(dx);
    if (y != nullptr) {
      op_.EvalInto(*y, my_);
      gap = my_.dot(*y - x_star_);
      ergodic_y_.Add(*y);
    }
    tracker_.Add(k, norm_sq, gap);
    if (k >= sq_start_) ergodic_x_.Add(x);
    if (plan_.ShouldRecord(k)) {
      trace_.metrics.Append(
          static_cast<double>(k),
          {norm_sq, gap, dx.squaredNorm(), tracker_.ErgodicNormMSq(),
           tracker_.ErgodicGap(), tracker_.MinNormMSq()});
      if (cfg_.keep_iterates) {
        trace_.iterate_index.push_back(k);
        trace_.x_iterates.push_back(x);
        if (y != nullptr) trace_.y_iterates.push_back(*y);
      }
    }
  }

  void Finish(const Vector& x) {
    trace_.final_x = x;
    trace_.ergodic_x = ergodic_x_.Mean();
    if (ergodic_y_.count() > 0) trace_.ergodic_y = ergodic_y_.Mean();
  }

 private:
  const OperatorSpec& op_;
  const SolverConfig& cfg_;
  const Vector& x_star_;
  std::int64_t sq_start_;
  ErgodicTracker tracker_;
  RecordPlan plan_;
  IterateTrace& trace_;
  StreamingVectorMean ergodic_x_;
  StreamingVectorMean ergodic_y_;
  Vector mx_;
  Vector my_;
  double limit_;
};

void KeepDraw(const SolverConfig& cfg, IterateTrace& trace, const Vector& g) {
  if (cfg.keep_oracle_draws) trace.oracle_draws.push_back(g);
}

}  // namespace

const char* MethodName(Method m) {
  switch (m) {
    case Method::kOgda:
      return "ogda";
    case Method::kEg:
      return "eg";
    case Method::kForward:
      return "forward";
  }
  return "?";
}

double OgdaBoundStepLimit(double lipschitz) { return Inverse(4.0 * lipschitz); }
double OgdaStableStepLimit(double lipschitz) {
  return Inverse(2.0 * lipschitz);
}
double EgBoundStepLimit(double lipschitz) {
  return Inverse(std::sqrt(3.0) * lipschitz);
}

IterateTrace RunOgda(const OperatorSpec& op, const NoiseModel& noise,
                     const SolverConfig& cfg, const SeedSpec& seed,
                     const Vector& x_star) {
  ValidateCommon(op, cfg, x_star);
  const double l = op.lipschitz();
  const double gamma = cfg.gamma;
  if (gamma >= OgdaStableStepLimit(l)) {
    throw HypothesisError("OGDA requires gamma < 1/(2L) (gamma = " +
                          std::to_string(gamma) +
                          ", 1/(2L) = " + std::to_string(1.0 / (2.0 * l)) + ")");
  }
  IterateTrace trace;
  trace.method = Method::kOgda;
  trace.gamma = gamma;
  trace.x0 = cfg.x0;
  if (gamma >= OgdaBoundStepLimit(l)) {
    trace.warnings.push_back(
        "gamma >= 1/(4L): the ergodic OGDA bound does not apply");
  }
  const NoisyOracle oracle(op, noise, seed.WithStream(Stream::kXi));
  Recorder rec(op, cfg, x_star, /*sq_start=*/1, /*gap_start=*/2, trace);

  // Evaluation k of the stream carries xi_{k-1}; the noise is 1-indexed.
  Vector g_prev(op.dimension());
  oracle.EvalInto(cfg.x0, 1, g_prev);
  KeepDraw(cfg, trace, g_prev);
  Vector x;
  if (cfg.x1) {
    if (cfg.x1->size() != op.dimension()) {
      throw DimensionError("initial point x1", op.dimension(), cfg.x1->size());
    }
    x = *cfg.x1;
  } else {
    x = cfg.x0 - gamma * g_prev;
  }
  trace.x1 = x;
  rec.Observe(0, cfg.x0, nullptr);
  rec.Observe(1, x, nullptr);

  Vector g(op.dimension());
  Vector next(op.dimension());
  const double two_gamma = 2.0 * gamma;
  for (std::int64_t k = 1; k < cfg.iterations; ++k) {
    oracle.EvalInto(x, static_cast<std::uint64_t>(k + 1), g);
    KeepDraw(cfg, trace, g);
    next = x - two_gamma * g + gamma * g_prev;
    x.swap(next);
    g_prev.swap(g);
    rec.Observe(k + 1, x, nullptr);
  }
  rec.Finish(x);
  return trace;
}

IterateTrace RunEg(const OperatorSpec& op, const NoiseModel& noise,
                   const SolverConfig& cfg, const SeedSpec& seed,
                   const Vector& x_star) {
  ValidateCommon(op, cfg, x_star);
  const double l = op.lipschitz();
  const double gamma = cfg.gamma;
  IterateTrace trace;
  trace.method = Method::kEg;
  trace.gamma = gamma;
  trace.x0 = cfg.x0;
  if (gamma >= EgBoundStepLimit(l)) {
    trace.warnings.push_back(
        "gamma >= 1/(sqrt(3) L): the ergodic EG bound does not apply");
  }
  const NoisyOracle extrapolation(op, noise, seed.WithStream(Stream::kXi));
  const NoisyOracle update(op, noise, seed.WithStream(Stream::kEta));
  Recorder rec(op, cfg, x_star, 0, 0, trace);

  Vector x = cfg.x0;
  Vector y(op.dimension());
  Vector g(op.dimension());
  for (std::int64_t k = 0;; ++k) {
    const auto eval = static_cast<std::uint64_t>(k + 1);
    extrapolation.EvalInto(x, eval, g);
    KeepDraw(cfg, trace, g);
    y = x - gamma * g;
    rec.Observe(k, x, &y);
    if (k == cfg.iterations) break;
    update.EvalInto(y, eval, g);
    KeepDraw(cfg, trace, g);
    x -= gamma * g;
  }
  rec.Finish(x);
  return trace;
}

IterateTrace RunForward(const OperatorSpec& op, const NoiseModel& noise,
                        const SolverConfig& cfg, const SeedSpec& seed,
                        const Vector& x_star) {
  ValidateCommon(op, cfg, x_star);
  IterateTrace trace;
  trace.method = Method::kForward;
  trace.gamma = cfg.gamma;
  trace.x0 = cfg.x0;
  const NoisyOracle oracle(op, noise, seed.WithStream(Stream::kXi));
  Recorder rec(op, cfg, x_star, 0, 0, trace);
  Vector x = cfg.x0;
  Vector g(op.dimension());
  rec.Observe(0, x, nullptr);
  for (std::int64_t k = 0; k < cfg.iterations; ++k) {
    oracle.EvalInto(x, static_cast<std::uint64_t>(k + 1), g);
    KeepDraw(cfg, trace, g);
    x -= cfg.gamma * g;
    rec.Observe(k + 1, x, nullptr);
  }
  rec.Finish(x);
  return trace;
}

IterateTrace RunMethod(const OperatorSpec& op, const NoiseModel& noise,
                       const SolverConfig& cfg, const SeedSpec& seed,
                       const Vector& x_star) {
  switch (cfg.method) {
    case Method::kOgda:
      return RunOgda(op, noise, cfg, seed, x_star);
    case Method::kEg:
      return RunEg(op, noise, cfg, seed, x_star);
    case Method::kForward:
      return RunForward(op, noise, cfg, seed, x_star);
  }
  throw ParameterError("unknown method");
}

double OgdaBound(std::int64_t k, double gamma, double lipschitz,
                 double sigma_star, double x1_dist_sq, double x1_x0_sq,
                 BoundKind which) {
  if (k < 0) throw ParameterError("bound index K must be >= 0");
  if (!(gamma > 0.0)) throw ParameterError("gamma must be positive");
  if (!(gamma < OgdaBoundStepLimit(lipschitz))) {
    throw HypothesisError("OGDA bound requires gamma < 1/(4L)");
  }
  const double g2l2 = gamma * gamma * lipschitz * lipschitz;
  const double s2 = sigma_star * sigma_star;
  const double inv_k1 = 1.0 / (static_cast<double>(k) + 1.0);
  const double a = 1.0 - 4.0 * g2l2;
  const double b = 1.0 - 16.0 * g2l2;
  if (which == BoundKind::kSqNorm) {
    const double bracket = 4.0 * x1_dist_sq +
                           4.0 * g2l2 * (1.0 - g2l2) / a * x1_x0_sq +
                           8.0 * gamma * gamma * s2;
    return inv_k1 * (2.0 * a / (gamma * gamma * b)) * bracket +
           (16.0 * g2l2 + 11.0) / b * s2;
  }
  const double l2 = lipschitz * lipschitz;
  const double bracket = 2.0 * x1_dist_sq / gamma +
                         2.0 * gamma * l2 * (1.0 - g2l2) / a * x1_x0_sq +
                         4.0 * gamma * s2;
  return inv_k1 * bracket + gamma * (16.0 * g2l2 + 11.0) / (4.0 * a) * s2;
}

double OgdaBound(std::int64_t k, double gamma, double lipschitz,
                 double sigma_star, const Vector& x0, const Vector& x1,
                 const Vector& x_star, BoundKind which) {
  if (x0.size() != x_star.size() || x1.size() != x_star.size()) {
    throw DimensionError("OGDA bound vectors", x_star.size(),
                         x0.size() != x_star.size() ? x0.size() : x1.size());
  }
  return OgdaBound(k, gamma, lipschitz, sigma_star,
                   (x1 - x_star).squaredNorm(), (x1 - x0).squaredNorm(), which);
}

double EgBound(std::int64_t k, double gamma, double lipschitz,
               double sigma_star, double x0_dist_sq, BoundKind which) {
  if (k < 0) throw ParameterError("bound index K must be >= 0");
  if (!(gamma > 0.0)) throw ParameterError("gamma must be positive");
  if (!(gamma < EgBoundStepLimit(lipschitz))) {
    throw HypothesisError("EG bound requires gamma < 1/(sqrt(3) L)");
  }
  const double l2g2 = lipschitz * lipschitz * gamma * gamma;
  const double s2 = sigma_star * sigma_star;
  const double inv_k1 = 1.0 / (static_cast<double>(k) + 1.0);
  if (which == BoundKind::kSqNorm) {
    return inv_k1 * x0_dist_sq / (2.0 * (1.0 - 3.0 * l2g2)) +
           gamma * gamma * (2.0 + 3.0 * l2g2) / (1.0 - 3.0 * l2g2) * s2;
  }
  return inv_k1 * x0_dist_sq / (2.0 * gamma) +
         gamma * (2.0 + 3.0 * l2g2) * s2;
}

double EgBound(std::int64_t k, double gamma, double lipschitz,
               double sigma_star, const Vector& x0, const Vector& x_star,
               BoundKind which) {
  if (x0.size() != x_star.size()) {
    throw DimensionError("EG bound vectors", x_star.size(), x0.size());
  }
  return EgBound(k, gamma, lipschitz, sigma_star, (x0 - x_star).squaredNorm(),
                 which);
}

}  // namespace monosde
