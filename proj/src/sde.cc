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

#include "monosde/sde.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "monosde/error.h"

namespace monosde {

double ScalarSchedule::Value(double t) const {
  if (kind == Kind::kConstant) return up;
  return low + (up - low) / (1.0 + t);
}

double ScalarSchedule::Derivative(double t) const {
  if (kind == Kind::kConstant) return 0.0;
  const double d = 1.0 + t;
  return -(up - low) / (d * d);
}

void ScalarSchedule::Validate(const std::string& name) const {
  if (!(up > 0.0) || !std::isfinite(up)) {
    throw ParameterError(name + ": upper value must be positive and finite");
  }
  if (kind == Kind::kRationalDecay && !(low > 0.0 && low <= up)) {
    throw ParameterError(name + ": need 0 < low <= up for rational decay");
  }
}

const char* ScheduleKindName(ScalarSchedule::Kind kind) {
  return kind == ScalarSchedule::Kind::kConstant ? "constant"
                                                 : "rational-decay";
}

void ParamSchedule::Validate() const {
  mu.Validate("mu");
  gamma.Validate("gamma");
}

DiffusionSpec DiffusionSpec::Isotropic(int n, double sigma_star) {
  DiffusionSpec d;
  d.base = Matrix::Identity(n, n) *
           (sigma_star / std::sqrt(static_cast<double>(n)));
  return d;
}

DiffusionSpec DiffusionSpec::Zero(int n) {
  DiffusionSpec d;
  d.base = Matrix::Zero(n, n);
  return d;
}

double DiffusionSpec::EnvelopeAt(double t) const {
  if (envelope == Envelope::kConstant) return 1.0;
  return std::pow(1.0 + t, -power);
}

void DiffusionSpec::Validate() const {
  if (envelope == Envelope::kPowerDecay && !(power > 0.5)) {
    throw ParameterError("diffusion power-decay exponent must exceed 1/2");
  }
  if (!(coupling >= 0.0)) throw ParameterError("diffusion coupling must be >= 0");
  if (coupling > 0.0) {
    if (!(coupling_cap > 0.0)) {
      throw ParameterError("diffusion coupling cap must be positive");
    }
    if (coupling_matrix.rows() != base.rows() ||
        coupling_matrix.cols() != base.cols()) {
      throw DimensionError("diffusion coupling matrix rows", base.rows(),
                           coupling_matrix.rows());
    }
    if (!(coupling_matrix.norm() > 0.0)) {
      throw ParameterError("diffusion coupling matrix must be nonzero");
    }
  }
}

Matrix DiffusionSpec::Eval(double t, const Vector& x) const {
  Matrix out = base;
  if (coupling > 0.0) {
    out += (coupling * std::min(x.norm(), coupling_cap) /
            coupling_matrix.norm()) *
           coupling_matrix;
  }
  return EnvelopeAt(t) * out;
}

void DiffusionSpec::ApplyInto(double t, const Vector& x, const Vector& g,
                              Vector& out) const {
  out.noalias() = base * g;
  if (coupling > 0.0) {
    const double w =
        coupling * std::min(x.norm(), coupling_cap) / coupling_matrix.norm();
    out.noalias() += w * (coupling_matrix * g);
  }
  if (envelope != Envelope::kConstant) out *= EnvelopeAt(t);
}

double DiffusionSpec::SigmaInf(double t) const {
  const double frob = base.norm() + (coupling > 0.0 ? coupling * coupling_cap : 0.0);
  return EnvelopeAt(t) * frob;
}

double DiffusionSpec::SquareIntegral() const {
  const double s = SigmaStar();
  if (s == 0.0) return 0.0;
  if (envelope == Envelope::kConstant) {
    return std::numeric_limits<double>::infinity();
  }
  // integral of (1 + t)^(-2p) over [0, inf) is 1 / (2p - 1).
  return s * s / (2.0 * power - 1.0);
}

SdeTrajectory Simulate(const OperatorSpec& op, const ParamSchedule& sched,
                       const DiffusionSpec& diffusion, const SdeConfig& cfg,
                       const SeedSpec& seed, const Vector& x_star) {
  sched.Validate();
  diffusion.Validate();
  const int n = op.dimension();
  if (cfg.x0.size() != n) throw DimensionError("SDE initial state", n, cfg.x0.size());
  if (x_star.size() != n) throw DimensionError("reference zero x*", n, x_star.size());
  if (diffusion.state_dim() != n) {
    throw DimensionError("diffusion rows", n, diffusion.state_dim());
  }
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) {
    throw ParameterError("SDE horizon T must be positive");
  }
  if (!(cfg.step > 0.0)) throw ParameterError("SDE step h must be positive");
  const double l = op.lipschitz();
  if (!cfg.allow_coarse_step) {
    const double limit =
        std::min(l > 0.0 ? 0.1 / l : std::numeric_limits<double>::infinity(),
                 0.01 * cfg.horizon);
    if (cfg.step > limit * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "SDE step h = " << cfg.step << " violates h <= min(0.1/L, 0.01 T) = "
         << limit;
      throw ParameterError(os.str());
    }
  }

  SdeTrajectory traj;
  const auto steps = static_cast<std::int64_t>(
      std::ceil(cfg.horizon / cfg.step - 1e-9));
  const double h = cfg.horizon / static_cast<double>(steps);
  const double sqrt_h = std::sqrt(h);
  traj.step = h;
  traj.steps = steps;
  if (l * sched.mu.up >= 1.0) {
    traj.warnings.push_back(
        "L * mu_up >= 1: hypothesis of the almost-sure convergence result not "
        "met (simulation is still defined)");
  }

  const CounterRng brownian(seed.WithStream(Stream::kBrownian));
  const RecordPlan plan(cfg.stride, steps, cfg.record_at);
  traj.metrics.Reserve(static_cast<std::size_t>(steps / cfg.stride + 2));

  Vector x = cfg.x0;
  Vector mx(n);
  op.EvalInto(x, mx);
  Vector z = x + sched.mu.Value(0.0) * mx;
  Vector g(diffusion.noise_dim());
  Vector noise(n);
  StreamingVectorMean ergodic_x(n);
  CompensatedSum sq_sum;
  CompensatedSum gap_sum;
  double min_sq = std::numeric_limits<double>::infinity();
  std::unique_ptr<AffineResolvent> resolvent;

  for (std::int64_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * h;
    const double mu = sched.mu.Value(t);
    if (!resolvent || resolvent->mu() != mu) {
      resolvent = std::make_unique<AffineResolvent>(op, mu);
    }
    resolvent->Apply(z, x);
    if (!x.allFinite() || !z.allFinite()) {
      throw DivergenceError("non-finite SDE state", i);
    }
    // M(X_i) equals the Yosida approximation M_mu(Z_i); evaluating M at the
    // resolvent avoids the 1/mu cancellation in (Z - X) / mu.
    op.EvalInto(x, mx);
    const double norm_sq = mx.squaredNorm();
    const Vector dx = x - x_star;
    const double gap = mx.dot(dx);
    min_sq = std::min(min_sq, norm_sq);

    if (plan.ShouldRecord(i)) {
      const double ie = i == 0 ? 1.0 : static_cast<double>(i);
      const double erg_sq = i == 0 ? norm_sq : sq_sum.Value() / ie;
      const double erg_gap = i == 0 ? gap : gap_sum.Value() / ie;
      traj.metrics.Append(
          t, {norm_sq, gap, dx.squaredNorm(), erg_sq, erg_gap, min_sq});
      if (cfg.keep_states) {
        traj.times.push_back(t);
        traj.x_states.push_back(x);
        traj.z_states.push_back(z);
      }
    }
    if (i == steps) break;

    sq_sum.Add(norm_sq);
    gap_sum.Add(gap);
    ergodic_x.Add(x);

    const double drift = sched.mu.Derivative(t) - sched.gamma.Value(t);
    z += (h * drift) * mx;
    if (diffusion.SigmaInf(t) > 0.0) {
      brownian.FillNormal(static_cast<std::uint64_t>(i),
                          std::span<double>(g.data(), g.size()));
      diffusion.ApplyInto(t, x, g, noise);
      z += sqrt_h * noise;
    }
  }
  traj.final_x = x;
  traj.final_z = z;
  traj.ergodic_x = ergodic_x.Mean();
  return traj;
}

double Anchor(const ParamSchedule& sched, double t, const Vector& x,
              const Vector& z_dir, const Vector& x_star) {
  if (x.size() != x_star.size() || z_dir.size() != x_star.size()) {
    throw DimensionError("anchor arguments", x_star.size(),
                         x.size() != x_star.size() ? x.size() : z_dir.size());
  }
  return 0.5 * (x + sched.mu.Value(t) * z_dir - x_star).squaredNorm();
}

double AnchorExpanded(const ParamSchedule& sched, double t, const Vector& x,
                      const Vector& z_dir, const Vector& x_star) {
  if (x.size() != x_star.size() || z_dir.size() != x_star.size()) {
    throw DimensionError("anchor arguments", x_star.size(),
                         x.size() != x_star.size() ? x.size() : z_dir.size());
  }
  const double mu = sched.mu.Value(t);
  const Vector d = x - x_star;
  return mu * z_dir.dot(d) + 0.5 * d.squaredNorm() +
         0.5 * mu * mu * z_dir.squaredNorm();
}

double StrongInitialEnergy(const OperatorSpec& op, const Vector& x0,
                           const Vector& x_star, double mu_up) {
  const Vector m = op.Eval(x0);
  const Vector d = x0 - x_star;
  return 0.5 * d.squaredNorm() + mu_up * m.dot(d) +
         0.5 * mu_up * mu_up * m.squaredNorm();
}

double ContinuousBound(ContinuousBoundKind kind,
                       const ContinuousBoundParams& p) {
  if (!(p.mu_up > 0.0) || !(p.mu_t > 0.0) || !(p.gamma > 0.0)) {
    throw ParameterError("continuous bound: mu_up, mu(t) and gamma must be positive");
  }
  if (p.mu_t > p.mu_up * (1.0 + 1e-12)) {
    throw HypothesisError("continuous bound: requires mu(t) <= mu_up");
  }
  const double s2 = p.sigma_star * p.sigma_star;
  switch (kind) {
    case ContinuousBoundKind::kGap:
    case ContinuousBoundKind::kSqNorm: {
      if (!(p.t > 0.0)) throw ParameterError("continuous bound: t must be > 0");
      const double ml = p.mu_up * p.lipschitz;
      const double c = 0.5 * ml * ml + ml + 0.5;
      double lead = c * p.dist0 * p.dist0 / (p.gamma * p.t);
      if (kind == ContinuousBoundKind::kSqNorm) lead /= p.mu_t;
      return lead + s2 / (2.0 * p.gamma * p.mu_t);
    }
    case ContinuousBoundKind::kStrong: {
      if (!(p.t >= 0.0)) throw ParameterError("continuous bound: t must be >= 0");
      if (!(p.kappa >= 1.0 / (2.0 * p.mu_up))) {
        throw HypothesisError(
            "strong bound requires kappa >= 1/(2 mu_up) (kappa = " +
            std::to_string(p.kappa) +
            ", 1/(2 mu_up) = " + std::to_string(1.0 / (2.0 * p.mu_up)) + ")");
      }
      const double rate = p.gamma / (2.0 * p.mu_up);
      const double floor = s2 * p.mu_up / p.gamma;
      if (!p.sigma_inf_at_lambda_t) {
        return p.g0 * std::exp(-rate * p.t) + floor;
      }
      if (!(p.lambda > 0.0 && p.lambda < 1.0)) {
        throw ParameterError("refined strong bound needs lambda in (0, 1)");
      }
      const double s_lt = *p.sigma_inf_at_lambda_t;
      return p.g0 * std::exp(-rate * p.t) +
             floor * std::exp(-rate * (1.0 - p.lambda) * p.t) +
             p.mu_up / p.gamma * s_lt * s_lt;
    }
  }
  throw ParameterError("unknown continuous bound kind");
}

}  // namespace monosde
