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

#ifndef MONOSDE_SDE_H_
#define MONOSDE_SDE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monosde/linalg.h"
#include "monosde/metrics.h"
#include "monosde/operators.h"
#include "monosde/random.h"

namespace monosde {

// A positive, nonincreasing parameter function of time.
//   constant:       f(t) = up
//   rational-decay: f(t) = low + (up - low) / (1 + t)
struct ScalarSchedule {
  enum class Kind { kConstant, kRationalDecay };

  Kind kind = Kind::kConstant;
  double up = 1.0;
  double low = 1.0;

  static ScalarSchedule Constant(double v) { return {Kind::kConstant, v, v}; }
  static ScalarSchedule RationalDecay(double up, double low) {
    return {Kind::kRationalDecay, up, low};
  }

  double Value(double t) const;
  double Derivative(double t) const;  // closed form
  double Lower() const { return kind == Kind::kConstant ? up : low; }
  void Validate(const std::string& name) const;
};

const char* ScheduleKindName(ScalarSchedule::Kind kind);

struct ParamSchedule {
  ScalarSchedule mu;
  ScalarSchedule gamma;

  void Validate() const;
};

// sigma(t, x) = s(t) * (base + c * min(||x||, cap) / ||C||_F * C), where s is
// the envelope and C the coupling matrix. The Frobenius norm is at most
// s(t) * (||base||_F + c * cap) and x -> sigma(t, x) is c-Lipschitz.
struct DiffusionSpec {
  enum class Envelope { kConstant, kPowerDecay };

  Matrix base;  // n x m
  Envelope envelope = Envelope::kConstant;
  double power = 1.0;  // power-decay: s(t) = (1 + t)^(-power), power > 1/2
  double coupling = 0.0;
  double coupling_cap = 1.0;
  Matrix coupling_matrix;  // n x m, only read when coupling > 0

  // (sigma_star / sqrt(n)) * I_n, so that ||sigma||_F = sigma_star.
  static DiffusionSpec Isotropic(int n, double sigma_star);
  static DiffusionSpec Zero(int n);

  int state_dim() const { return static_cast<int>(base.rows()); }
  int noise_dim() const { return static_cast<int>(base.cols()); }
  double EnvelopeAt(double t) const;
  Matrix Eval(double t, const Vector& x) const;
  // out = sigma(t, x) * g.
  void ApplyInto(double t, const Vector& x, const Vector& g, Vector& out) const;
  // Upper bound on sup_x ||sigma(t, x)||_F.
  double SigmaInf(double t) const;
  double SigmaStar() const { return SigmaInf(0.0); }
  // Integral of SigmaInf(s)^2 over [0, inf); infinite for a constant envelope.
  double SquareIntegral() const;
  void Validate() const;
};

struct SdeConfig {
  double horizon = 1.0;
  double step = 1e-3;
  Vector x0;
  std::int64_t stride = 1;
  std::vector<std::int64_t> record_at;  // extra step indices to record
  bool keep_states = false;
  // Skip the h <= min(0.1/L, 0.01 T) check (reference integrations only).
  bool allow_coarse_step = false;
};

struct SdeTrajectory {
  double step = 0.0;  // step actually used: horizon / number of steps
  std::int64_t steps = 0;
  std::vector<double> times;  // recorded times (keep_states)
  std::vector<Vector> x_states;
  std::vector<Vector> z_states;
  RunRecord metrics;
  Vector final_x;
  Vector final_z;
  // Left-endpoint time average of X over [0, T].
  Vector ergodic_x;
  std::vector<std::string> warnings;
};

// Euler-Maruyama on Z(t) = X(t) + mu(t) M(X(t)):
//   Z_{i+1} = Z_i + h (mu'(t_i) - gamma(t_i)) M_{mu(t_i)}(Z_i)
//             + sqrt(h) sigma(t_i, X_i) g_i,
// with X_i = J_{mu(t_i) M}(Z_i) recovered by the resolvent at every step and
// g_i drawn from the Brownian stream. Ergodic columns are left-endpoint
// Riemann averages on the integration grid.
SdeTrajectory Simulate(const OperatorSpec& op, const ParamSchedule& sched,
                       const DiffusionSpec& diffusion, const SdeConfig& cfg,
                       const SeedSpec& seed, const Vector& x_star);

// 1/2 ||x + mu(t) z - x*||^2.
double Anchor(const ParamSchedule& sched, double t, const Vector& x,
              const Vector& z_dir, const Vector& x_star);
// mu <z, x - x*> + 1/2 ||x - x*||^2 + mu^2/2 ||z||^2, the same quantity.
double AnchorExpanded(const ParamSchedule& sched, double t, const Vector& x,
                      const Vector& z_dir, const Vector& x_star);

// 1/2 ||x0 - x*||^2 + mu_up <M(x0), x0 - x*> + mu_up^2/2 ||M(x0)||^2.
double StrongInitialEnergy(const OperatorSpec& op, const Vector& x0,
                           const Vector& x_star, double mu_up);

enum class ContinuousBoundKind { kGap, kSqNorm, kStrong };

struct ContinuousBoundParams {
  double lipschitz = 0.0;
  double sigma_star = 0.0;
  double mu_up = 1.0;
  double mu_t = 1.0;     // mu(t)
  double gamma = 1.0;    // gamma(t) for nonincreasing gamma, else gamma_low
  double dist0 = 0.0;    // dist(X0, zer M)
  double t = 1.0;
  double kappa = 0.0;    // strong kind
  double g0 = 0.0;       // strong kind, see StrongInitialEnergy
  double lambda = 0.5;   // refined strong bound
  // When set, the refined strong bound for a decreasing, vanishing
  // sigma_inf is used; the value is sigma_inf(lambda * t).
  std::optional<double> sigma_inf_at_lambda_t;
};

double ContinuousBound(ContinuousBoundKind kind,
                       const ContinuousBoundParams& p);

}  // namespace monosde

#endif  // MONOSDE_SDE_H_
