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

#ifndef MONOSDE_OPERATORS_H_
#define MONOSDE_OPERATORS_H_

#include <functional>
#include <optional>
#include <string>

#include <Eigen/LU>

#include "monosde/linalg.h"

namespace monosde {

// Monotone Lipschitz operator with an affine core.
//
//   affine:                   M(x) = J x + c
//   strongly-monotone-shift:  M(x) = J x + c + shift * x
//
// The total linear part J + shift*I, its spectral norm (the Lipschitz
// constant) and the smallest eigenvalue of its symmetric part (the strong
// monotonicity modulus, clamped at zero) are computed once at construction.
// Instances are immutable and safe to share between threads.
class OperatorSpec {
 public:
  enum class Kind { kAffine, kStronglyMonotoneShift };

  static OperatorSpec Affine(Matrix linear_part, Vector offset);
  static OperatorSpec Shifted(Matrix linear_part, Vector offset, double shift);

  Kind kind() const { return kind_; }
  int dimension() const { return static_cast<int>(offset_.size()); }
  const Matrix& linear_part() const { return linear_part_; }
  const Vector& offset() const { return offset_; }
  double shift() const { return shift_; }
  const Matrix& total_linear_part() const { return total_; }
  double lipschitz() const { return lipschitz_; }
  double strong_modulus() const { return strong_modulus_; }

  // M(x). Throws DimensionError when x has the wrong size.
  Vector Eval(const Vector& x) const;
  // Same as Eval without the dimension check, writing into `out`.
  void EvalInto(const Vector& x, Vector& out) const;

 private:
  OperatorSpec(Kind kind, Matrix linear_part, Vector offset, double shift);

  Kind kind_;
  Matrix linear_part_;
  Vector offset_;
  double shift_;
  Matrix total_;
  double lipschitz_;
  double strong_modulus_;
};

struct ZeroCertificate {
  Vector x_star;
  double residual = 0.0;  // ||M(x_star)||
};

// Solves J_total x = -c directly. Throws SingularSystemError carrying the
// numerical rank when the system is singular.
ZeroCertificate ComputeZero(const OperatorSpec& op);

// Test problems.
OperatorSpec ZeroOperator(int n);
// Counterclockwise rotation by pi/2 in R^2: linear part [[0,-1],[1,0]].
OperatorSpec RotationOperator();
// kappa * I + omega * blockdiag(R, ..., R) on R^n, n even. Strongly
// monotone with modulus kappa, zero at the origin.
OperatorSpec StrongRotationOperator(int n, double kappa, double omega);

// Saddle operator of
//   Phi(x, y) = 1/2 <x, H x> - <x, h> - <y, A x - b>,  H = 2 A^T A,
// with A = 1/4 * (anti-diagonal band of (-1, 1) pairs, lone 1 in the lower
// left corner), b = (1/4, ..., 1/4), h = (0, ..., 0, 1/4).
// M(x, y) = (H x - h - A^T y, A x - b) on R^{2n}.
struct BilinearProblem {
  int n = 0;
  Matrix a;
  Matrix h_mat;
  Vector b;
  Vector h;
  OperatorSpec op;
  ZeroCertificate zero;

  double Phi(const Vector& x, const Vector& y) const;
};

BilinearProblem BuildBilinear(int n);

// Resolvent (Id + mu M)^{-1} z by a direct linear solve with one step of
// iterative refinement. Returns z unchanged when mu < 1e-300.
Vector Resolvent(const OperatorSpec& op, double mu, const Vector& z);

// Yosida approximation (z - J_mu(z)) / mu.
Vector Yosida(const OperatorSpec& op, double mu, const Vector& z);

struct ContractionOptions {
  double step_tolerance = 1e-13;
  int max_iterations = 10000;
};

// Banach iteration x <- z - mu M(x). Requires mu * L < 1. Works for any
// L-Lipschitz map, not only the affine ones.
Vector ResolventByContraction(const std::function<Vector(const Vector&)>& map,
                              double lipschitz, double mu, const Vector& z,
                              const ContractionOptions& options = {});
Vector ResolventByContraction(const OperatorSpec& op, double mu,
                              const Vector& z,
                              const ContractionOptions& options = {});

double LipschitzEstimate(const OperatorSpec& op);

// Resolvent with a cached factorization of (I + mu J_total) for a fixed mu.
// Used by the time stepper, which evaluates the same resolvent many times.
class AffineResolvent {
 public:
  AffineResolvent(const OperatorSpec& op, double mu);

  double mu() const { return mu_; }
  void Apply(const Vector& z, Vector& x) const;
  // M_mu(z) given the already computed resolvent x = J_mu(z).
  void YosidaFromResolvent(const Vector& z, const Vector& x,
                           Vector& out) const;

 private:
  const OperatorSpec* op_;
  double mu_;
  bool identity_;
  Matrix system_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

}  // namespace monosde

#endif  // MONOSDE_OPERATORS_H_
