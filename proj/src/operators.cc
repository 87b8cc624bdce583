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

#include "monosde/operators.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "monosde/error.h"

namespace monosde {
namespace {

constexpr double kTinyMu = 1e-300;

void CheckMu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw ParameterError("resolvent parameter mu must be positive and finite, got " +
                         std::to_string(mu));
  }
}

void CheckDim(const OperatorSpec& op, const Vector& v, const char* what) {
  if (v.size() != op.dimension()) {
    throw DimensionError(what, op.dimension(), v.size());
  }
}

}  // namespace

OperatorSpec::OperatorSpec(Kind kind, Matrix linear_part, Vector offset,
                           double shift)
    : kind_(kind),
      linear_part_(std::move(linear_part)),
      offset_(std::move(offset)),
      shift_(shift) {
  if (linear_part_.rows() != linear_part_.cols()) {
    throw DimensionError("operator linear part must be square",
                         linear_part_.rows(), linear_part_.cols());
  }
  if (linear_part_.rows() != offset_.size()) {
    throw DimensionError("operator offset", linear_part_.rows(),
                         offset_.size());
  }
  if (!(shift_ >= 0.0)) {
    throw ParameterError("operator shift must be >= 0");
  }
  total_ = linear_part_;
  total_.diagonal().array() += shift_;
  lipschitz_ = SpectralNorm(total_);
  strong_modulus_ = std::max(0.0, MinSymmetricEigenvalue(total_));
}

OperatorSpec OperatorSpec::Affine(Matrix linear_part, Vector offset) {
  return OperatorSpec(Kind::kAffine, std::move(linear_part), std::move(offset),
                      0.0);
}

OperatorSpec OperatorSpec::Shifted(Matrix linear_part, Vector offset,
                                   double shift) {
  return OperatorSpec(Kind::kStronglyMonotoneShift, std::move(linear_part),
                      std::move(offset), shift);
}

Vector OperatorSpec::Eval(const Vector& x) const {
  CheckDim(*this, x, "operator argument");
  Vector out(offset_.size());
  EvalInto(x, out);
  return out;
}

void OperatorSpec::EvalInto(const Vector& x, Vector& out) const {
  out.noalias() = total_ * x;
  out += offset_;
}

ZeroCertificate ComputeZero(const OperatorSpec& op) {
  const Eigen::MatrixXd j = op.total_linear_part();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(j);
  if (!lu.isInvertible()) {
    throw SingularSystemError("operator zero: singular linear system",
                              lu.rank());
  }
  ZeroCertificate cert;
  cert.x_star = lu.solve(-op.offset());
  // One refinement step.
  const Vector r = -op.offset() - j * cert.x_star;
  cert.x_star += lu.solve(r);
  cert.residual = op.Eval(cert.x_star).norm();
  return cert;
}

OperatorSpec ZeroOperator(int n) {
  if (n < 1) throw ParameterError("zero operator dimension must be >= 1");
  return OperatorSpec::Affine(Matrix::Zero(n, n), Vector::Zero(n));
}

OperatorSpec RotationOperator() {
  Matrix r(2, 2);
  r << 0.0, -1.0, 1.0, 0.0;
  return OperatorSpec::Affine(std::move(r), Vector::Zero(2));
}

OperatorSpec StrongRotationOperator(int n, double kappa, double omega) {
  if (n < 2 || n % 2 != 0) {
    throw ParameterError("strong rotation operator needs an even dimension >= 2");
  }
  if (!(kappa >= 0.0)) throw ParameterError("kappa must be >= 0");
  Matrix r = Matrix::Zero(n, n);
  for (int i = 0; i < n; i += 2) {
    r(i, i + 1) = -omega;
    r(i + 1, i) = omega;
  }
  return OperatorSpec::Shifted(std::move(r), Vector::Zero(n), kappa);
}

double BilinearProblem::Phi(const Vector& x, const Vector& y) const {
  if (x.size() != n) throw DimensionError("Phi primal argument", n, x.size());
  if (y.size() != n) throw DimensionError("Phi dual argument", n, y.size());
  return 0.5 * x.dot(h_mat * x) - x.dot(h) - y.dot(a * x - b);
}

BilinearProblem BuildBilinear(int n) {
  if (n < 2) throw ParameterError("bilinear problem needs n >= 2");
  Matrix a = Matrix::Zero(n, n);
  // Row i holds (-1, 1) at columns (n-2-i, n-1-i); the last row holds a
  // single 1 in column 0.
  for (int i = 0; i < n - 1; ++i) {
    a(i, n - 2 - i) = -0.25;
    a(i, n - 1 - i) = 0.25;
  }
  a(n - 1, 0) = 0.25;
  Matrix h_mat = 2.0 * a.transpose() * a;
  Vector b = Vector::Constant(n, 0.25);
  Vector h = Vector::Zero(n);
  h[n - 1] = 0.25;

  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topLeftCorner(n, n) = h_mat;
  j.topRightCorner(n, n) = -a.transpose();
  j.bottomLeftCorner(n, n) = a;
  Vector c(2 * n);
  c << -h, -b;
  OperatorSpec op = OperatorSpec::Affine(std::move(j), std::move(c));
  ZeroCertificate zero = ComputeZero(op);
  return BilinearProblem{n,           std::move(a), std::move(h_mat),
                         std::move(b), std::move(h), std::move(op),
                         std::move(zero)};
}

Vector Resolvent(const OperatorSpec& op, double mu, const Vector& z) {
  CheckMu(mu);
  CheckDim(op, z, "resolvent argument");
  AffineResolvent r(op, mu);
  Vector x(z.size());
  r.Apply(z, x);
  return x;
}

Vector Yosida(const OperatorSpec& op, double mu, const Vector& z) {
  CheckMu(mu);
  CheckDim(op, z, "Yosida argument");
  if (mu < kTinyMu) return op.Eval(z);
  const Vector x = Resolvent(op, mu, z);
  return (z - x) / mu;
}

Vector ResolventByContraction(const std::function<Vector(const Vector&)>& map,
                              double lipschitz, double mu, const Vector& z,
                              const ContractionOptions& options) {
  CheckMu(mu);
  if (!(mu * lipschitz < 1.0)) {
    throw HypothesisError(
        "contraction resolvent requires mu * L < 1 (mu * L = " +
        std::to_string(mu * lipschitz) + ")");
  }
  Vector x = z;
  for (int it = 0; it < options.max_iterations; ++it) {
    Vector next = z - mu * map(x);
    const double change = (next - x).norm();
    x = std::move(next);
    if (change <= options.step_tolerance) break;
  }
  return x;
}

Vector ResolventByContraction(const OperatorSpec& op, double mu,
                              const Vector& z,
                              const ContractionOptions& options) {
  CheckDim(op, z, "resolvent argument");
  return ResolventByContraction(
      [&op](const Vector& x) { return op.Eval(x); }, op.lipschitz(), mu, z,
      options);
}

double LipschitzEstimate(const OperatorSpec& op) {
  return SpectralNorm(op.total_linear_part());
}

AffineResolvent::AffineResolvent(const OperatorSpec& op, double mu)
    : op_(&op), mu_(mu), identity_(mu < kTinyMu) {
  CheckMu(mu);
  if (identity_) return;
  system_ = mu * op.total_linear_part();
  system_.diagonal().array() += 1.0;
  lu_.compute(Eigen::MatrixXd(system_));
}

void AffineResolvent::Apply(const Vector& z, Vector& x) const {
  if (identity_) {
    x = z;
    return;
  }
  const Vector rhs = z - mu_ * op_->offset();
  x = lu_.solve(rhs);
  const Vector r = rhs - system_ * x;
  x += lu_.solve(r);
}

void AffineResolvent::YosidaFromResolvent(const Vector& z, const Vector& x,
                                          Vector& out) const {
  if (identity_) {
    op_->EvalInto(x, out);
    return;
  }
  out = (z - x) / mu_;
}

}  // namespace monosde
