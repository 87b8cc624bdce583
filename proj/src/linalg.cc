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

#include "monosde/linalg.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace monosde {

double SpectralNorm(const Matrix& a, const PowerIterationOptions& options) {
  const Eigen::Index n = a.cols();
  if (n == 0 || a.rows() == 0) return 0.0;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = 1.0 + 0.25 * std::sin(1.0 + static_cast<double>(i));
  }
  v.normalize();
  double estimate = 0.0;
  Vector av(a.rows());
  for (int it = 0; it < options.max_iterations; ++it) {
    av.noalias() = a * v;
    Vector w = a.transpose() * av;
    const double rayleigh = av.squaredNorm();  // v^T A^T A v, ||v|| = 1
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
    if (it > 0 && std::abs(rayleigh - estimate) <=
                      options.tolerance * std::max(rayleigh, 1e-300)) {
      estimate = rayleigh;
      break;
    }
    estimate = rayleigh;
  }
  // One more product with the converged direction.
  return std::max(std::sqrt(estimate), (a * v).norm());
}

double MinSymmetricEigenvalue(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace monosde
