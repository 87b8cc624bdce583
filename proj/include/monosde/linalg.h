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

#ifndef MONOSDE_LINALG_H_
#define MONOSDE_LINALG_H_

#include <Eigen/Dense>

namespace monosde {

using Vector = Eigen::VectorXd;
// Dense row-major storage; problem sizes here are desk scale (n <= ~2000).
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct PowerIterationOptions {
  double tolerance = 1e-12;
  int max_iterations = 100000;
};

// Largest singular value of `a` by power iteration on a^T a. Converges to
// `tolerance` relative change of the Rayleigh quotient; the start vector is
// fixed so results are reproducible.
double SpectralNorm(const Matrix& a, const PowerIterationOptions& options = {});

// Smallest eigenvalue of the symmetric part (a + a^T) / 2.
double MinSymmetricEigenvalue(const Matrix& a);

}  // namespace monosde

#endif  // MONOSDE_LINALG_H_
