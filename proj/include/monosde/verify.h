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

#ifndef MONOSDE_VERIFY_H_
#define MONOSDE_VERIFY_H_

#include <ostream>
#include <string>
#include <vector>

#include "monosde/runner.h"

namespace monosde {

struct VerifyRow {
  std::string check;  // e.g. "ogda-sqnorm", "sde-strong"
  double index = 0.0;  // K for discrete methods, t for the SDE
  double empirical = 0.0;  // replica mean
  double stderr_ = 0.0;
  double bound = 0.0;
  double allowance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  std::vector<std::string> notes;  // bounds skipped because of hypotheses
  bool all_pass = true;
};

// Compares ensemble means of the ergodic metrics with the closed-form bounds
// at up to `checkpoints` log-spaced recorded indices per check.
//   discrete, noise-free:   empirical <= bound (1 + 1e-9)
//   discrete, stochastic:   empirical <= bound + 3 stderr
//   SDE:                    empirical <= bound + 10 h (1 + L) + 3 stderr
// OGDA bounds use the replica mean of the right-hand side since x^1 can be
// random.
VerifyReport VerifyBounds(const ExperimentResult& result, int checkpoints = 20);

void PrintReport(std::ostream& out, const VerifyReport& report);

// Positions in `index` closest (from above) to `count` log-spaced values in
// [first, index.back()].
std::vector<std::size_t> LogSpacedPositions(const std::vector<double>& index,
                                            double first, int count);

}  // namespace monosde

#endif  // MONOSDE_VERIFY_H_
