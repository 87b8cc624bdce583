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

#ifndef MONOSDE_RANDOM_H_
#define MONOSDE_RANDOM_H_

#include <array>
#include <cstdint>
#include <span>

namespace monosde {

// Independent random streams used by one replica.
enum class Stream : std::uint32_t { kXi = 0, kEta = 1, kBrownian = 2 };

const char* StreamName(Stream s);

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t run_index = 0;
  Stream stream = Stream::kXi;

  SeedSpec WithStream(Stream s) const { return {master_seed, run_index, s}; }
};

// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> Philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// 64-bit key derived from the (master_seed, run_index, stream) triple.
std::uint64_t DeriveKey(const SeedSpec& seed);

// Counter-based draws: the value for (seed, iteration, index) is a pure
// function of its arguments, so replicas and iterations need no shared
// generator state and any draw can be reproduced in isolation.
class CounterRng {
 public:
  explicit CounterRng(const SeedSpec& seed);

  // Uniform in the open interval (0, 1).
  double Uniform(std::uint64_t iteration, std::uint64_t index) const;
  // Standard normals for one iteration, filled via Box-Muller.
  void FillNormal(std::uint64_t iteration, std::span<double> out) const;
  double Normal(std::uint64_t iteration, std::uint64_t index) const;

 private:
  std::array<std::uint32_t, 4> Block(std::uint64_t iteration,
                                     std::uint64_t block) const;

  std::array<std::uint32_t, 2> key_;
};

}  // namespace monosde

#endif  // MONOSDE_RANDOM_H_
