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

#include "monosde/random.h"

#include <cmath>
#include <numbers>

namespace monosde {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Maps 53 high bits to (0, 1].
double ToOpenClosed(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

double ToClosedOpen(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::uint64_t Join(std::uint32_t hi, std::uint32_t lo) {
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

}  // namespace

const char* StreamName(Stream s) {
  switch (s) {
    case Stream::kXi:
      return "xi";
    case Stream::kEta:
      return "eta";
    case Stream::kBrownian:
      return "brownian";
  }
  return "?";
}

std::array<std::uint32_t, 4> Philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint64_t DeriveKey(const SeedSpec& seed) {
  std::uint64_t k = SplitMix64(seed.master_seed);
  k = SplitMix64(k ^ SplitMix64(seed.run_index + 0x632BE59BD9B4E019ull));
  k = SplitMix64(k ^ (static_cast<std::uint64_t>(seed.stream) + 1) *
                         0xD6E8FEB86659FD93ull);
  return k;
}

CounterRng::CounterRng(const SeedSpec& seed) {
  const std::uint64_t k = DeriveKey(seed);
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

std::array<std::uint32_t, 4> CounterRng::Block(std::uint64_t iteration,
                                               std::uint64_t block) const {
  return Philox4x32({static_cast<std::uint32_t>(block),
                     static_cast<std::uint32_t>(block >> 32),
                     static_cast<std::uint32_t>(iteration),
                     static_cast<std::uint32_t>(iteration >> 32)},
                    key_);
}

double CounterRng::Uniform(std::uint64_t iteration, std::uint64_t index) const {
  // Uniforms live in the upper half of the block space so they never alias
  // the normal draws of the same iteration.
  const auto b = Block(iteration, (index / 2) | (1ull << 63));
  const std::uint64_t bits =
      index % 2 == 0 ? Join(b[0], b[1]) : Join(b[2], b[3]);
  return ToOpenClosed(bits) * (1.0 - 0x1.0p-54);
}

void CounterRng::FillNormal(std::uint64_t iteration,
                            std::span<double> out) const {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; i += 2) {
    const auto b = Block(iteration, i / 2);
    const double u1 = ToOpenClosed(Join(b[0], b[1]));
    const double u2 = ToClosedOpen(Join(b[2], b[3]));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    out[i] = r * std::cos(theta);
    if (i + 1 < n) out[i + 1] = r * std::sin(theta);
  }
}

double CounterRng::Normal(std::uint64_t iteration, std::uint64_t index) const {
  const auto b = Block(iteration, index / 2);
  const double u1 = ToOpenClosed(Join(b[0], b[1]));
  const double u2 = ToClosedOpen(Join(b[2], b[3]));
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return index % 2 == 0 ? r * std::cos(theta) : r * std::sin(theta);
}

}  // namespace monosde
