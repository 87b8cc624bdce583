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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "monosde/error.h"
#include "monosde/operators.h"
#include "monosde/oracle.h"
#include "monosde/solvers.h"

namespace monosde {
namespace {

const SeedSpec kSeed{42, 0, Stream::kXi};

Vector Vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

SolverConfig Config(Method m, double gamma, std::int64_t iterations,
                    Vector x0) {
  SolverConfig cfg;
  cfg.method = m;
  cfg.gamma = gamma;
  cfg.iterations = iterations;
  cfg.x0 = std::move(x0);
  cfg.keep_iterates = true;
  return cfg;
}

TEST_CASE("zero operator keeps every method stationary") {
  const OperatorSpec op = ZeroOperator(3);
  const Vector x0 = Vector::LinSpaced(3, 1.0, 3.0);
  for (Method m : {Method::kOgda, Method::kEg, Method::kForward}) {
    const IterateTrace t =
        RunMethod(op, NoiseModel::None(), Config(m, 0.3, 20, x0), kSeed, x0);
    for (const Vector& x : t.x_iterates) CHECK(x == x0);
    CHECK(t.final_x == x0);
  }
}

TEST_CASE("OGDA second iterate on the rotation") {
  const OperatorSpec op = RotationOperator();
  SolverConfig cfg = Config(Method::kOgda, 0.2, 2, Vec2(1.0, 0.0));
  cfg.x1 = Vec2(1.0, 0.0);
  const IterateTrace t =
      RunOgda(op, NoiseModel::None(), cfg, kSeed, Vector::Zero(2));
  REQUIRE(t.x_iterates.size() == 3);
  CHECK(t.x_iterates[2](0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(t.x_iterates[2](1) == doctest::Approx(-0.2).epsilon(1e-15));
}

TEST_CASE("OGDA on the rotation converges and matches a reference loop") {
  const OperatorSpec op = RotationOperator();
  const double gamma = 0.2;
  SolverConfig cfg = Config(Method::kOgda, gamma, 3000, Vec2(1.0, 0.0));
  cfg.x1 = Vec2(1.0, 0.0);
  const IterateTrace t =
      RunOgda(op, NoiseModel::None(), cfg, kSeed, Vector::Zero(2));
  // Reference: R x = (-x1, x0).
  double px = 1.0, py = 0.0, x = 1.0, y = 0.0;
  for (int k = 1; k < 3000; ++k) {
    const double nx = x - 2 * gamma * (-y) + gamma * (-py);
    const double ny = y - 2 * gamma * x + gamma * px;
    px = x;
    py = y;
    x = nx;
    y = ny;
    CHECK(std::abs(t.x_iterates[k + 1](0) - x) <= 1e-12);
    CHECK(std::abs(t.x_iterates[k + 1](1) - y) <= 1e-12);
  }
  const auto& min_sq = t.metrics[Metric::kMinNormMSq];
  CHECK(min_sq.back() < 1e-10);
  CHECK(t.x_iterates.back().norm() < t.x_iterates[100].norm());
  CHECK(std::isnan(min_sq[0]));
  for (std::size_t i = 2; i < min_sq.size(); ++i) {
    CHECK(min_sq[i] <= min_sq[i - 1]);
  }
}

TEST_CASE("EG first iterate on the rotation") {
  const OperatorSpec op = RotationOperator();
  const IterateTrace t =
      RunEg(op, NoiseModel::None(), Config(Method::kEg, 0.5, 1, Vec2(1, 0)),
            kSeed, Vector::Zero(2));
  CHECK(t.y_iterates[0] == Vec2(1.0, -0.5));
  CHECK(t.x_iterates[1] == Vec2(0.75, -0.5));
  CHECK(t.x_iterates[1].squaredNorm() == doctest::Approx(0.8125));
}

TEST_CASE("EG contracts the rotation by a fixed factor") {
  const OperatorSpec op = RotationOperator();
  for (double gamma : {0.1, 0.3, 0.5, 0.57}) {
    const IterateTrace t =
        RunEg(op, NoiseModel::None(),
              Config(Method::kEg, gamma, 50, Vec2(1.0, 2.0)), kSeed,
              Vector::Zero(2));
    const double factor = (1 - gamma * gamma) * (1 - gamma * gamma) +
                          gamma * gamma;
    CHECK(factor < 1.0);
    for (std::size_t k = 1; k < t.x_iterates.size(); ++k) {
      const double ratio = t.x_iterates[k].squaredNorm() /
                           t.x_iterates[k - 1].squaredNorm();
      CHECK(std::abs(ratio - factor) <= 1e-14);
    }
  }
}

TEST_CASE("forward iteration spirals out on the rotation") {
  const OperatorSpec op = RotationOperator();
  const double gamma = 0.1;
  const IterateTrace t =
      RunForward(op, NoiseModel::None(),
                 Config(Method::kForward, gamma, 200, Vec2(1.0, 0.0)), kSeed,
                 Vector::Zero(2));
  for (std::size_t k = 0; k < t.x_iterates.size(); ++k) {
    const double expected = std::pow(1.0 + gamma * gamma, k / 2.0);
    CHECK(std::abs(t.x_iterates[k].norm() - expected) <= 1e-12 * expected);
    if (k > 0) CHECK(t.x_iterates[k].norm() > t.x_iterates[k - 1].norm());
  }
}

TEST_CASE("forward divergence is reported with its step") {
  const OperatorSpec op = RotationOperator();
  const double gamma = 0.1;
  SolverConfig cfg = Config(Method::kForward, gamma, 100000, Vec2(1.0, 0.0));
  cfg.keep_iterates = false;
  cfg.divergence_factor = 1e3;
  // ||x^k|| = 1.01^(k/2) first exceeds 2000.
  std::int64_t expected = 0;
  while (std::pow(1.01, expected / 2.0) <= 2000.0) ++expected;
  try {
    RunForward(op, NoiseModel::None(), cfg, kSeed, Vector::Zero(2));
    FAIL("no divergence reported");
  } catch (const DivergenceError& e) {
    CHECK(e.step() == expected);
  }
}

TEST_CASE("forward iteration contracts the identity") {
  const OperatorSpec op =
      OperatorSpec::Affine(Matrix::Identity(4, 4), Vector::Zero(4));
  const Vector x0 = Vector::LinSpaced(4, -1.0, 2.0);
  const IterateTrace t =
      RunForward(op, NoiseModel::None(),
                 Config(Method::kForward, 0.5, 30, x0), kSeed,
                 Vector::Zero(4));
  for (std::size_t k = 0; k < t.x_iterates.size(); ++k) {
    CHECK(t.x_iterates[k].norm() ==
          doctest::Approx(std::pow(0.5, k) * x0.norm()).epsilon(1e-14));
  }
}

TEST_CASE("OGDA replay of oracle draws reproduces the iterates bitwise") {
  const BilinearProblem p = BuildBilinear(10);
  const double gamma = 0.125 / p.op.lipschitz();
  SolverConfig cfg = Config(Method::kOgda, gamma, 500, Vector::Zero(20));
  cfg.keep_oracle_draws = true;
  const NoiseModel noise = NoiseModel::IidGaussian(0.1);
  const IterateTrace t = RunOgda(p.op, noise, cfg, kSeed, p.zero.x_star);
  REQUIRE(t.oracle_draws.size() == 500);
  const NoisyOracle oracle(p.op, noise, kSeed.WithStream(Stream::kXi));
  CHECK(t.oracle_draws[0] == oracle.Eval(t.x_iterates[0], 1));
  CHECK(t.x_iterates[1] == t.x_iterates[0] - gamma * t.oracle_draws[0]);
  const double two_gamma = 2.0 * gamma;
  for (int k = 1; k < 500; ++k) {
    const Vector& x = t.x_iterates[k];
    CHECK(t.oracle_draws[k] == oracle.Eval(x, k + 1));
    const Vector next =
        x - two_gamma * t.oracle_draws[k] + gamma * t.oracle_draws[k - 1];
    CHECK(next == t.x_iterates[k + 1]);
  }
}

TEST_CASE("EG replay of oracle draws reproduces the iterates bitwise") {
  const BilinearProblem p = BuildBilinear(10);
  const double gamma = 0.5 / p.op.lipschitz();
  SolverConfig cfg = Config(Method::kEg, gamma, 300, Vector::Ones(20));
  cfg.keep_oracle_draws = true;
  const NoiseModel noise = NoiseModel::DecayingDirection(10.0);
  const IterateTrace t = RunEg(p.op, noise, cfg, kSeed, p.zero.x_star);
  REQUIRE(t.oracle_draws.size() == 601);
  const NoisyOracle xi(p.op, noise, kSeed.WithStream(Stream::kXi));
  const NoisyOracle eta(p.op, noise, kSeed.WithStream(Stream::kEta));
  for (int k = 0; k < 300; ++k) {
    const Vector& x = t.x_iterates[k];
    const Vector& gx = t.oracle_draws[2 * k];
    const Vector& gy = t.oracle_draws[2 * k + 1];
    CHECK(gx == xi.Eval(x, k + 1));
    CHECK(t.y_iterates[k] == x - gamma * gx);
    CHECK(gy == eta.Eval(t.y_iterates[k], k + 1));
    Vector next = x;
    next -= gamma * gy;
    CHECK(next == t.x_iterates[k + 1]);
  }
}

TEST_CASE("OGDA equals the discretized corrected dynamics") {
  // x^{k+1} - x^k + g M(x^k) - g M(x^{k-1}) = -g M(x^k), solved for x^{k+1}.
  const BilinearProblem p = BuildBilinear(10);
  const double gamma = 0.125 / p.op.lipschitz();
  SolverConfig cfg = Config(Method::kOgda, gamma, 100, Vector::Zero(20));
  cfg.x1 = Vector::Constant(20, 0.5);
  const IterateTrace t =
      RunOgda(p.op, NoiseModel::None(), cfg, kSeed, p.zero.x_star);
  Vector prev = cfg.x0;
  Vector cur = *cfg.x1;
  for (int k = 1; k < 100; ++k) {
    const Vector m_cur = p.op.Eval(cur);
    const Vector m_prev = p.op.Eval(prev);
    Vector next = cur;
    for (int i = 0; i < 20; ++i) {
      next(i) += -gamma * m_cur(i) + gamma * m_prev(i) - gamma * m_cur(i);
    }
    prev = cur;
    cur = next;
    CHECK((cur - t.x_iterates[k + 1]).norm() <= 1e-13 * (1.0 + cur.norm()));
  }
}

TEST_CASE("ergodic columns are recomputable from the raw columns") {
  const BilinearProblem p = BuildBilinear(10);
  const double l = p.op.lipschitz();
  struct Case {
    Method m;
    double gamma;
    std::int64_t sq_start, gap_start;
  };
  for (const Case& c : {Case{Method::kOgda, 0.125 / l, 1, 2},
                        Case{Method::kEg, 0.5 / l, 0, 0}}) {
    SolverConfig cfg = Config(c.m, c.gamma, 400, Vector::Zero(20));
    const IterateTrace t = RunMethod(p.op, NoiseModel::IidGaussian(0.1), cfg,
                                     kSeed, p.zero.x_star);
    const auto& sq = t.metrics[Metric::kNormMSq];
    const auto& gap = t.metrics[Metric::kGap];
    double s_sq = 0.0, s_gap = 0.0;
    for (std::size_t k = 0; k < sq.size(); ++k) {
      const auto kk = static_cast<std::int64_t>(k);
      if (kk >= c.sq_start) s_sq += sq[k];
      if (kk >= c.gap_start) s_gap += gap[k];
      const double e_sq = t.metrics[Metric::kErgodicNormMSq][k];
      const double e_gap = t.metrics[Metric::kErgodicGap][k];
      if (kk < c.sq_start) {
        CHECK(std::isnan(e_sq));
      } else {
        const double ref = s_sq / static_cast<double>(kk - c.sq_start + 1);
        CHECK(std::abs(e_sq - ref) <= 1e-12 * std::abs(ref));
      }
      if (kk < c.gap_start) {
        CHECK(std::isnan(e_gap));
      } else {
        const double ref = s_gap / static_cast<double>(kk - c.gap_start + 1);
        CHECK(std::abs(e_gap - ref) <= 1e-12 * (std::abs(ref) + 1e-300));
      }
    }
  }
}

TEST_CASE("noise-free bilinear OGDA stays below its bound") {
  const BilinearProblem p = BuildBilinear(10);
  const double l = p.op.lipschitz();
  const double gamma = 0.125 / l;
  const SolverConfig cfg = Config(Method::kOgda, gamma, 5000, Vector::Zero(20));
  const IterateTrace t =
      RunOgda(p.op, NoiseModel::None(), cfg, kSeed, p.zero.x_star);
  CHECK(t.warnings.empty());
  const auto& idx = t.metrics.index;
  for (std::size_t i = 2; i < idx.size(); ++i) {
    const auto k = static_cast<std::int64_t>(idx[i]);
    const double sq_bound = OgdaBound(k - 1, gamma, l, 0.0, t.x0, t.x1,
                                      p.zero.x_star, BoundKind::kSqNorm);
    const double gap_bound = OgdaBound(k - 2, gamma, l, 0.0, t.x0, t.x1,
                                       p.zero.x_star, BoundKind::kGap);
    CHECK(t.metrics[Metric::kErgodicNormMSq][i] <= sq_bound * (1 + 1e-9));
    CHECK(t.metrics[Metric::kErgodicGap][i] <= gap_bound * (1 + 1e-9));
  }
}

TEST_CASE("noise-free bilinear EG stays below its bound") {
  const BilinearProblem p = BuildBilinear(10);
  const double l = p.op.lipschitz();
  const double gamma = 0.5 / l;
  const SolverConfig cfg = Config(Method::kEg, gamma, 5000, Vector::Zero(20));
  const IterateTrace t =
      RunEg(p.op, NoiseModel::None(), cfg, kSeed, p.zero.x_star);
  CHECK(t.warnings.empty());
  for (std::size_t i = 0; i < t.metrics.index.size(); ++i) {
    const auto k = static_cast<std::int64_t>(t.metrics.index[i]);
    CHECK(t.metrics[Metric::kErgodicNormMSq][i] <=
          EgBound(k, gamma, l, 0.0, t.x0, p.zero.x_star, BoundKind::kSqNorm) *
              (1 + 1e-9));
    CHECK(t.metrics[Metric::kErgodicGap][i] <=
          EgBound(k, gamma, l, 0.0, t.x0, p.zero.x_star, BoundKind::kGap) *
              (1 + 1e-9));
  }
}

TEST_CASE("step-size regions") {
  const OperatorSpec op = RotationOperator();
  const Vector x0 = Vec2(1.0, 0.0);
  const Vector zs = Vector::Zero(2);
  CHECK(RunOgda(op, NoiseModel::None(), Config(Method::kOgda, 0.2, 3, x0),
                kSeed, zs)
            .warnings.empty());
  CHECK(RunOgda(op, NoiseModel::None(), Config(Method::kOgda, 0.3, 3, x0),
                kSeed, zs)
            .warnings.size() == 1);
  CHECK_THROWS_AS(RunOgda(op, NoiseModel::None(),
                          Config(Method::kOgda, 0.5, 3, x0), kSeed, zs),
                  HypothesisError);
  CHECK(RunEg(op, NoiseModel::None(), Config(Method::kEg, 0.57, 3, x0), kSeed,
              zs)
            .warnings.empty());
  CHECK(RunEg(op, NoiseModel::None(), Config(Method::kEg, 0.6, 3, x0), kSeed,
              zs)
            .warnings.size() == 1);
  CHECK_THROWS_AS(RunEg(op, NoiseModel::None(),
                        Config(Method::kEg, -1.0, 3, x0), kSeed, zs),
                  ParameterError);
  CHECK_THROWS_AS(RunEg(op, NoiseModel::None(),
                        Config(Method::kEg, 0.1, 3, Vector::Zero(3)), kSeed,
                        zs),
                  DimensionError);
  SolverConfig bad_x1 = Config(Method::kOgda, 0.1, 3, x0);
  bad_x1.x1 = Vector::Zero(5);
  CHECK_THROWS_AS(RunOgda(op, NoiseModel::None(), bad_x1, kSeed, zs),
                  DimensionError);
}

TEST_CASE("OGDA bound values") {
  CHECK(OgdaBound(0, 0.125, 1.0, 0.0, 1.0, 0.0, BoundKind::kSqNorm) ==
        doctest::Approx(640.0));
  const Vector zs = Vec2(0.5, -1.0);
  CHECK(OgdaBound(7, 0.1, 1.0, 0.0, zs, zs, zs, BoundKind::kSqNorm) == 0.0);
  CHECK(OgdaBound(7, 0.1, 1.0, 0.0, zs, zs, zs, BoundKind::kGap) == 0.0);
  const double g = 0.1, l = 2.0, s = 0.3;
  const double g2l2 = g * g * l * l;
  const double floor_sq = (16 * g2l2 + 11) / (1 - 16 * g2l2) * s * s;
  const double floor_gap = g * (16 * g2l2 + 11) / (4 * (1 - 4 * g2l2)) * s * s;
  const std::int64_t big = 1000000000000LL;
  CHECK(OgdaBound(big, g, l, s, 1.0, 1.0, BoundKind::kSqNorm) ==
        doctest::Approx(floor_sq).epsilon(1e-9));
  CHECK(OgdaBound(big, g, l, s, 1.0, 1.0, BoundKind::kGap) ==
        doctest::Approx(floor_gap).epsilon(1e-9));
  // Gap display at K = 0, L = 1, gamma = 1/8, sigma = 0, x1 = x0:
  // 2 * 1 / (1/8) = 16.
  CHECK(OgdaBound(0, 0.125, 1.0, 0.0, 1.0, 0.0, BoundKind::kGap) ==
        doctest::Approx(16.0));
  CHECK_THROWS_AS(OgdaBound(0, 0.25, 1.0, 0.0, 1.0, 0.0, BoundKind::kSqNorm),
                  HypothesisError);
}

TEST_CASE("EG bound values") {
  CHECK(EgBound(0, 0.5, 1.0, 0.0, 1.0, BoundKind::kSqNorm) ==
        doctest::Approx(2.0));
  CHECK(EgBound(0, 0.5, 1.0, 0.0, 1.0, BoundKind::kGap) ==
        doctest::Approx(1.0));
  const Vector zs = Vec2(0.5, -1.0);
  CHECK(EgBound(3, 0.5, 1.0, 0.0, zs, zs, BoundKind::kSqNorm) == 0.0);
  const double g = 0.2, l = 2.0, s = 0.3;
  const double floor_sq =
      g * g * (2 + 3 * l * l * g * g) / (1 - 3 * l * l * g * g) * s * s;
  CHECK(EgBound(1000000000000LL, g, l, s, 1.0, BoundKind::kSqNorm) ==
        doctest::Approx(floor_sq).epsilon(1e-9));
  CHECK(EgBound(1000000000000LL, g, l, s, 1.0, BoundKind::kGap) ==
        doctest::Approx(g * (2 + 3 * l * l * g * g) * s * s).epsilon(1e-9));
  CHECK_THROWS_AS(EgBound(0, 0.6, 1.0, 0.0, 1.0, BoundKind::kGap),
                  HypothesisError);
}

}  // namespace
}  // namespace monosde
