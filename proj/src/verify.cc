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

#include "monosde/verify.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "monosde/error.h"
#include "monosde/sde.h"
#include "monosde/solvers.h"

namespace monosde {
namespace {

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? kNaN : s / static_cast<double>(v.size());
}

void AddRow(VerifyReport& report, VerifyRow row) {
  row.pass = std::isfinite(row.empirical) &&
             row.empirical <= row.bound + row.allowance;
  report.all_pass = report.all_pass && row.pass;
  report.rows.push_back(std::move(row));
}

}  // namespace

std::vector<std::size_t> LogSpacedPositions(const std::vector<double>& index,
                                            double first, int count) {
  std::vector<std::size_t> out;
  if (index.empty() || count <= 0) return out;
  const double last = index.back();
  first = std::max(first, index.front());
  if (first > last) return out;
  const double lf = std::log(std::max(first, 1e-300));
  const double ll = std::log(std::max(last, 1e-300));
  for (int j = 0; j < count; ++j) {
    const double target =
        count == 1 ? last : std::exp(lf + (ll - lf) * j / (count - 1.0));
    const auto it = std::lower_bound(index.begin(), index.end(),
                                     std::max(first, target * (1 - 1e-12)));
    if (it == index.end()) continue;
    auto pos = static_cast<std::size_t>(it - index.begin());
    // On a coarse grid neighbouring targets can share a sample; advance so
    // the checkpoints stay distinct.
    if (!out.empty() && pos <= out.back()) pos = out.back() + 1;
    if (pos < index.size()) out.push_back(pos);
  }
  return out;
}

VerifyReport VerifyBounds(const ExperimentResult& result, int checkpoints) {
  VerifyReport report;
  const ExperimentConfig& cfg = result.config;
  const OperatorSpec& op = result.problem.op;
  const double l = op.lipschitz();
  const NoiseModel noise = ResolveNoise(cfg.noise);
  const double sigma = noise.VarianceBound();
  const bool noisy = noise.kind != NoiseModel::Kind::kNone && sigma > 0.0;
  const Vector& x0 = result.problem.x0;
  const Vector& x_star = result.problem.x_star;
  const double x0_dist_sq = (x0 - x_star).squaredNorm();

  for (const MethodResult& mr : result.methods) {
    if (mr.replicas_ok == 0) {
      report.notes.push_back(mr.method + ": no finished replicas");
      report.all_pass = false;
      continue;
    }
    const EnsembleSummary& s = mr.summary;
    auto check = [&](const std::string& name, Metric metric, double first,
                     double scale,
                     const std::function<double(double)>& bound,
                     const std::function<double(double, double)>& allowance) {
      for (std::size_t pos : LogSpacedPositions(s.index, first, checkpoints)) {
        VerifyRow row;
        row.check = name;
        row.index = s.index[pos];
        row.empirical = scale * s[metric].mean[pos];
        row.stderr_ = scale * s[metric].stderr_[pos];
        row.bound = bound(row.index);
        row.allowance = allowance(row.bound, row.stderr_);
        AddRow(report, std::move(row));
      }
    };
    auto discrete_allowance = [&](double bound, double se) {
      return noisy ? 3.0 * se : 1e-9 * std::abs(bound);
    };

    if (mr.method == "ogda") {
      const double gamma = mr.gamma;
      if (!(gamma < OgdaBoundStepLimit(l))) {
        report.notes.push_back("ogda: gamma >= 1/(4L), bound rows skipped");
        continue;
      }
      const double d1 = Mean(mr.x1_dist_sq);
      const double d10 = Mean(mr.x1_x0_sq);
      check("ogda-sqnorm", Metric::kErgodicNormMSq, 1.0, 1.0,
            [&](double k) {
              return OgdaBound(static_cast<std::int64_t>(k) - 1, gamma, l,
                               sigma, d1, d10, BoundKind::kSqNorm);
            },
            discrete_allowance);
      check("ogda-gap", Metric::kErgodicGap, 2.0, 1.0,
            [&](double k) {
              return OgdaBound(static_cast<std::int64_t>(k) - 2, gamma, l,
                               sigma, d1, d10, BoundKind::kGap);
            },
            discrete_allowance);
    } else if (mr.method == "eg") {
      const double gamma = mr.gamma;
      if (!(gamma < EgBoundStepLimit(l))) {
        report.notes.push_back("eg: gamma >= 1/(sqrt(3) L), bound rows skipped");
        continue;
      }
      for (auto [name, kind, metric] :
           {std::tuple{"eg-sqnorm", BoundKind::kSqNorm, Metric::kErgodicNormMSq},
            std::tuple{"eg-gap", BoundKind::kGap, Metric::kErgodicGap}}) {
        check(name, metric, 1.0, 1.0,
              [&, kind = kind](double k) {
                return EgBound(static_cast<std::int64_t>(k), gamma, l, sigma,
                               x0_dist_sq, kind);
              },
              discrete_allowance);
      }
    } else if (mr.method == "sde") {
      const ParamSchedule sched = ResolveSchedule(cfg.sde);
      const DiffusionSpec diffusion =
          ResolveDiffusion(cfg.sde.diffusion, op.dimension());
      const double discretization = 10.0 * mr.sde_step * (1.0 + l);
      auto sde_allowance = [&](double, double se) {
        return discretization + 3.0 * se;
      };
      ContinuousBoundParams base;
      base.lipschitz = l;
      base.sigma_star = diffusion.SigmaStar();
      base.mu_up = sched.mu.up;
      base.gamma = sched.gamma.Lower();
      base.dist0 = std::sqrt(x0_dist_sq);
      base.kappa = op.strong_modulus();
      base.g0 = StrongInitialEnergy(op, x0, x_star, sched.mu.up);
      base.lambda = cfg.sde.lambda;
      const double first = s.index.size() > 1 ? s.index[1] : 1.0;
      for (auto [name, kind, metric] :
           {std::tuple{"sde-gap", ContinuousBoundKind::kGap, Metric::kErgodicGap},
            std::tuple{"sde-sqnorm", ContinuousBoundKind::kSqNorm,
                       Metric::kErgodicNormMSq}}) {
        check(name, metric, first, 1.0,
              [&, kind = kind](double t) {
                ContinuousBoundParams p = base;
                p.t = t;
                p.mu_t = sched.mu.Value(t);
                return ContinuousBound(kind, p);
              },
              sde_allowance);
      }
      if (base.kappa >= 1.0 / (2.0 * base.mu_up)) {
        const bool refined =
            diffusion.envelope == DiffusionSpec::Envelope::kPowerDecay;
        check("sde-strong", Metric::kDistSq, first, 0.5,
              [&](double t) {
                ContinuousBoundParams p = base;
                p.t = t;
                p.mu_t = sched.mu.Value(t);
                if (refined) {
                  p.sigma_inf_at_lambda_t = diffusion.SigmaInf(p.lambda * t);
                }
                return ContinuousBound(ContinuousBoundKind::kStrong, p);
              },
              sde_allowance);
      } else {
        report.notes.push_back(
            "sde: operator not strongly monotone with kappa >= 1/(2 mu_up), "
            "strong bound rows skipped");
      }
    } else {
      report.notes.push_back(mr.method + ": no bound to check");
    }
  }
  if (report.rows.empty()) report.notes.push_back("no bound rows produced");
  return report;
}

void PrintReport(std::ostream& out, const VerifyReport& report) {
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %12s %14s %12s %14s %12s  %s\n",
                "check", "K_or_t", "empirical", "stderr", "bound",
                "allowance", "result");
  out << line;
  for (const VerifyRow& r : report.rows) {
    std::snprintf(line, sizeof(line),
                  "%-12s %12g %14.6e %12.3e %14.6e %12.3e  %s\n",
                  r.check.c_str(), r.index, r.empirical, r.stderr_, r.bound,
                  r.allowance, r.pass ? "PASS" : "FAIL");
    out << line;
  }
  for (const std::string& n : report.notes) out << "note: " << n << "\n";
  out << (report.all_pass ? "all bound checks passed" : "some bound checks FAILED")
      << "\n";
}

}  // namespace monosde
