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

#include "monosde/runner.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include "monosde/error.h"
#include "monosde/sde.h"
#include "monosde/solvers.h"

namespace monosde {
namespace {

using nlohmann::json;

// Runs body(i) for i in [0, count) on `threads` workers.
void ParallelFor(std::int64_t count, int threads,
                 const std::function<void(std::int64_t)>& body) {
  const int workers =
      static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(threads, count)));
  std::atomic<std::int64_t> next{0};
  auto loop = [&] {
    for (std::int64_t i = next++; i < count; i = next++) body(i);
  };
  if (workers == 1) {
    loop();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(loop);
  for (std::thread& t : pool) t.join();
}

struct CellOutcome {
  std::optional<RunRecord> record;
  std::optional<CellFailure> failure;
  std::vector<std::string> warnings;
  double x1_dist_sq = kNaN;
  double x1_x0_sq = kNaN;
  double sde_step = 0.0;
};

json VectorJson(const Vector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

void WriteFile(const std::filesystem::path& path,
               const std::function<void(std::ostream&)>& write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write(out);
  if (!out) throw Error("error while writing " + path.string());
}

}  // namespace

ExperimentResult RunExperiment(const ExperimentConfig& input,
                               const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig effective = input;
  if (options.seed_override) effective.master_seed = *options.seed_override;
  if (options.out_dir) effective.output_dir = *options.out_dir;
  ValidateConfig(effective);
  ExperimentResult result{effective, ResolveProblem(effective), {}, {}, 0.0, {}};
  const ExperimentConfig& cfg = result.config;
  const ResolvedProblem& problem = result.problem;
  const OperatorSpec& op = problem.op;
  const NoiseModel noise = ResolveNoise(cfg.noise);

  const std::filesystem::path out_dir(cfg.output_dir);
  if (options.write_files) {
    std::filesystem::create_directories(out_dir);
    if (cfg.write_traces) std::filesystem::create_directories(out_dir / "traces");
  }

  for (const std::string& name : cfg.methods) {
    MethodResult mr;
    mr.method = name;
    std::vector<CellOutcome> cells(static_cast<std::size_t>(cfg.replicas));
    const bool discrete = IsDiscreteMethod(name);
    SolverConfig scfg;
    ParamSchedule sched;
    DiffusionSpec diffusion;
    SdeConfig sdecfg;
    if (discrete) {
      scfg.method = ParseMethod(name);
      scfg.gamma = ResolveGamma(cfg.solver, scfg.method, op.lipschitz());
      scfg.iterations = cfg.solver.iterations;
      scfg.x0 = problem.x0;
      if (scfg.method == Method::kOgda && cfg.solver.ogda_x1) {
        scfg.x1 = Eigen::Map<const Vector>(cfg.solver.ogda_x1->data(),
                                           op.dimension());
      }
      scfg.stride = cfg.solver.stride;
      scfg.record_at = cfg.solver.record_at;
      mr.gamma = scfg.gamma;
    } else {
      sched = ResolveSchedule(cfg.sde);
      diffusion = ResolveDiffusion(cfg.sde.diffusion, op.dimension());
      sdecfg.horizon = cfg.sde.horizon;
      sdecfg.step = cfg.sde.step;
      sdecfg.x0 = problem.x0;
      sdecfg.stride = cfg.sde.stride;
      sdecfg.record_at = cfg.sde.record_at;
      mr.gamma = kNaN;
    }

    ParallelFor(cfg.replicas, options.threads, [&](std::int64_t r) {
      CellOutcome& cell = cells[static_cast<std::size_t>(r)];
      const SeedSpec seed{cfg.master_seed, static_cast<std::uint64_t>(r),
                          Stream::kXi};
      try {
        if (discrete) {
          IterateTrace t = RunMethod(op, noise, scfg, seed, problem.x_star);
          if (scfg.method == Method::kOgda) {
            cell.x1_dist_sq = (t.x1 - problem.x_star).squaredNorm();
            cell.x1_x0_sq = (t.x1 - t.x0).squaredNorm();
          }
          cell.warnings = std::move(t.warnings);
          cell.record = std::move(t.metrics);
        } else {
          SdeTrajectory t =
              Simulate(op, sched, diffusion, sdecfg, seed, problem.x_star);
          cell.sde_step = t.step;
          cell.warnings = std::move(t.warnings);
          cell.record = std::move(t.metrics);
        }
      } catch (const DivergenceError& e) {
        cell.failure = CellFailure{name, r, e.what(), e.step()};
      } catch (const std::exception& e) {
        cell.failure = CellFailure{name, r, e.what(), std::nullopt};
      }
    });

    std::vector<RunRecord> records;
    records.reserve(cells.size());
    for (CellOutcome& cell : cells) {
      for (const std::string& w : cell.warnings) {
        if (std::find(mr.warnings.begin(), mr.warnings.end(), w) ==
            mr.warnings.end()) {
          mr.warnings.push_back(w);
        }
      }
      if (cell.failure) {
        result.failures.push_back(*cell.failure);
        continue;
      }
      if (!std::isnan(cell.x1_dist_sq)) {
        mr.x1_dist_sq.push_back(cell.x1_dist_sq);
        mr.x1_x0_sq.push_back(cell.x1_x0_sq);
      }
      mr.sde_step = cell.sde_step;
      records.push_back(std::move(*cell.record));
    }
    cells.clear();
    mr.replicas_ok = static_cast<std::int64_t>(records.size());

    if (options.write_files && cfg.write_traces) {
      const char* index_name = discrete ? "k" : "t";
      for (std::size_t r = 0; r < records.size(); ++r) {
        WriteFile(out_dir / "traces" / (name + "_" + std::to_string(r) + ".csv"),
                  [&](std::ostream& os) {
                    WriteTraceCsv(os, records[r], index_name, discrete);
                  });
      }
    }
    if (!records.empty()) {
      mr.summary = Aggregate(records);
      records.clear();
      records.shrink_to_fit();
      if (options.write_files) {
        const std::filesystem::path csv = out_dir / (name + "_ensemble.csv");
        WriteFile(csv, [&](std::ostream& os) { WriteEnsembleCsv(os, mr.summary); });
        mr.csv_path = csv.string();
      }
    }
    result.methods.push_back(std::move(mr));
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  json manifest;
  manifest["config"] = ConfigToJson(cfg);
  manifest["problem"] = {{"description", problem.description},
                         {"dimension", op.dimension()},
                         {"lipschitz", op.lipschitz()},
                         {"strong_modulus", op.strong_modulus()},
                         {"x0", VectorJson(problem.x0)},
                         {"x_star", VectorJson(problem.x_star)},
                         {"x0_dist_sq", (problem.x0 - problem.x_star).squaredNorm()},
                         {"zero_residual", op.Eval(problem.x_star).norm()}};
  manifest["noise"] = {{"kind", NoiseKindName(noise.kind)},
                       {"sigma_star", noise.VarianceBound()}};
  manifest["seeds"] = {
      {"master_seed", cfg.master_seed},
      {"run_index", "replica index 0 .. replicas-1"},
      {"streams",
       {{"xi", static_cast<int>(Stream::kXi)},
        {"eta", static_cast<int>(Stream::kEta)},
        {"brownian", static_cast<int>(Stream::kBrownian)}}}};
  json methods = json::array();
  for (const MethodResult& mr : result.methods) {
    json m = {{"name", mr.method},
              {"replicas_ok", mr.replicas_ok},
              {"csv", mr.csv_path},
              {"warnings", mr.warnings}};
    if (IsDiscreteMethod(mr.method)) {
      m["gamma"] = mr.gamma;
      m["gamma_times_L"] = mr.gamma * op.lipschitz();
      m["iterations"] = cfg.solver.iterations;
      if (!mr.x1_dist_sq.empty()) {
        m["x1_dist_sq"] = mr.x1_dist_sq;
        m["x1_x0_sq"] = mr.x1_x0_sq;
      }
    } else {
      const ParamSchedule sched = ResolveSchedule(cfg.sde);
      const DiffusionSpec diffusion =
          ResolveDiffusion(cfg.sde.diffusion, op.dimension());
      m["step_used"] = mr.sde_step;
      m["mu_up"] = sched.mu.up;
      m["gamma_low"] = sched.gamma.Lower();
      m["sigma_star"] = diffusion.SigmaStar();
      m["sigma_square_integral"] = diffusion.SquareIntegral();
      m["strong_initial_energy"] =
          StrongInitialEnergy(op, problem.x0, problem.x_star, sched.mu.up);
      m["lambda"] = cfg.sde.lambda;
    }
    methods.push_back(std::move(m));
  }
  manifest["methods"] = std::move(methods);
  json failures = json::array();
  for (const CellFailure& f : result.failures) {
    json e = {{"method", f.method}, {"replica", f.replica}, {"message", f.message}};
    if (f.step) e["step"] = *f.step;
    failures.push_back(std::move(e));
  }
  manifest["failures"] = std::move(failures);
  manifest["threads"] = options.threads;
  manifest["wall_time_seconds"] = result.wall_seconds;
  if (options.write_files) {
    WriteFile(out_dir / "manifest.json",
              [&](std::ostream& os) { os << manifest.dump(2) << "\n"; });
  }
  result.manifest = std::move(manifest);
  return result;
}

int ExitCode(const ExperimentResult& result) {
  return result.failures.empty() ? 0 : 1;
}

}  // namespace monosde
