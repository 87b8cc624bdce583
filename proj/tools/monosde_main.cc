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

// Command line front end: run, plot, verify and list-problems.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "monosde/config.h"
#include "monosde/error.h"
#include "monosde/metrics.h"
#include "monosde/plot.h"
#include "monosde/runner.h"
#include "monosde/verify.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
  std::string config;
  std::string out;
  int threads = 1;
  std::optional<std::uint64_t> seed_override;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", flags.out, "output directory (overrides config)");
  cmd->add_option("--threads", flags.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed-override", flags.seed_override,
                  "replace the config's master_seed");
}

monosde::RunOptions ToOptions(const CommonFlags& flags) {
  monosde::RunOptions options;
  options.threads = flags.threads;
  if (!flags.out.empty()) options.out_dir = flags.out;
  options.seed_override = flags.seed_override;
  return options;
}

void PrintFailures(const monosde::ExperimentResult& result) {
  for (const auto& f : result.failures) {
    std::cerr << "cell failed: " << f.method << " replica " << f.replica
              << ": " << f.message << "\n";
  }
}

int Run(const CommonFlags& flags) {
  const monosde::ExperimentConfig cfg = monosde::LoadConfig(flags.config);
  const monosde::ExperimentResult result =
      monosde::RunExperiment(cfg, ToOptions(flags));
  std::cout << "problem: " << result.problem.description << "\n"
            << "L = " << result.problem.op.lipschitz() << "\n";
  for (const auto& m : result.methods) {
    std::cout << m.method << ": " << m.replicas_ok << "/"
              << result.config.replicas << " replicas";
    if (!m.csv_path.empty()) std::cout << " -> " << m.csv_path;
    std::cout << "\n";
    for (const auto& w : m.warnings) std::cout << "  warning: " << w << "\n";
  }
  std::cout << "manifest: "
            << (std::filesystem::path(result.config.output_dir) / "manifest.json")
                   .string()
            << "\nwall time: " << result.wall_seconds << " s\n";
  PrintFailures(result);
  return monosde::ExitCode(result);
}

int Verify(const CommonFlags& flags) {
  const monosde::ExperimentConfig cfg = monosde::LoadConfig(flags.config);
  monosde::RunOptions options = ToOptions(flags);
  options.write_files = !flags.out.empty();
  const monosde::ExperimentResult result = monosde::RunExperiment(cfg, options);
  PrintFailures(result);
  const monosde::VerifyReport report = monosde::VerifyBounds(result);
  monosde::PrintReport(std::cout, report);
  return report.all_pass && result.failures.empty() ? kExitOk : kExitRuntime;
}

int Plot(std::vector<std::string> csvs, const std::string& config,
         const std::string& metric_name, std::string out,
         const std::string& title) {
  monosde::Metric metric;
  try {
    metric = monosde::ParseMetric(metric_name);
  } catch (const monosde::ParameterError& e) {
    throw monosde::ConfigError("--metric", e.what());
  }
  monosde::PlotOptions options;
  options.title = title;
  if (!config.empty()) {
    const monosde::ExperimentConfig cfg = monosde::LoadConfig(config);
    for (const std::string& m : cfg.methods) {
      csvs.push_back((std::filesystem::path(cfg.output_dir) / (m + "_ensemble.csv"))
                         .string());
      if (m == "sde") options.x_label = "time t";
    }
    if (out.empty()) {
      out = (std::filesystem::path(cfg.output_dir) / (metric_name + ".svg")).string();
    }
    if (options.title.empty()) options.title = cfg.name;
  }
  if (out.empty()) throw monosde::ConfigError("--out", "output SVG path required");
  const monosde::PlotInfo info =
      monosde::PlotEnsembleFiles(csvs, metric, out, options);
  std::cout << "wrote " << out << " (" << info.points_per_series
            << " points per series, " << (info.log_y ? "log" : "linear")
            << " y axis)\n";
  return kExitOk;
}

int ListProblems() {
  for (const auto& [name, description] : monosde::ListProblems()) {
    std::cout << name << "\t" << description << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation of the corrected monotone SDE and stochastic "
               "OGDA/EG experiments"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "run all methods x replicas");
  AddCommonFlags(run, run_flags);

  CommonFlags verify_flags;
  CLI::App* verify =
      app.add_subcommand("verify", "run and compare against the bounds");
  AddCommonFlags(verify, verify_flags);

  std::vector<std::string> csvs;
  std::string plot_config, metric = "ergodic_norm_M_sq", plot_out, title;
  CLI::App* plot = app.add_subcommand("plot", "SVG of ensemble CSVs");
  plot->add_option("csv", csvs, "ensemble CSV files")->check(CLI::ExistingFile);
  plot->add_option("--config", plot_config,
                   "plot every method of a finished run")
      ->check(CLI::ExistingFile);
  plot->add_option("--metric", metric, "metric column to plot");
  plot->add_option("--out", plot_out, "output SVG path");
  plot->add_option("--title", title, "plot title");

  CLI::App* list = app.add_subcommand("list-problems", "built-in problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return Run(run_flags);
    if (*verify) return Verify(verify_flags);
    if (*plot) return Plot(csvs, plot_config, metric, plot_out, title);
    if (*list) return ListProblems();
  } catch (const monosde::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
