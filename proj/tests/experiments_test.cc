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

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "monosde/config.h"
#include "monosde/error.h"
#include "monosde/plot.h"
#include "monosde/runner.h"
#include "monosde/verify.h"

namespace monosde {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path ScratchDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "monosde_experiments_test" / name;
  fs::remove_all(dir);
  return dir;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string FieldOf(const json& j) {
  try {
    ValidateConfig(ConfigFromJson(j));
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

TEST_CASE("config round trips losslessly") {
  ExperimentConfig cfg;
  cfg.name = "round trip";
  cfg.problem = {"identity-strong", 4, 0.75, 2.5};
  cfg.methods = {"ogda", "sde", "forward"};
  cfg.initial_point = {"explicit", {0.1, -1.0 / 3.0, 1e-17, 12345.678901234567}};
  cfg.solver.iterations = 77;
  cfg.solver.stride = 3;
  cfg.solver.record_at = {5, 9};
  cfg.solver.ogda.gamma = 0.1 / 3.0;
  cfg.solver.ogda_x1 = std::vector<double>{1.0, 2.0, 3.0, 4.0};
  cfg.sde.mu = {"rational-decay", 0.9, 0.1};
  cfg.sde.diffusion.envelope = "power-decay";
  cfg.sde.diffusion.power = 0.75;
  cfg.noise = {"iid-gaussian", 0.3, 0.0};
  cfg.replicas = 9;
  cfg.master_seed = 18446744073709551615ULL;
  cfg.write_traces = true;
  const json j = ConfigToJson(cfg);
  CHECK(ConfigFromJson(j) == cfg);
  CHECK(ConfigFromJson(json::parse(j.dump())) == cfg);
  CHECK(ConfigToJson(ConfigFromJson(j)) == j);
  CHECK(ConfigFromJson(ConfigToJson(ExperimentConfig{})) == ExperimentConfig{});
}

TEST_CASE("shipped configs parse, validate and round trip") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(MONOSDE_SOURCE_DIR "/configs")) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    const ExperimentConfig cfg = LoadConfig(entry.path().string());
    CHECK(ConfigFromJson(ConfigToJson(cfg)) == cfg);
    if (entry.path().stem() == "eg_step_too_large") {
      CHECK_THROWS_AS(ValidateConfig(cfg), ConfigError);
    } else {
      CHECK_NOTHROW(ValidateConfig(cfg));
    }
  }
  CHECK(count >= 5);
}

TEST_CASE("config errors name the offending field") {
  const json base = ConfigToJson(ExperimentConfig{});
  json j = base;
  j["solver"]["iteratons"] = 5;
  CHECK(FieldOf(j) == "solver.iteratons");
  j = base;
  j["solver"]["iterations"] = 2.5;
  CHECK(FieldOf(j) == "solver.iterations");
  j = base;
  j["problem"]["kind"] = "banana";
  CHECK(FieldOf(j) == "problem.kind");
  j = base;
  j["methods"] = {"ogda", "ogda"};
  CHECK(FieldOf(j) == "methods");
  j = base;
  j["noise"]["kind"] = "pink";
  CHECK(FieldOf(j) == "noise.kind");
  j = base;
  j["initial_point"] = {1.0, 2.0};
  CHECK(FieldOf(j) == "initial_point");
  j = base;
  j["replicas"] = 0;
  CHECK(FieldOf(j) == "replicas");
  j = base;
  j["methods"] = {"sde"};
  j["sde"]["step"] = 0.5;
  CHECK(FieldOf(j) == "sde.step");
  j = base;
  j["methods"] = {"sde"};
  j["sde"]["diffusion"]["envelope"] = "power-decay";
  j["sde"]["diffusion"]["power"] = 0.4;
  CHECK(FieldOf(j) == "sde.diffusion.power");
  j = base;
  j["solver"]["ogda"]["gamma"] = 0.5;
  CHECK(FieldOf(j) == "solver.ogda.gamma");
}

TEST_CASE("EG with gamma = 1/L is rejected naming the hypothesis") {
  json j = ConfigToJson(ExperimentConfig{});
  j["methods"] = {"eg"};
  j["solver"]["eg"]["gamma"] = 1.0;
  try {
    ValidateConfig(ConfigFromJson(j));
    FAIL("accepted");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "solver.eg.gamma");
    CHECK(std::string(e.what()).find("gamma < 1/(sqrt(3) L)") !=
          std::string::npos);
  }
}

ExperimentConfig ZeroConfig(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.problem = {"zero", 3, 1.0, 1.0};
  cfg.methods = {"ogda", "eg"};
  cfg.initial_point.mode = "ones";
  cfg.solver.iterations = 10;
  cfg.solver.gamma_units = "absolute";
  cfg.solver.ogda.gamma = 0.1;
  cfg.solver.eg.gamma = 0.1;
  cfg.replicas = 1;
  cfg.output_dir = out.string();
  return cfg;
}

TEST_CASE("zero operator run gives stationary rows") {
  const fs::path out = ScratchDir("zero");
  const ExperimentResult r = RunExperiment(ZeroConfig(out), RunOptions{});
  CHECK(ExitCode(r) == 0);
  std::ifstream in(out / "ogda_ensemble.csv");
  const EnsembleSummary s = ReadEnsembleCsv(in);
  CHECK(s.index.size() == 11);
  for (std::size_t i = 0; i < s.index.size(); ++i) {
    CHECK(s.index[i] == static_cast<double>(i));
    CHECK(s[Metric::kNormMSq].mean[i] == 0.0);
    CHECK(s[Metric::kDistSq].mean[i] == 0.0);
  }
  CHECK(fs::exists(out / "eg_ensemble.csv"));
  CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("runs are deterministic across repeats and thread counts") {
  ExperimentConfig cfg;
  cfg.problem = {"bilinear", 4, 1.0, 1.0};
  cfg.methods = {"ogda", "eg", "sde"};
  cfg.solver.iterations = 300;
  cfg.noise = {"iid-gaussian", 0.2, 0.0};
  cfg.sde.horizon = 5.0;
  cfg.sde.step = 0.01;
  cfg.sde.diffusion.sigma_star = 0.1;
  cfg.replicas = 6;
  cfg.master_seed = 99;
  std::vector<std::string> names = {"ogda_ensemble.csv", "eg_ensemble.csv",
                                    "sde_ensemble.csv"};
  auto run = [&](const std::string& tag, int threads) {
    const fs::path out = ScratchDir(tag);
    RunOptions options;
    options.threads = threads;
    options.out_dir = out.string();
    const ExperimentResult r = RunExperiment(cfg, options);
    CHECK(ExitCode(r) == 0);
    std::vector<std::string> contents;
    for (const std::string& n : names) contents.push_back(Slurp(out / n));
    return contents;
  };
  const auto a = run("det_a", 1);
  const auto b = run("det_b", 1);
  const auto c = run("det_c", 4);
  CHECK(a == b);
  CHECK(a == c);
  RunOptions other;
  other.out_dir = ScratchDir("det_seed").string();
  other.seed_override = 100;
  RunExperiment(cfg, other);
  CHECK(Slurp(fs::path(*other.out_dir) / names[0]) != a[0]);
}

TEST_CASE("divergent cells are recorded as failures") {
  ExperimentConfig cfg;
  cfg.problem.kind = "rotation";
  cfg.methods = {"forward"};
  cfg.initial_point = {"explicit", {1.0, 0.0}};
  cfg.solver.iterations = 10000;
  cfg.solver.stride = 100;
  cfg.solver.forward.gamma = 0.1;
  cfg.replicas = 2;
  RunOptions options;
  options.out_dir = ScratchDir("diverge").string();
  const ExperimentResult r = RunExperiment(cfg, options);
  CHECK(ExitCode(r) == 1);
  REQUIRE(r.failures.size() == 2);
  CHECK(r.failures[0].step.has_value());
  CHECK(r.manifest["failures"].size() == 2);
}

TEST_CASE("manifest holds every constant the bounds need") {
  ExperimentConfig cfg;
  cfg.problem = {"bilinear", 3, 1.0, 1.0};
  cfg.methods = {"ogda", "eg", "sde"};
  cfg.solver.iterations = 20;
  cfg.noise = {"decaying-direction", 0.0, 10.0};
  cfg.sde.horizon = 2.0;
  cfg.sde.step = 0.01;
  cfg.replicas = 3;
  RunOptions options;
  options.out_dir = ScratchDir("manifest").string();
  RunExperiment(cfg, options);
  std::ifstream in(fs::path(*options.out_dir) / "manifest.json");
  const json m = json::parse(in);
  CHECK(ConfigFromJson(m["config"]) == [&] {
    ExperimentConfig c = cfg;
    c.output_dir = *options.out_dir;
    return c;
  }());
  CHECK(m["problem"]["lipschitz"].get<double>() > 0.0);
  CHECK(m["problem"]["x_star"].size() == 6);
  CHECK(m["problem"]["x0"].size() == 6);
  CHECK(m["noise"]["sigma_star"].get<double>() == 10.0);
  CHECK(m["seeds"]["master_seed"].get<std::uint64_t>() == 0);
  const json& ogda = m["methods"][0];
  CHECK(ogda["name"] == "ogda");
  CHECK(ogda["gamma"].get<double>() > 0.0);
  CHECK(ogda["x1_dist_sq"].size() == 3);
  CHECK(ogda["x1_x0_sq"].size() == 3);
  const json& sde = m["methods"][2];
  for (const char* key : {"step_used", "mu_up", "gamma_low", "sigma_star",
                          "strong_initial_energy", "lambda"}) {
    CHECK(sde.contains(key));
  }
}

EnsembleSummary ConstantSummary(double v, int n) {
  RunRecord r;
  for (int i = 0; i < n; ++i) r.Append(i, {v, v, v, v, v, v});
  const std::vector<RunRecord> rs = {r};
  return Aggregate(rs);
}

std::vector<double> PathYs(const std::string& svg, const std::string& cls) {
  std::vector<double> ys;
  const std::regex block(cls == "mean" ? "class=\"mean\"[^>]* d=\"([^\"]*)\""
                                       : "class=\"band\"[^>]* points=\"([^\"]*)\"");
  std::smatch m;
  if (!std::regex_search(svg, m, block)) return ys;
  const std::string body = m[1];
  const std::regex pt("[ML]?[-0-9.]+,([-0-9.]+)");
  for (auto it = std::sregex_iterator(body.begin(), body.end(), pt);
       it != std::sregex_iterator(); ++it) {
    ys.push_back(std::stod((*it)[1]));
  }
  return ys;
}

int Count(const std::string& s, const std::string& needle) {
  int n = 0;
  for (std::size_t p = s.find(needle); p != std::string::npos;
       p = s.find(needle, p + 1)) {
    ++n;
  }
  return n;
}

TEST_CASE("plot of a constant trace is a flat line with an empty band") {
  PlotInfo info;
  const std::string svg = RenderSvg({{"flat", ConstantSummary(0.5, 50)}},
                                    Metric::kNormMSq, PlotOptions{}, &info);
  CHECK(info.log_y);
  const std::vector<double> mean = PathYs(svg, "mean");
  const std::vector<double> band = PathYs(svg, "band");
  REQUIRE(mean.size() == 50);
  for (double y : mean) CHECK(y == mean.front());
  REQUIRE(band.size() == 100);
  for (double y : band) CHECK(y == mean.front());
  CHECK(svg == RenderSvg({{"flat", ConstantSummary(0.5, 50)}},
                         Metric::kNormMSq, PlotOptions{}));
}

TEST_CASE("plot layout, thinning and scale fallback") {
  const std::string two = RenderSvg(
      {{"ogda", ConstantSummary(1.0, 10)}, {"eg", ConstantSummary(2.0, 10)}},
      Metric::kGap, PlotOptions{});
  CHECK(Count(two, "class=\"band\"") == 2);
  CHECK(Count(two, "class=\"mean\"") == 2);
  CHECK(two.find(">ogda") != std::string::npos);
  CHECK(two.find(">eg") != std::string::npos);
  CHECK(two.find("iteration k") != std::string::npos);

  PlotInfo info;
  RenderSvg({{"long", ConstantSummary(1.0, 50001)}}, Metric::kGap,
            PlotOptions{}, &info);
  CHECK(info.points_per_series <= 2000);
  CHECK(info.points_per_series >= 1000);

  RenderSvg({{"neg", ConstantSummary(-1.0, 5)}}, Metric::kGap, PlotOptions{},
            &info);
  CHECK(!info.log_y);

  CHECK_THROWS_AS(RenderSvg({}, Metric::kGap, PlotOptions{}), ParameterError);
  CHECK_THROWS_AS(RenderSvg({{"a", ConstantSummary(1.0, 5)},
                             {"b", ConstantSummary(1.0, 6)}},
                            Metric::kGap, PlotOptions{}),
                  ParameterError);
}

TEST_CASE("ergodic mean of a converging run plots nonincreasing") {
  ExperimentConfig cfg;
  cfg.problem = {"bilinear", 10, 1.0, 1.0};
  cfg.methods = {"eg"};
  cfg.solver.iterations = 5000;
  cfg.solver.stride = 1;
  RunOptions options;
  options.write_files = false;
  const ExperimentResult r = RunExperiment(cfg, options);
  const std::string svg = RenderSvg({{"eg", r.methods[0].summary}},
                                    Metric::kErgodicNormMSq, PlotOptions{});
  const std::vector<double> ys = PathYs(svg, "mean");
  REQUIRE(ys.size() > 100);
  // Larger pixel y means a smaller value.
  for (std::size_t i = ys.size() / 100 + 1; i < ys.size(); ++i) {
    CHECK(ys[i] >= ys[i - 1]);
  }
}

TEST_CASE("log-spaced checkpoints") {
  std::vector<double> idx;
  for (int k = 0; k <= 1000; k += 10) idx.push_back(k);
  const auto pos = LogSpacedPositions(idx, 1.0, 5);
  REQUIRE(!pos.empty());
  CHECK(idx[pos.front()] == 10.0);
  CHECK(idx[pos.back()] == 1000.0);
  for (std::size_t i = 1; i < pos.size(); ++i) CHECK(pos[i] > pos[i - 1]);
}

TEST_CASE("log-spaced checkpoints stay distinct on a coarse grid") {
  std::vector<double> idx;
  for (int i = 1; i <= 200; ++i) idx.push_back(0.1 * i);
  const auto pos = LogSpacedPositions(idx, 0.1, 20);
  CHECK(pos.size() == 20);
  CHECK(pos.back() == idx.size() - 1);
  for (std::size_t i = 1; i < pos.size(); ++i) CHECK(pos[i] > pos[i - 1]);
}

TEST_CASE("noise-free bilinear runs pass every bound row") {
  ExperimentConfig cfg;
  cfg.problem = {"bilinear", 10, 1.0, 1.0};
  cfg.methods = {"ogda", "eg"};
  cfg.solver.iterations = 3000;
  RunOptions options;
  options.write_files = false;
  const VerifyReport report = VerifyBounds(RunExperiment(cfg, options));
  CHECK(report.all_pass);
  int ogda = 0, eg = 0;
  for (const VerifyRow& row : report.rows) {
    ogda += row.check.rfind("ogda", 0) == 0;
    eg += row.check.rfind("eg", 0) == 0;
  }
  CHECK(ogda >= 20);
  CHECK(eg >= 20);
}

}  // namespace
}  // namespace monosde
