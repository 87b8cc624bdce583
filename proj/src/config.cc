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

#include "monosde/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "monosde/error.h"

namespace monosde {
namespace {

using nlohmann::json;

// Reads one JSON object, tracking which keys were consumed so that unknown
// (typically misspelled) keys can be reported.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(Label(), "expected an object");
  }

  std::string Field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* Find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void Get(const std::string& key, double& out) {
    if (const json* v = Find(key)) {
      if (!v->is_number()) throw ConfigError(Field(key), "expected a number");
      out = v->get<double>();
    }
  }

  void Get(const std::string& key, int& out) {
    std::int64_t v = out;
    Get(key, v);
    out = static_cast<int>(v);
  }

  void Get(const std::string& key, std::int64_t& out) {
    if (const json* v = Find(key)) {
      if (!v->is_number_integer()) {
        throw ConfigError(Field(key), "expected an integer");
      }
      out = v->get<std::int64_t>();
    }
  }

  void Get(const std::string& key, std::uint64_t& out) {
    if (const json* v = Find(key)) {
      if (!v->is_number_unsigned()) {
        throw ConfigError(Field(key), "expected a nonnegative integer");
      }
      out = v->get<std::uint64_t>();
    }
  }

  void Get(const std::string& key, bool& out) {
    if (const json* v = Find(key)) {
      if (!v->is_boolean()) throw ConfigError(Field(key), "expected a boolean");
      out = v->get<bool>();
    }
  }

  void Get(const std::string& key, std::string& out) {
    if (const json* v = Find(key)) {
      if (!v->is_string()) throw ConfigError(Field(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void Get(const std::string& key, std::vector<double>& out) {
    if (const json* v = Find(key)) out = Doubles(*v, Field(key));
  }

  void Get(const std::string& key, std::vector<std::int64_t>& out) {
    if (const json* v = Find(key)) {
      if (!v->is_array()) throw ConfigError(Field(key), "expected an array");
      out.clear();
      for (const json& e : *v) {
        if (!e.is_number_integer()) {
          throw ConfigError(Field(key), "expected an array of integers");
        }
        out.push_back(e.get<std::int64_t>());
      }
    }
  }

  void Get(const std::string& key, std::vector<std::string>& out) {
    if (const json* v = Find(key)) {
      if (!v->is_array()) throw ConfigError(Field(key), "expected an array");
      out.clear();
      for (const json& e : *v) {
        if (!e.is_string()) {
          throw ConfigError(Field(key), "expected an array of strings");
        }
        out.push_back(e.get<std::string>());
      }
    }
  }

  void Finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) {
        throw ConfigError(Field(item.key()), "unknown key");
      }
    }
  }

  static std::vector<double> Doubles(const json& v, const std::string& field) {
    if (!v.is_array()) throw ConfigError(field, "expected an array");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) throw ConfigError(field, "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

 private:
  std::string Label() const { return path_.empty() ? "<root>" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ScheduleConfig ReadSchedule(const json& j, const std::string& path) {
  ScheduleConfig s;
  ObjectReader r(j, path);
  r.Get("kind", s.kind);
  r.Get("up", s.up);
  s.low = s.up;
  r.Get("low", s.low);
  r.Finish();
  return s;
}

json ScheduleToJson(const ScheduleConfig& s) {
  return {{"kind", s.kind}, {"up", s.up}, {"low", s.low}};
}

std::string Num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void Require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

void ValidateSchedule(const ScheduleConfig& s, const std::string& field) {
  Require(s.kind == "constant" || s.kind == "rational-decay", field + ".kind",
          "expected \"constant\" or \"rational-decay\", got \"" + s.kind + "\"");
  Require(s.up > 0.0 && std::isfinite(s.up), field + ".up",
          "must be positive and finite");
  if (s.kind == "rational-decay") {
    Require(s.low > 0.0 && s.low <= s.up, field + ".low",
            "rational decay needs 0 < low <= up");
  }
}

}  // namespace

ExperimentConfig ConfigFromJson(const json& j) {
  ExperimentConfig cfg;
  ObjectReader root(j, "");
  root.Get("name", cfg.name);
  if (const json* p = root.Find("problem")) {
    ObjectReader r(*p, "problem");
    r.Get("kind", cfg.problem.kind);
    r.Get("n", cfg.problem.n);
    r.Get("kappa", cfg.problem.kappa);
    r.Get("rotation", cfg.problem.rotation);
    r.Finish();
  }
  root.Get("methods", cfg.methods);
  if (const json* p = root.Find("initial_point")) {
    if (p->is_string()) {
      cfg.initial_point.mode = p->get<std::string>();
    } else {
      cfg.initial_point.mode = "explicit";
      cfg.initial_point.values = ObjectReader::Doubles(*p, "initial_point");
    }
  }
  if (const json* p = root.Find("solver")) {
    ObjectReader r(*p, "solver");
    SolverSection& s = cfg.solver;
    r.Get("iterations", s.iterations);
    r.Get("stride", s.stride);
    r.Get("record_at", s.record_at);
    r.Get("gamma_units", s.gamma_units);
    for (auto [key, step] : {std::pair{"ogda", &s.ogda}, std::pair{"eg", &s.eg},
                             std::pair{"forward", &s.forward}}) {
      if (const json* m = r.Find(key)) {
        ObjectReader mr(*m, r.Field(key));
        mr.Get("gamma", step->gamma);
        if (std::string(key) == "ogda") {
          if (const json* x1 = mr.Find("x1")) {
            s.ogda_x1 = ObjectReader::Doubles(*x1, mr.Field("x1"));
          }
        }
        mr.Finish();
      }
    }
    r.Finish();
  }
  if (const json* p = root.Find("sde")) {
    ObjectReader r(*p, "sde");
    SdeSection& s = cfg.sde;
    r.Get("horizon", s.horizon);
    r.Get("step", s.step);
    r.Get("stride", s.stride);
    r.Get("record_at", s.record_at);
    r.Get("lambda", s.lambda);
    if (const json* m = r.Find("mu")) s.mu = ReadSchedule(*m, "sde.mu");
    if (const json* m = r.Find("gamma")) s.gamma = ReadSchedule(*m, "sde.gamma");
    if (const json* d = r.Find("diffusion")) {
      ObjectReader dr(*d, "sde.diffusion");
      dr.Get("sigma_star", s.diffusion.sigma_star);
      dr.Get("envelope", s.diffusion.envelope);
      dr.Get("power", s.diffusion.power);
      dr.Get("coupling", s.diffusion.coupling);
      dr.Get("coupling_cap", s.diffusion.coupling_cap);
      dr.Finish();
    }
    r.Finish();
  }
  if (const json* p = root.Find("noise")) {
    ObjectReader r(*p, "noise");
    r.Get("kind", cfg.noise.kind);
    r.Get("sigma_star", cfg.noise.sigma_star);
    r.Get("decay_std", cfg.noise.decay_std);
    r.Finish();
  }
  root.Get("replicas", cfg.replicas);
  root.Get("master_seed", cfg.master_seed);
  root.Get("output_dir", cfg.output_dir);
  root.Get("write_traces", cfg.write_traces);
  root.Finish();
  return cfg;
}

json ConfigToJson(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["problem"] = {{"kind", cfg.problem.kind},
                  {"n", cfg.problem.n},
                  {"kappa", cfg.problem.kappa},
                  {"rotation", cfg.problem.rotation}};
  j["methods"] = cfg.methods;
  if (cfg.initial_point.mode == "explicit") {
    j["initial_point"] = cfg.initial_point.values;
  } else {
    j["initial_point"] = cfg.initial_point.mode;
  }
  const SolverSection& s = cfg.solver;
  json ogda = {{"gamma", s.ogda.gamma}};
  if (s.ogda_x1) ogda["x1"] = *s.ogda_x1;
  j["solver"] = {{"iterations", s.iterations},
                 {"stride", s.stride},
                 {"record_at", s.record_at},
                 {"gamma_units", s.gamma_units},
                 {"ogda", ogda},
                 {"eg", {{"gamma", s.eg.gamma}}},
                 {"forward", {{"gamma", s.forward.gamma}}}};
  const SdeSection& d = cfg.sde;
  j["sde"] = {{"horizon", d.horizon},
              {"step", d.step},
              {"stride", d.stride},
              {"record_at", d.record_at},
              {"lambda", d.lambda},
              {"mu", ScheduleToJson(d.mu)},
              {"gamma", ScheduleToJson(d.gamma)},
              {"diffusion",
               {{"sigma_star", d.diffusion.sigma_star},
                {"envelope", d.diffusion.envelope},
                {"power", d.diffusion.power},
                {"coupling", d.diffusion.coupling},
                {"coupling_cap", d.diffusion.coupling_cap}}}};
  j["noise"] = {{"kind", cfg.noise.kind},
                {"sigma_star", cfg.noise.sigma_star},
                {"decay_std", cfg.noise.decay_std}};
  j["replicas"] = cfg.replicas;
  j["master_seed"] = cfg.master_seed;
  j["output_dir"] = cfg.output_dir;
  j["write_traces"] = cfg.write_traces;
  return j;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return ConfigFromJson(j);
}

ResolvedProblem ResolveProblem(const ExperimentConfig& cfg) {
  const ProblemConfig& p = cfg.problem;
  std::optional<BilinearProblem> bilinear;
  std::optional<OperatorSpec> op;
  std::string description;
  if (p.kind == "bilinear") {
    Require(p.n >= 2, "problem.n", "bilinear problem needs n >= 2");
    bilinear = BuildBilinear(p.n);
    op = bilinear->op;
    description = "bilinear-quadratic saddle problem, n = " +
                  std::to_string(p.n) + " (dimension " +
                  std::to_string(2 * p.n) + ")";
  } else if (p.kind == "rotation") {
    op = RotationOperator();
    description = "rotation by pi/2 in the plane";
  } else if (p.kind == "identity-strong") {
    Require(p.n >= 2 && p.n % 2 == 0, "problem.n",
            "identity-strong needs an even n >= 2");
    Require(p.kappa > 0.0, "problem.kappa", "must be positive");
    op = StrongRotationOperator(p.n, p.kappa, p.rotation);
    description = "kappa * I + rotation blocks, n = " + std::to_string(p.n) +
                  ", kappa = " + Num(p.kappa) + ", omega = " + Num(p.rotation);
  } else if (p.kind == "zero") {
    Require(p.n >= 1, "problem.n", "must be >= 1");
    op = ZeroOperator(p.n);
    description = "zero operator, n = " + std::to_string(p.n);
  } else {
    throw ConfigError("problem.kind",
                      "unknown problem \"" + p.kind +
                          "\" (expected bilinear, rotation, identity-strong "
                          "or zero)");
  }
  const int n = op->dimension();
  const InitialPointConfig& init = cfg.initial_point;
  Vector x0;
  if (init.mode == "zeros") {
    x0 = Vector::Zero(n);
  } else if (init.mode == "ones") {
    x0 = Vector::Ones(n);
  } else if (init.mode == "explicit") {
    Require(static_cast<int>(init.values.size()) == n, "initial_point",
            "expected " + std::to_string(n) + " entries, got " +
                std::to_string(init.values.size()));
    x0 = Eigen::Map<const Vector>(init.values.data(), n);
  } else {
    throw ConfigError("initial_point",
                      "expected \"zeros\", \"ones\" or an array, got \"" +
                          init.mode + "\"");
  }
  Vector x_star = p.kind == "zero" ? x0 : bilinear ? bilinear->zero.x_star
                                                   : ComputeZero(*op).x_star;
  return ResolvedProblem{description, *op, x0, x_star, bilinear};
}

NoiseModel ResolveNoise(const NoiseConfig& noise) {
  NoiseModel::Kind kind;
  try {
    kind = ParseNoiseKind(noise.kind);
  } catch (const Error&) {
    throw ConfigError("noise.kind",
                      "unknown noise model \"" + noise.kind +
                          "\" (expected none, iid-gaussian or "
                          "decaying-direction)");
  }
  switch (kind) {
    case NoiseModel::Kind::kNone:
      return NoiseModel::None();
    case NoiseModel::Kind::kIidGaussian:
      Require(noise.sigma_star >= 0.0, "noise.sigma_star", "must be >= 0");
      return NoiseModel::IidGaussian(noise.sigma_star);
    case NoiseModel::Kind::kDecayingDirection:
      Require(noise.decay_std >= 0.0, "noise.decay_std", "must be >= 0");
      return NoiseModel::DecayingDirection(noise.decay_std);
  }
  throw ConfigError("noise.kind", "unknown noise model");
}

ParamSchedule ResolveSchedule(const SdeSection& sde) {
  auto make = [](const ScheduleConfig& s) {
    return s.kind == "constant" ? ScalarSchedule::Constant(s.up)
                                : ScalarSchedule::RationalDecay(s.up, s.low);
  };
  return ParamSchedule{make(sde.mu), make(sde.gamma)};
}

DiffusionSpec ResolveDiffusion(const DiffusionConfig& d, int n) {
  DiffusionSpec spec = DiffusionSpec::Isotropic(n, d.sigma_star);
  spec.envelope = d.envelope == "power-decay"
                      ? DiffusionSpec::Envelope::kPowerDecay
                      : DiffusionSpec::Envelope::kConstant;
  spec.power = d.power;
  spec.coupling = d.coupling;
  spec.coupling_cap = d.coupling_cap;
  if (d.coupling > 0.0) spec.coupling_matrix = Matrix::Identity(n, n);
  return spec;
}

double ResolveGamma(const SolverSection& solver, Method method,
                    double lipschitz) {
  const double value = method == Method::kOgda ? solver.ogda.gamma
                       : method == Method::kEg ? solver.eg.gamma
                                               : solver.forward.gamma;
  if (solver.gamma_units == "absolute" || !(lipschitz > 0.0)) return value;
  return value / lipschitz;
}

bool IsDiscreteMethod(const std::string& name) {
  return name == "ogda" || name == "eg" || name == "forward";
}

Method ParseMethod(const std::string& name) {
  if (name == "ogda") return Method::kOgda;
  if (name == "eg") return Method::kEg;
  if (name == "forward") return Method::kForward;
  throw ConfigError("methods", "not a discrete method: \"" + name + "\"");
}

void ValidateConfig(const ExperimentConfig& cfg) {
  const ResolvedProblem problem = ResolveProblem(cfg);
  const double l = problem.op.lipschitz();
  const int n = problem.op.dimension();

  Require(!cfg.methods.empty(), "methods", "at least one method is required");
  std::set<std::string> seen;
  bool any_discrete = false, any_sde = false;
  for (const std::string& m : cfg.methods) {
    Require(IsDiscreteMethod(m) || m == "sde", "methods",
            "unknown method \"" + m + "\" (expected ogda, eg, forward or sde)");
    Require(seen.insert(m).second, "methods", "duplicate method \"" + m + "\"");
    any_discrete |= IsDiscreteMethod(m);
    any_sde |= m == "sde";
  }
  Require(cfg.replicas >= 1, "replicas", "must be >= 1");
  ResolveNoise(cfg.noise);

  if (any_discrete) {
    const SolverSection& s = cfg.solver;
    Require(s.iterations >= 1, "solver.iterations", "must be >= 1");
    Require(s.stride >= 1, "solver.stride", "must be >= 1");
    for (std::int64_t k : s.record_at) {
      Require(k >= 0 && k <= s.iterations, "solver.record_at",
              "indices must lie in [0, iterations]");
    }
    Require(s.gamma_units == "per_L" || s.gamma_units == "absolute",
            "solver.gamma_units", "expected \"per_L\" or \"absolute\"");
    for (const std::string& m : cfg.methods) {
      if (!IsDiscreteMethod(m)) continue;
      const Method method = ParseMethod(m);
      const double gamma = ResolveGamma(s, method, l);
      const std::string field = "solver." + m + ".gamma";
      Require(gamma > 0.0 && std::isfinite(gamma), field, "must be positive");
      if (method == Method::kOgda) {
        Require(gamma < OgdaStableStepLimit(l), field,
                "violates the OGDA hypothesis gamma < 1/(2L): gamma = " +
                    Num(gamma) + ", 1/(2L) = " + Num(OgdaStableStepLimit(l)));
      } else if (method == Method::kEg) {
        Require(gamma < EgBoundStepLimit(l), field,
                "violates the EG hypothesis gamma < 1/(sqrt(3) L): gamma = " +
                    Num(gamma) + ", 1/(sqrt(3) L) = " +
                    Num(EgBoundStepLimit(l)));
      }
    }
    if (s.ogda_x1) {
      Require(static_cast<int>(s.ogda_x1->size()) == n, "solver.ogda.x1",
              "expected " + std::to_string(n) + " entries");
    }
  }

  if (any_sde) {
    const SdeSection& d = cfg.sde;
    Require(d.horizon > 0.0 && std::isfinite(d.horizon), "sde.horizon",
            "must be positive");
    Require(d.step > 0.0, "sde.step", "must be positive");
    const double limit = std::min(l > 0.0 ? 0.1 / l : INFINITY, 0.01 * d.horizon);
    Require(d.step <= limit * (1.0 + 1e-12), "sde.step",
            "violates h <= min(0.1/L, 0.01 T) = " + Num(limit));
    Require(d.stride >= 1, "sde.stride", "must be >= 1");
    Require(d.lambda > 0.0 && d.lambda < 1.0, "sde.lambda",
            "must lie in (0, 1)");
    ValidateSchedule(d.mu, "sde.mu");
    ValidateSchedule(d.gamma, "sde.gamma");
    const DiffusionConfig& f = d.diffusion;
    Require(f.sigma_star >= 0.0, "sde.diffusion.sigma_star", "must be >= 0");
    Require(f.envelope == "constant" || f.envelope == "power-decay",
            "sde.diffusion.envelope",
            "expected \"constant\" or \"power-decay\"");
    if (f.envelope == "power-decay") {
      Require(f.power > 0.5, "sde.diffusion.power",
              "must exceed 1/2 for a square-integrable envelope");
    }
    Require(f.coupling >= 0.0, "sde.diffusion.coupling", "must be >= 0");
    Require(f.coupling_cap > 0.0, "sde.diffusion.coupling_cap",
            "must be positive");
  }
}

std::vector<std::pair<std::string, std::string>> ListProblems() {
  return {
      {"bilinear",
       "bilinear-quadratic saddle problem on R^(2n); params: n (default 10)"},
      {"rotation", "rotation by pi/2 in the plane (monotone, not strongly)"},
      {"identity-strong",
       "kappa * I + omega * rotation blocks on R^n; params: n (even), kappa, "
       "rotation"},
      {"zero", "zero operator on R^n; params: n"},
  };
}

}  // namespace monosde
