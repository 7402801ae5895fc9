/* Copyright 2026 The etdos Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "etdos/scenario.h"

#include <initializer_list>
#include <string_view>

#include "etdos/errors.h"

namespace etdos {

namespace {

using io::Json;

void RejectUnknown(const Json& j, std::string_view where,
                   std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) {
    throw ConfigError(std::string(where) + " must be an object");
  }
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) {
      throw ConfigError("unknown field " + std::string(where) + "." + key);
    }
  }
}

std::string Path(std::string_view where, std::string_view key) {
  return std::string(where) + "." + std::string(key);
}

const Json& Need(const Json& j, std::string_view where, std::string_view key) {
  if (!j.contains(key)) throw ConfigError("missing field " + Path(where, key));
  return j.at(std::string(key));
}

double Number(const Json& j, std::string_view where, std::string_view key) {
  const Json& v = Need(j, where, key);
  if (!v.is_number()) {
    throw ConfigError("field " + Path(where, key) + " must be a number");
  }
  return v.get<double>();
}

double NumberOr(const Json& j, std::string_view where, std::string_view key,
                double fallback) {
  return j.contains(key) ? Number(j, where, key) : fallback;
}

std::uint64_t Unsigned(const Json& j, std::string_view where,
                       std::string_view key) {
  const Json& v = Need(j, where, key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError("field " + Path(where, key) +
                      " must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::string String(const Json& j, std::string_view where,
                   std::string_view key) {
  const Json& v = Need(j, where, key);
  if (!v.is_string()) {
    throw ConfigError("field " + Path(where, key) + " must be a string");
  }
  return v.get<std::string>();
}

bool Bool(const Json& j, std::string_view where, std::string_view key) {
  const Json& v = Need(j, where, key);
  if (!v.is_boolean()) {
    throw ConfigError("field " + Path(where, key) + " must be a boolean");
  }
  return v.get<bool>();
}

void ParseUncertainty(const Json& j, ScenarioConfig& s, Eigen::Index n) {
  constexpr std::string_view kWhere = "uncertainty";
  const std::string mode = String(j, kWhere, "mode");
  if (mode == "fixed-p") {
    RejectUnknown(j, kWhere, {"mode", "p"});
    s.uncertainty.mode = UncertaintyMode::kFixed;
    s.uncertainty.p = Number(j, kWhere, "p");
  } else if (mode == "per-step-p") {
    RejectUnknown(j, kWhere, {"mode", "p_min", "p_max", "seed"});
    s.uncertainty.mode = UncertaintyMode::kPerStep;
    s.uncertainty.p_min = Number(j, kWhere, "p_min");
    s.uncertainty.p_max = Number(j, kWhere, "p_max");
    s.uncertainty.seed = Unsigned(j, kWhere, "seed");
    if (!(s.uncertainty.p_min <= s.uncertainty.p_max)) {
      throw ConfigError("uncertainty.p_min must not exceed p_max");
    }
  } else if (mode == "custom-matrix-sequence") {
    RejectUnknown(j, kWhere, {"mode", "sequence"});
    s.uncertainty.mode = UncertaintyMode::kCustom;
    const Json& seq = Need(j, kWhere, "sequence");
    if (!seq.is_array()) {
      throw ConfigError("uncertainty.sequence must be an array of matrices");
    }
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const std::string field = "uncertainty.sequence[" + std::to_string(i) + "]";
      Matrix M = io::MatrixFromJson(seq[i], field, n);
      if (M.rows() != n || M.cols() != n) {
        throw ConfigError("field " + field + " must be n x n");
      }
      s.uncertainty.sequence.push_back(std::move(M));
    }
  } else {
    throw ConfigError("field uncertainty.mode: unknown mode '" + mode + "'");
  }
}

void ParseDos(const Json& j, ScenarioConfig& s) {
  constexpr std::string_view kWhere = "dos";
  const std::string mode = String(j, kWhere, "mode");
  if (mode == "none") {
    RejectUnknown(j, kWhere, {"mode"});
    s.dos.source = DosSource::kNone;
  } else if (mode == "generate") {
    RejectUnknown(j, kWhere, {"mode", "style", "seed", "min_intervals"});
    s.dos.source = DosSource::kGenerate;
    try {
      s.dos.style = ParseDosStyle(String(j, kWhere, "style"));
    } catch (const InputError& e) {
      throw ConfigError(std::string("field dos.style: ") + e.what());
    }
    s.dos.seed = Unsigned(j, kWhere, "seed");
    if (j.contains("min_intervals")) {
      s.dos.min_intervals = Unsigned(j, kWhere, "min_intervals");
    }
  } else if (mode == "file") {
    RejectUnknown(j, kWhere, {"mode", "path"});
    s.dos.source = DosSource::kFile;
    s.dos.path = String(j, kWhere, "path");
  } else {
    throw ConfigError("field dos.mode: unknown mode '" + mode + "'");
  }
}

MuFormula ParseMu(const std::string& v) {
  if (v == "derived") return MuFormula::kDerived;
  if (v == "as_printed") return MuFormula::kAsPrinted;
  throw ConfigError("field synthesis.mu_formula: unknown value '" + v + "'");
}

GammaFormula ParseGamma(const std::string& v) {
  if (v == "derived") return GammaFormula::kDerived;
  if (v == "as_printed") return GammaFormula::kAsPrinted;
  throw ConfigError("field synthesis.gamma_formula: unknown value '" + v + "'");
}

}  // namespace

PlantModel ScenarioConfig::Plant() const {
  return {synthesis.A, synthesis.B, synthesis.F, synthesis.epsilon};
}

ScenarioConfig ParseScenario(const Json& j,
                             const std::filesystem::path& base_dir) {
  RejectUnknown(j, "scenario",
                {"name", "description", "plant", "synthesis", "x0",
                 "horizon_steps", "sample_period", "uncertainty", "dos",
                 "options", "outputs", "reference"});
  ScenarioConfig s;
  s.base_dir = base_dir;
  if (j.contains("name")) s.name = String(j, "scenario", "name");

  const Json& plant = Need(j, "scenario", "plant");
  RejectUnknown(plant, "plant", {"A", "B"});
  s.synthesis.A = io::MatrixFromJson(Need(plant, "plant", "A"), "plant.A");
  const Eigen::Index n = s.synthesis.A.rows();
  s.synthesis.B = io::MatrixFromJson(Need(plant, "plant", "B"), "plant.B");
  const Eigen::Index m = s.synthesis.B.cols();

  const Json& syn = Need(j, "scenario", "synthesis");
  RejectUnknown(syn, "synthesis",
                {"Q", "F", "R1", "R2", "alpha", "epsilon", "sigma", "eta1",
                 "eta2", "mu_formula", "gamma_formula", "riccati_tol",
                 "riccati_max_iter"});
  s.synthesis.Q = io::MatrixFromJson(Need(syn, "synthesis", "Q"), "synthesis.Q", n);
  s.synthesis.F = io::MatrixFromJson(Need(syn, "synthesis", "F"), "synthesis.F", n);
  s.synthesis.R1 =
      io::MatrixFromJson(Need(syn, "synthesis", "R1"), "synthesis.R1", m);
  s.synthesis.R2 =
      io::MatrixFromJson(Need(syn, "synthesis", "R2"), "synthesis.R2", n);
  s.synthesis.alpha = NumberOr(syn, "synthesis", "alpha", 1.0);
  s.synthesis.epsilon = Number(syn, "synthesis", "epsilon");
  s.synthesis.sigma = Number(syn, "synthesis", "sigma");
  s.synthesis.eta1 = Number(syn, "synthesis", "eta1");
  s.synthesis.eta2 = Number(syn, "synthesis", "eta2");
  if (syn.contains("mu_formula")) {
    s.synthesis.mu_formula = ParseMu(String(syn, "synthesis", "mu_formula"));
  }
  if (syn.contains("gamma_formula")) {
    s.synthesis.gamma_formula =
        ParseGamma(String(syn, "synthesis", "gamma_formula"));
  }
  s.riccati.tol = NumberOr(syn, "synthesis", "riccati_tol", s.riccati.tol);
  if (syn.contains("riccati_max_iter")) {
    s.riccati.max_iter =
        static_cast<int>(Unsigned(syn, "synthesis", "riccati_max_iter"));
  }

  s.x0 = io::VectorFromJson(Need(j, "scenario", "x0"), "x0");
  s.horizon = Unsigned(j, "scenario", "horizon_steps");
  if (s.horizon < 1) throw ConfigError("field horizon_steps must be >= 1");
  s.sample_period = Number(j, "scenario", "sample_period");
  if (!(s.sample_period > 0.0)) {
    throw ConfigError("field sample_period must be positive");
  }

  if (j.contains("uncertainty")) ParseUncertainty(j.at("uncertainty"), s, n);
  if (j.contains("dos")) ParseDos(j.at("dos"), s);

  if (j.contains("options")) {
    const Json& opt = j.at("options");
    RejectUnknown(opt, "options",
                  {"enforce_uncertainty_bound", "require_valid_certificate"});
    if (opt.contains("enforce_uncertainty_bound")) {
      const std::string mode = String(opt, "options", "enforce_uncertainty_bound");
      if (mode == "warn") {
        s.bound_policy = BoundPolicy::kWarn;
      } else if (mode == "error") {
        s.bound_policy = BoundPolicy::kError;
      } else {
        throw ConfigError("field options.enforce_uncertainty_bound must be warn or error");
      }
    }
    if (opt.contains("require_valid_certificate")) {
      s.require_valid_certificate =
          Bool(opt, "options", "require_valid_certificate");
    }
  }

  if (j.contains("outputs")) {
    const Json& out = j.at("outputs");
    RejectUnknown(out, "outputs", {"certificate", "trace", "report", "dos"});
    if (out.contains("certificate")) {
      s.outputs.certificate = String(out, "outputs", "certificate");
    }
    if (out.contains("trace")) s.outputs.trace = String(out, "outputs", "trace");
    if (out.contains("report")) {
      s.outputs.report = String(out, "outputs", "report");
    }
    if (out.contains("dos")) s.outputs.dos = String(out, "outputs", "dos");
  }

  if (j.contains("reference")) {
    const Json& ref = j.at("reference");
    RejectUnknown(ref, "reference", {"K", "L"});
    if (ref.contains("K")) {
      s.reference_K = io::MatrixFromJson(ref.at("K"), "reference.K");
    }
    if (ref.contains("L")) {
      s.reference_L = io::MatrixFromJson(ref.at("L"), "reference.L");
    }
  }

  if (s.x0.size() != n) {
    throw ConfigError("field x0 must have " + std::to_string(n) + " entries");
  }
  try {
    s.synthesis.Validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("synthesis inputs: ") + e.what());
  }
  return s;
}

ScenarioConfig LoadScenario(const std::filesystem::path& path) {
  const Json j = io::ReadJsonFile(path);
  try {
    return ParseScenario(j, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

SimulationConfig MakeSimulationConfig(const ScenarioConfig& scenario,
                                      const SynthesisCertificate& cert,
                                      DosSignal signal) {
  SimulationConfig c;
  c.plant = scenario.Plant();
  c.certificate = cert;
  c.x0 = scenario.x0;
  c.horizon = scenario.horizon;
  c.sample_period = scenario.sample_period;
  c.uncertainty = scenario.uncertainty;
  c.dos = std::move(signal);
  c.bound_policy = scenario.bound_policy;
  c.require_valid_certificate = scenario.require_valid_certificate;
  return c;
}

DosSignal ResolveDosSignal(const ScenarioConfig& scenario,
                           const SynthesisCertificate& cert) {
  switch (scenario.dos.source) {
    case DosSource::kNone:
      return DosSignal::Empty(scenario.horizon);
    case DosSource::kFile: {
      const std::filesystem::path p = scenario.dos.path.is_absolute()
                                          ? scenario.dos.path
                                          : scenario.base_dir / scenario.dos.path;
      return io::DosSignalFromJson(io::ReadJsonFile(p));
    }
    case DosSource::kGenerate: {
      GenerateOptions opts;
      opts.min_intervals = scenario.dos.min_intervals;
      if (scenario.dos.style == DosStyle::kAdversarialGreedy) {
        const SimulationConfig base = MakeSimulationConfig(
            scenario, cert, DosSignal::Empty(scenario.horizon));
        opts.predictor = [base](const DosSignal& s) {
          return PredictEvents(base, s);
        };
      }
      return Generate(scenario.horizon, DosBudget::FromCertificate(cert),
                      scenario.dos.seed, scenario.dos.style, opts);
    }
  }
  return DosSignal::Empty(scenario.horizon);
}

}  // namespace etdos
