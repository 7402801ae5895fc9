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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "etdos/dos.h"
#include "etdos/io.h"
#include "etdos/simulator.h"
#include "etdos/synthesis.h"

namespace etdos {

enum class DosSource { kNone, kGenerate, kFile };

struct DosSpec {
  DosSource source = DosSource::kNone;
  DosStyle style = DosStyle::kBurst;
  std::uint64_t seed = 0;
  std::size_t min_intervals = 0;
  std::filesystem::path path;  // kFile, relative to the scenario file
};

struct OutputPaths {
  std::string certificate = "certificate.json";
  std::string trace = "trace.csv";
  std::string report = "report.json";
  std::string dos = "dos.json";
};

/// Everything one run needs, parsed from a single JSON scenario file.
struct ScenarioConfig {
  std::string name;
  SynthesisInputs synthesis;
  RiccatiOptions riccati;
  Vector x0;
  std::size_t horizon = 1;
  double sample_period = 0.05;
  UncertaintySpec uncertainty;
  DosSpec dos;
  BoundPolicy bound_policy = BoundPolicy::kWarn;
  bool require_valid_certificate = false;
  OutputPaths outputs;
  std::optional<Matrix> reference_K;
  std::optional<Matrix> reference_L;
  std::filesystem::path base_dir;

  PlantModel Plant() const;
};

/// Schema-checked parse; unknown keys and type mismatches throw ConfigError
/// naming the field.
ScenarioConfig ParseScenario(const io::Json& j,
                             const std::filesystem::path& base_dir = {});
ScenarioConfig LoadScenario(const std::filesystem::path& path);

SimulationConfig MakeSimulationConfig(const ScenarioConfig& scenario,
                                      const SynthesisCertificate& cert,
                                      DosSignal signal);

/// The scenario's DoS signal: empty, read from file, or generated from the
/// certificate's budget (the greedy style dry-runs the closed loop).
DosSignal ResolveDosSignal(const ScenarioConfig& scenario,
                           const SynthesisCertificate& cert);

}  // namespace etdos
