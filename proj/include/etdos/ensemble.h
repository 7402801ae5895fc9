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
#include <optional>
#include <span>
#include <vector>

#include "etdos/dos.h"
#include "etdos/simulator.h"
#include "etdos/synthesis.h"

namespace etdos {

/// Batch kernels over independent runs. Each has a serial reference and an
/// OpenMP variant that must produce identical results element by element.

/// Summary of one closed-loop run checked against its own certificate.
struct EnsembleOutcome {
  bool diverged = false;
  bool admissible = false;
  bool bound_held = false;
  std::size_t lyapunov_violations = 0;
  std::size_t iss_violations = 0;
  std::size_t u_total = 0;
  double worst_margin = 0.0;

  bool operator==(const EnsembleOutcome&) const = default;
};

EnsembleOutcome EvaluateRun(const SimulationConfig& config);

std::vector<EnsembleOutcome> RunEnsembleSerial(
    std::span<const SimulationConfig> configs);
std::vector<EnsembleOutcome> RunEnsembleParallel(
    std::span<const SimulationConfig> configs);

std::vector<AlphaSweepPoint> AlphaSweepSerial(
    const SynthesisInputs& in, std::span<const double> alphas,
    const Matrix& K_ref, const std::optional<Matrix>& L_ref,
    const RiccatiOptions& opts = {});
std::vector<AlphaSweepPoint> AlphaSweepParallel(
    const SynthesisInputs& in, std::span<const double> alphas,
    const Matrix& K_ref, const std::optional<Matrix>& L_ref,
    const RiccatiOptions& opts = {});

/// Smallest K mismatch among converged points; the first one wins ties.
/// Returns nullopt if nothing converged.
std::optional<AlphaSweepPoint> BestAlpha(std::span<const AlphaSweepPoint> pts);

std::vector<DosSignal> GenerateBatchSerial(
    std::size_t horizon, const DosBudget& budget,
    std::span<const std::uint64_t> seeds, DosStyle style,
    const GenerateOptions& opts = {});
std::vector<DosSignal> GenerateBatchParallel(
    std::size_t horizon, const DosBudget& budget,
    std::span<const std::uint64_t> seeds, DosStyle style,
    const GenerateOptions& opts = {});

/// Threads the parallel kernels will use (1 without OpenMP).
int MaxThreads();

}  // namespace etdos
