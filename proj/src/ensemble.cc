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

#include "etdos/ensemble.h"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "etdos/diagnostics.h"
#include "etdos/errors.h"

namespace etdos {

namespace {

// Runs body(i) for i in [0, count) across threads. The first exception (by
// index) is rethrown after the loop; OpenMP regions must not leak them.
template <typename Body>
void ParallelFor(std::size_t count, Body body) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

EnsembleOutcome EvaluateRun(const SimulationConfig& config) {
  EnsembleOutcome out;
  SimulationTrace trace;
  try {
    trace = Run(config);
  } catch (const DivergenceError&) {
    out.diverged = true;
    return out;
  }
  const StabilityReport report =
      CheckIssEnvelope(trace, config.certificate, config.dos);
  out.admissible = report.budget_admissible;
  out.bound_held = report.uncertainty_bound_held;
  out.lyapunov_violations = report.lyapunov_violations.size();
  out.iss_violations = report.iss_bound_violations.size();
  out.worst_margin = report.worst_margin;
  for (const TraceRow& row : trace.rows) out.u_total += row.transmitted;
  return out;
}

std::vector<EnsembleOutcome> RunEnsembleSerial(
    std::span<const SimulationConfig> configs) {
  std::vector<EnsembleOutcome> out;
  out.reserve(configs.size());
  for (const SimulationConfig& c : configs) out.push_back(EvaluateRun(c));
  return out;
}

std::vector<EnsembleOutcome> RunEnsembleParallel(
    std::span<const SimulationConfig> configs) {
  std::vector<EnsembleOutcome> out(configs.size());
  ParallelFor(configs.size(),
              [&](std::size_t i) { out[i] = EvaluateRun(configs[i]); });
  return out;
}

std::vector<AlphaSweepPoint> AlphaSweepSerial(
    const SynthesisInputs& in, std::span<const double> alphas,
    const Matrix& K_ref, const std::optional<Matrix>& L_ref,
    const RiccatiOptions& opts) {
  std::vector<AlphaSweepPoint> out;
  out.reserve(alphas.size());
  for (double a : alphas) out.push_back(EvaluateAlpha(in, a, K_ref, L_ref, opts));
  return out;
}

std::vector<AlphaSweepPoint> AlphaSweepParallel(
    const SynthesisInputs& in, std::span<const double> alphas,
    const Matrix& K_ref, const std::optional<Matrix>& L_ref,
    const RiccatiOptions& opts) {
  std::vector<AlphaSweepPoint> out(alphas.size());
  ParallelFor(alphas.size(), [&](std::size_t i) {
    out[i] = EvaluateAlpha(in, alphas[i], K_ref, L_ref, opts);
  });
  return out;
}

std::optional<AlphaSweepPoint> BestAlpha(std::span<const AlphaSweepPoint> pts) {
  std::optional<AlphaSweepPoint> best;
  for (const AlphaSweepPoint& p : pts) {
    if (!p.converged) continue;
    if (!best || p.k_mismatch < best->k_mismatch) best = p;
  }
  return best;
}

std::vector<DosSignal> GenerateBatchSerial(
    std::size_t horizon, const DosBudget& budget,
    std::span<const std::uint64_t> seeds, DosStyle style,
    const GenerateOptions& opts) {
  std::vector<DosSignal> out;
  out.reserve(seeds.size());
  for (std::uint64_t s : seeds) {
    out.push_back(Generate(horizon, budget, s, style, opts));
  }
  return out;
}

std::vector<DosSignal> GenerateBatchParallel(
    std::size_t horizon, const DosBudget& budget,
    std::span<const std::uint64_t> seeds, DosStyle style,
    const GenerateOptions& opts) {
  std::vector<DosSignal> out(seeds.size());
  ParallelFor(seeds.size(), [&](std::size_t i) {
    out[i] = Generate(horizon, budget, seeds[i], style, opts);
  });
  return out;
}

int MaxThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace etdos
