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

#include <cstddef>
#include <limits>
#include <vector>

#include "etdos/dos.h"
#include "etdos/simulator.h"
#include "etdos/synthesis.h"

namespace etdos {

/// Relative slack on V(0) allowed by the decrease check.
inline constexpr double kLyapunovTolScale = 1e-12;

/// Steps j (1 ≤ j ≤ horizon) whose value V(j) exceeds c₁·V(j−1) + tol while
/// step j−1 ran with the channel free and no jammed event. V(horizon) is the
/// trace's final value.
std::vector<std::size_t> CheckLyapunovDecrease(
    const SimulationTrace& trace, const SynthesisCertificate& cert,
    double tol_scale = kLyapunovTolScale);

/// State bound Ξ^{(1+N)/2}·c₁^{(k−T)/2}·c₂^{T/2}·‖x(0)‖ for T jammed steps
/// and N attacks in [0, k).
double IssEnvelope(const SynthesisCertificate& cert, std::size_t k,
                   std::size_t t_off, std::size_t n_off, double x0_norm);

/// The attack-free envelope √Ξ·c₁^{k/2}·‖x(0)‖ (same evaluation path).
double NoDosEnvelope(const SynthesisCertificate& cert, std::size_t k,
                     double x0_norm);

struct StabilityReport {
  bool budget_admissible = true;  // signal vs. the certificate's budget
  ValidationReport budget;
  bool uncertainty_bound_held = true;  // no ΔA broke εF/2 during the run
  bool lyapunov_report_only = false;   // set when the bound did not hold
  std::vector<std::size_t> lyapunov_violations;
  std::vector<std::size_t> iss_bound_violations;
  std::vector<double> envelope;  // k = 0 .. horizon
  double worst_margin = std::numeric_limits<double>::infinity();  // min (bound−‖x‖)/bound
  std::size_t worst_margin_k = 0;

  /// Violations that count against the run: envelope always, decrease
  /// only when the uncertainty bound held.
  bool ok() const {
    return iss_bound_violations.empty() &&
           (lyapunov_report_only || lyapunov_violations.empty());
  }
};

/// Validates `signal` against the certificate's budget, then evaluates the
/// envelope at every k = 0 .. horizon, and runs the decrease check.
StabilityReport CheckIssEnvelope(const SimulationTrace& trace,
                                 const SynthesisCertificate& cert,
                                 const DosSignal& signal);

struct TransmissionStats {
  std::size_t u_total = 0;
  double tau_min = 0.0;  // seconds
  double tau_max = 0.0;
  std::size_t periodic_baseline = 0;
  bool degenerate = false;  // fewer than two transmissions
};

/// Throws DegenerateStatsError when nothing was transmitted.
TransmissionStats SummarizeTransmissions(const std::vector<bool>& transmitted,
                                         double sample_period);
TransmissionStats SummarizeTransmissions(const SimulationTrace& trace);

}  // namespace etdos
