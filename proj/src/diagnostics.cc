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

#include "etdos/diagnostics.h"

#include <algorithm>
#include <cmath>

#include "etdos/errors.h"

namespace etdos {

std::vector<std::size_t> CheckLyapunovDecrease(
    const SimulationTrace& trace, const SynthesisCertificate& cert,
    double tol_scale) {
  std::vector<std::size_t> violations;
  if (trace.rows.empty()) return violations;
  const double tol = tol_scale * trace.rows.front().V;
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    const TraceRow& row = trace.rows[k];
    if (row.dos_active || row.jammed) continue;
    const double next =
        k + 1 < trace.rows.size() ? trace.rows[k + 1].V : trace.final_V;
    if (next > cert.c1 * row.V + tol) violations.push_back(k + 1);
  }
  return violations;
}

double IssEnvelope(const SynthesisCertificate& cert, std::size_t k,
                   std::size_t t_off, std::size_t n_off, double x0_norm) {
  const double kd = static_cast<double>(k);
  const double t = static_cast<double>(t_off);
  const double n = static_cast<double>(n_off);
  return std::pow(cert.Xi, (1.0 + n) / 2.0) * std::pow(cert.c1, (kd - t) / 2.0) *
         std::pow(cert.c2, t / 2.0) * x0_norm;
}

double NoDosEnvelope(const SynthesisCertificate& cert, std::size_t k,
                     double x0_norm) {
  return IssEnvelope(cert, k, 0, 0, x0_norm);
}

StabilityReport CheckIssEnvelope(const SimulationTrace& trace,
                                 const SynthesisCertificate& cert,
                                 const DosSignal& signal) {
  if (signal.horizon() != trace.horizon()) {
    throw InputError("DoS signal horizon does not match the trace");
  }
  StabilityReport report;
  report.budget = Validate(signal, DosBudget::FromCertificate(cert));
  report.budget_admissible = report.budget.admissible();
  report.uncertainty_bound_held = trace.bound_violations == 0;
  report.lyapunov_report_only = !report.uncertainty_bound_held;
  report.lyapunov_violations = CheckLyapunovDecrease(trace, cert);

  if (trace.rows.empty()) return report;
  const double x0_norm = trace.rows.front().x.norm();
  const double abs_tol = 1e-12 * std::max(x0_norm, 1e-300);
  const std::size_t horizon = trace.horizon();
  report.envelope.resize(horizon + 1);
  for (std::size_t k = 0; k <= horizon; ++k) {
    const PrefixCounts c = CountPrefix(signal, k);
    const double bound = IssEnvelope(cert, k, c.t_off, c.n_off, x0_norm);
    report.envelope[k] = bound;
    const double x_norm =
        k < horizon ? trace.rows[k].x.norm() : trace.final_state.norm();
    if (!(x_norm <= bound + abs_tol)) report.iss_bound_violations.push_back(k);
    if (bound > 0.0) {
      const double margin = (bound - x_norm) / bound;
      if (margin < report.worst_margin) {
        report.worst_margin = margin;
        report.worst_margin_k = k;
      }
    }
  }
  return report;
}

TransmissionStats SummarizeTransmissions(const std::vector<bool>& transmitted,
                                         double sample_period) {
  TransmissionStats s;
  s.periodic_baseline = transmitted.size();
  std::size_t last = 0;
  std::size_t min_gap = 0;
  std::size_t max_gap = 0;
  for (std::size_t k = 0; k < transmitted.size(); ++k) {
    if (!transmitted[k]) continue;
    if (s.u_total > 0) {
      const std::size_t gap = k - last;
      min_gap = s.u_total == 1 ? gap : std::min(min_gap, gap);
      max_gap = std::max(max_gap, gap);
    }
    last = k;
    ++s.u_total;
  }
  if (s.u_total == 0) {
    throw DegenerateStatsError("trace contains no transmissions");
  }
  if (s.u_total == 1) {
    s.degenerate = true;
    min_gap = max_gap = transmitted.size();
  }
  s.tau_min = static_cast<double>(min_gap) * sample_period;
  s.tau_max = static_cast<double>(max_gap) * sample_period;
  return s;
}

TransmissionStats SummarizeTransmissions(const SimulationTrace& trace) {
  std::vector<bool> transmitted(trace.rows.size());
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    transmitted[k] = trace.rows[k].transmitted;
  }
  return SummarizeTransmissions(transmitted, trace.sample_period);
}

}  // namespace etdos
