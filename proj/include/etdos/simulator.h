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
#include <cstdint>
#include <optional>
#include <vector>

#include "etdos/dos.h"
#include "etdos/numerics.h"
#include "etdos/rng.h"
#include "etdos/synthesis.h"

namespace etdos {

/// Nominal plant plus the bound ΔAᵀΔA ≤ εF/2 on its perturbation.
struct PlantModel {
  Matrix A;
  Matrix B;
  Matrix F;
  double epsilon = 0.01;

  void Validate() const;
};

enum class UncertaintyMode { kFixed, kPerStep, kCustom };
enum class BoundPolicy { kWarn, kError };

/// ΔA = p·I for the scalar modes, or an explicit matrix sequence.
struct UncertaintySpec {
  UncertaintyMode mode = UncertaintyMode::kFixed;
  double p = 0.0;                 // kFixed
  double p_min = 0.0;             // kPerStep, p ~ U[p_min, p_max]
  double p_max = 0.0;
  std::uint64_t seed = 0;
  std::vector<Matrix> sequence;   // kCustom, one entry per step
};

/// Produces ΔA(k) and checks it against the plant's bound.
class UncertaintySampler {
 public:
  UncertaintySampler(UncertaintySpec spec, const PlantModel& plant,
                     BoundPolicy policy);

  /// ΔA for step k. Steps must be requested in order 0, 1, 2, ...
  Matrix Next(std::size_t k);

  std::size_t bound_violations() const { return bound_violations_; }

 private:
  UncertaintySpec spec_;
  Matrix bound_;  // εF/2
  BoundPolicy policy_;
  Rng rng_;
  std::size_t bound_violations_ = 0;
};

struct StepFlags {
  bool event = false;
  bool transmitted = false;
  bool jammed = false;
  double slack = 0.0;  // μ‖x‖² − ‖e‖² evaluated before the update
};

struct StepResult {
  Vector x_next;
  Vector x_held;
  Vector u;
  Vector e;  // x_held − x after the update
  bool has_transmitted = false;
  StepFlags flags;
};

/// μ‖x‖² − ‖e‖², with 0·∞ taken as 0 for an unbounded μ.
double TriggerSlack(double mu, double x_sq, double e_sq);

/// One closed-loop step:
///   e ← x_held − x; event ← slack ≤ 0 (or nothing sent yet);
///   transmit iff event ∧ ¬dos_active; u ← K·x_held (0 before the first
///   transmission); x⁺ ← (A + ΔA)x + Bu.
StepResult Step(const PlantModel& plant, const Vector& x, const Vector& x_held,
                bool has_transmitted, const Matrix& delta_A, const Matrix& K,
                bool dos_active, double mu);

struct TraceRow {
  std::size_t k = 0;
  Vector x;
  Vector x_held;
  Vector u;
  Vector e;
  bool event = false;
  bool transmitted = false;
  bool jammed = false;
  bool dos_active = false;
  double V = 0.0;
  double threshold_slack = 0.0;

  bool operator==(const TraceRow&) const = default;
};

struct SimulationTrace {
  std::vector<TraceRow> rows;  // k = 0 .. horizon-1
  Vector final_state;          // x(horizon)
  double final_V = 0.0;
  double sample_period = 0.0;
  std::size_t bound_violations = 0;  // steps where ΔA broke εF/2

  std::size_t horizon() const { return rows.size(); }
  bool operator==(const SimulationTrace&) const = default;
};

struct SimulationConfig {
  PlantModel plant;
  SynthesisCertificate certificate;
  Vector x0;
  std::size_t horizon = 1;
  double sample_period = 0.05;
  UncertaintySpec uncertainty;
  DosSignal dos;
  BoundPolicy bound_policy = BoundPolicy::kWarn;
  bool require_valid_certificate = false;
};

/// Deterministic closed-loop run. Throws DivergenceError at the first
/// non-finite state, InvalidCertificateError when a valid certificate is
/// required and missing.
SimulationTrace Run(const SimulationConfig& config);

/// Per-step event flags of a dry run under `signal`; the hook the greedy
/// DoS generator uses.
std::vector<bool> PredictEvents(const SimulationConfig& config,
                                const DosSignal& signal);

}  // namespace etdos
