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
#include <functional>
#include <limits>
#include <string_view>
#include <vector>

namespace etdos {

struct SynthesisCertificate;

/// Channel unavailable for steps start ≤ k < start + duration.
struct AttackInterval {
  std::size_t start = 0;
  std::size_t duration = 1;

  std::size_t end() const { return start + duration; }
  bool operator==(const AttackInterval&) const = default;
};

/// Ordered, disjoint attack intervals over the steps [0, horizon).
class DosSignal {
 public:
  DosSignal() = default;
  /// Throws InputError unless the intervals are sorted, disjoint, have
  /// duration ≥ 1 and end within the horizon.
  DosSignal(std::size_t horizon, std::vector<AttackInterval> intervals);

  static DosSignal Empty(std::size_t horizon) { return DosSignal(horizon, {}); }

  std::size_t horizon() const { return horizon_; }
  const std::vector<AttackInterval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }

  bool Active(std::size_t k) const;
  /// Per-step availability mask, true where the channel is jammed.
  std::vector<bool> Mask() const;

  bool operator==(const DosSignal&) const = default;

 private:
  std::size_t horizon_ = 0;
  std::vector<AttackInterval> intervals_;
};

struct PrefixCounts {
  std::size_t t_off = 0;  // jammed steps in [0, k)
  std::size_t n_off = 0;  // intervals intersecting [0, k)
  bool operator==(const PrefixCounts&) const = default;
};

/// Counts for any 0 ≤ k ≤ horizon.
PrefixCounts CountPrefix(const DosSignal& signal, std::size_t k);

/// T_off(k), N_off(k) for 1 < k ≤ horizon; other k throw DomainError.
PrefixCounts Measure(const DosSignal& signal, std::size_t k);

/// Admissible duration rate and frequency of attacks.
struct DosBudget {
  double rate_bound = 0.0;  // T_off(k)/k ≤ rate_bound
  double freq_bound = std::numeric_limits<double>::infinity();  // N_off(k)/k ≤ freq_bound
  double eta1 = 0.0;
  double eta2 = 0.0;

  /// Rate bound from the certificate's c₁, c₂ (clamped at 0 when the
  /// formula goes negative or undefined), frequency bound T_a.
  static DosBudget FromCertificate(const SynthesisCertificate& cert);

  void Validate() const;
};

struct PrefixViolation {
  std::size_t k = 0;
  double rate = 0.0;
  double freq = 0.0;
  bool rate_exceeded = false;
  bool freq_exceeded = false;
};

struct ValidationReport {
  std::vector<PrefixViolation> violations;
  // min over k ∈ (1, horizon] of bound − ratio; +inf when no prefix exists
  double worst_rate_margin = std::numeric_limits<double>::infinity();
  double worst_freq_margin = std::numeric_limits<double>::infinity();
  std::size_t worst_rate_k = 0;
  std::size_t worst_freq_k = 0;

  bool admissible() const { return violations.empty(); }
};

/// Checks both bounds at every prefix k ∈ (1, horizon].
ValidationReport Validate(const DosSignal& signal, const DosBudget& budget);

enum class DosStyle { kUniformRandom, kBurst, kAdversarialGreedy };

std::string_view ToString(DosStyle style);
DosStyle ParseDosStyle(std::string_view name);

/// Dry-run hook for the greedy style: per-step event flags of the closed
/// loop when driven by the given signal.
using EventPredictor = std::function<std::vector<bool>(const DosSignal&)>;

struct GenerateOptions {
  std::size_t min_intervals = 0;  // fewer than this is an InfeasibleError
  EventPredictor predictor;       // used by kAdversarialGreedy only
};

/// Seeded admissible signal. Every accepted interval is checked against the
/// budget at all prefixes, so the result always passes Validate().
DosSignal Generate(std::size_t horizon, const DosBudget& budget,
                   std::uint64_t seed, DosStyle style,
                   const GenerateOptions& opts = {});

}  // namespace etdos
