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

#include "etdos/dos.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "etdos/errors.h"
#include "etdos/rng.h"
#include "etdos/synthesis.h"

namespace etdos {

namespace {

// Prefix table: entry k holds counts over [0, k), k = 0..horizon.
std::vector<PrefixCounts> PrefixTable(std::size_t horizon,
                                      const std::vector<AttackInterval>& iv) {
  std::vector<PrefixCounts> table(horizon + 1);
  std::size_t next = 0;
  std::size_t t_off = 0;
  std::size_t n_off = 0;
  for (std::size_t k = 0; k < horizon; ++k) {
    while (next < iv.size() && iv[next].end() <= k) ++next;
    if (next < iv.size() && iv[next].start == k) ++n_off;
    if (next < iv.size() && iv[next].start <= k) ++t_off;
    table[k + 1] = {t_off, n_off};
  }
  return table;
}

bool Admissible(std::size_t horizon, const std::vector<AttackInterval>& iv,
                const DosBudget& budget) {
  const std::vector<PrefixCounts> table = PrefixTable(horizon, iv);
  for (std::size_t k = 2; k <= horizon; ++k) {
    const double kd = static_cast<double>(k);
    if (static_cast<double>(table[k].t_off) / kd > budget.rate_bound) {
      return false;
    }
    if (static_cast<double>(table[k].n_off) / kd > budget.freq_bound) {
      return false;
    }
  }
  return true;
}

class Builder {
 public:
  Builder(std::size_t horizon, const DosBudget& budget)
      : horizon_(horizon), budget_(budget) {}

  // Longest admissible duration ≤ cap for an interval starting at `start`,
  // 0 if none. Admissibility is monotone in the duration.
  std::size_t Longest(std::size_t start, std::size_t cap) {
    if (start >= horizon_) return 0;
    cap = std::min(cap, horizon_ - start);
    if (cap == 0 || !Fits({start, 1})) return 0;
    std::size_t lo = 1;
    std::size_t hi = cap;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo + 1) / 2;
      if (Fits({start, mid})) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    return lo;
  }

  void Push(AttackInterval iv) { intervals_.push_back(iv); }
  const std::vector<AttackInterval>& intervals() const { return intervals_; }
  DosSignal Signal() const { return DosSignal(horizon_, intervals_); }

 private:
  bool Fits(AttackInterval candidate) {
    intervals_.push_back(candidate);
    const bool ok = Admissible(horizon_, intervals_, budget_);
    intervals_.pop_back();
    return ok;
  }

  std::size_t horizon_;
  DosBudget budget_;
  std::vector<AttackInterval> intervals_;
};

}  // namespace

DosSignal::DosSignal(std::size_t horizon, std::vector<AttackInterval> intervals)
    : horizon_(horizon), intervals_(std::move(intervals)) {
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const AttackInterval& iv = intervals_[i];
    if (iv.duration == 0) {
      throw InputError("DoS interval " + std::to_string(i) +
                       " has zero duration");
    }
    if (i > 0 && iv.start < prev_end) {
      throw InputError("DoS interval " + std::to_string(i) +
                       " overlaps or precedes its predecessor");
    }
    if (iv.end() > horizon_) {
      throw InputError("DoS interval " + std::to_string(i) +
                       " extends past the horizon");
    }
    prev_end = iv.end();
  }
}

bool DosSignal::Active(std::size_t k) const {
  const auto it = std::upper_bound(
      intervals_.begin(), intervals_.end(), k,
      [](std::size_t step, const AttackInterval& iv) { return step < iv.start; });
  if (it == intervals_.begin()) return false;
  return k < std::prev(it)->end();
}

std::vector<bool> DosSignal::Mask() const {
  std::vector<bool> mask(horizon_, false);
  for (const AttackInterval& iv : intervals_) {
    std::fill(mask.begin() + static_cast<std::ptrdiff_t>(iv.start),
              mask.begin() + static_cast<std::ptrdiff_t>(iv.end()), true);
  }
  return mask;
}

PrefixCounts CountPrefix(const DosSignal& signal, std::size_t k) {
  if (k > signal.horizon()) {
    throw DomainError("prefix length " + std::to_string(k) +
                      " exceeds the horizon");
  }
  PrefixCounts c;
  for (const AttackInterval& iv : signal.intervals()) {
    if (iv.start >= k) break;
    ++c.n_off;
    c.t_off += std::min(iv.end(), k) - iv.start;
  }
  return c;
}

PrefixCounts Measure(const DosSignal& signal, std::size_t k) {
  if (k <= 1) {
    throw DomainError("attack rates are defined for k > 1, got " +
                      std::to_string(k));
  }
  return CountPrefix(signal, k);
}

DosBudget DosBudget::FromCertificate(const SynthesisCertificate& cert) {
  DosBudget b;
  b.rate_bound = std::isnan(cert.dos_rate_bound)
                     ? 0.0
                     : std::max(0.0, cert.dos_rate_bound);
  b.freq_bound = std::isnan(cert.Ta) ? 0.0 : std::max(0.0, cert.Ta);
  b.eta1 = cert.eta1;
  b.eta2 = cert.eta2;
  return b;
}

void DosBudget::Validate() const {
  if (std::isnan(rate_bound) || rate_bound < 0.0) {
    throw InputError("DoS rate bound must be nonnegative");
  }
  if (std::isnan(freq_bound) || freq_bound < 0.0) {
    throw InputError("DoS frequency bound must be nonnegative");
  }
}

ValidationReport Validate(const DosSignal& signal, const DosBudget& budget) {
  ValidationReport report;
  const std::vector<PrefixCounts> table =
      PrefixTable(signal.horizon(), signal.intervals());
  for (std::size_t k = 2; k <= signal.horizon(); ++k) {
    const double kd = static_cast<double>(k);
    const double rate = static_cast<double>(table[k].t_off) / kd;
    const double freq = static_cast<double>(table[k].n_off) / kd;
    const double rate_margin = budget.rate_bound - rate;
    const double freq_margin = budget.freq_bound - freq;
    if (rate_margin < report.worst_rate_margin) {
      report.worst_rate_margin = rate_margin;
      report.worst_rate_k = k;
    }
    if (freq_margin < report.worst_freq_margin) {
      report.worst_freq_margin = freq_margin;
      report.worst_freq_k = k;
    }
    const bool rate_bad = rate > budget.rate_bound;
    const bool freq_bad = freq > budget.freq_bound;
    if (rate_bad || freq_bad) {
      report.violations.push_back({k, rate, freq, rate_bad, freq_bad});
    }
  }
  return report;
}

std::string_view ToString(DosStyle style) {
  switch (style) {
    case DosStyle::kUniformRandom:
      return "uniform-random";
    case DosStyle::kBurst:
      return "burst";
    case DosStyle::kAdversarialGreedy:
      return "adversarial-greedy";
  }
  return "unknown";
}

DosStyle ParseDosStyle(std::string_view name) {
  if (name == "uniform-random") return DosStyle::kUniformRandom;
  if (name == "burst") return DosStyle::kBurst;
  if (name == "adversarial-greedy") return DosStyle::kAdversarialGreedy;
  throw InputError("unknown DoS style '" + std::string(name) + "'");
}

DosSignal Generate(std::size_t horizon, const DosBudget& budget,
                   std::uint64_t seed, DosStyle style,
                   const GenerateOptions& opts) {
  budget.Validate();
  Rng rng(seed);
  Builder builder(horizon, budget);

  const double rate = std::min(budget.rate_bound, 1.0);
  const std::size_t cap = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(rate * static_cast<double>(horizon))));
  const std::size_t spacing = std::max<std::size_t>(1, horizon / 4);

  switch (style) {
    case DosStyle::kUniformRandom: {
      const std::size_t short_cap = std::max<std::size_t>(1, cap / 2);
      for (std::size_t k = 0; k < horizon;) {
        const bool start = rng.Bernoulli(0.15);
        const std::size_t want = rng.UniformInt(1, short_cap);
        const std::size_t d = start ? builder.Longest(k, want) : 0;
        if (d > 0) {
          builder.Push({k, d});
          k += d + 1;
        } else {
          ++k;
        }
      }
      break;
    }
    case DosStyle::kBurst: {
      for (std::size_t k = rng.UniformInt(0, spacing); k < horizon;) {
        const std::size_t d = builder.Longest(k, cap);
        if (d > 0) {
          builder.Push({k, d});
          k += d + 1 + rng.UniformInt(0, spacing);
        } else {
          ++k;
        }
      }
      break;
    }
    case DosStyle::kAdversarialGreedy: {
      // Each attack opens at the next predicted event so the pending
      // transmission is blocked for as long as the budget allows.
      for (std::size_t k = 0; k < horizon;) {
        std::vector<bool> events(horizon, true);
        if (opts.predictor) {
          events = opts.predictor(builder.Signal());
          if (events.size() < horizon) {
            throw InputError("event predictor returned a short trace");
          }
        }
        std::size_t target = k;
        while (target < horizon && !events[target]) ++target;
        if (target >= horizon) break;
        const std::size_t d = builder.Longest(target, cap);
        if (d > 0) {
          builder.Push({target, d});
          k = target + d + 1;
        } else {
          k = target + 1;
        }
      }
      break;
    }
  }

  if (builder.intervals().size() < opts.min_intervals) {
    throw InfeasibleError(
        "budget admits only " + std::to_string(builder.intervals().size()) +
        " attack interval(s) over " + std::to_string(horizon) +
        " steps, " + std::to_string(opts.min_intervals) + " requested");
  }
  return builder.Signal();
}

}  // namespace etdos
