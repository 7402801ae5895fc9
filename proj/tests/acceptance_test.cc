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


// Acceptance suite for the batch-reactor case study and the library-wide
// guarantees. Prints one PASS/FAIL line per criterion; `--only N` runs a
// single criterion so each can be registered as its own test.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "etdos/cli.h"
#include "etdos/diagnostics.h"
#include "etdos/ensemble.h"
#include "etdos/scenario.h"
#include "etdos/synthesis.h"
#include "test_support.h"

namespace etdos {
namespace {

namespace fs = std::filesystem;

const fs::path kScenarios = ETDOS_SCENARIO_DIR;
const fs::path kReactor = kScenarios / "batch_reactor.json";
const fs::path kReactorDos = kScenarios / "batch_reactor_dos.json";

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double MaxAbs(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// 1. Printed K and L within 5e-3 at α = 1, or at some α of the sweep.
Outcome GainReproduction() {
  constexpr double kTol = 5e-3;
  const ScenarioConfig s = LoadScenario(kReactor);
  const Stopwatch clock;
  const SynthesisCertificate cert = ComputeCertificate(s.synthesis, s.riccati);
  const double seconds = clock.Seconds();
  const double k_err = MaxAbs(cert.K, *s.reference_K);
  const double l_err = MaxAbs(cert.L, *s.reference_L);
  if (k_err <= kTol && l_err <= kTol && seconds < 1.0) {
    return {true, Fmt("alpha=1: |dK|=%.3g |dL|=%.3g in %.3fs", k_err, l_err,
                      seconds)};
  }
  const std::vector<double> grid = AlphaGrid(0.1, 10.0, 200);
  const auto sweep = AlphaSweepParallel(s.synthesis, grid, *s.reference_K,
                                        s.reference_L, s.riccati);
  double best_k = std::numeric_limits<double>::infinity();
  double best_k_alpha = 0.0;
  double best_l = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const AlphaSweepPoint& p : sweep) {
    if (!p.converged) continue;
    if (p.k_mismatch < best_k) {
      best_k = p.k_mismatch;
      best_k_alpha = p.alpha;
    }
    best_l = std::min(best_l, p.l_mismatch);
    any = any || (p.k_mismatch <= kTol && p.l_mismatch <= kTol);
  }
  return {any && seconds < 1.0,
          Fmt("alpha=1: |dK|=%.4g |dL|=%.4g (%.3fs); sweep 0.1:10:200 best "
              "|dK|=%.4g at alpha=%.4g, best |dL|=%.4g; tol 5e-3",
              k_err, l_err, seconds, best_k, best_k_alpha, best_l)};
}

double IdentityGap(const Matrix& P, const SynthesisInputs& in) {
  const RiccatiTerms t = ComputeRiccatiTerms(P, in);
  const Gains g = ComputeGains(P, in);
  const Matrix lhs = in.A.transpose() * t.S_inv_A;
  const Matrix rhs = g.K.transpose() * in.R1 * g.K +
                     g.L.transpose() * in.R2.transpose() * g.L +
                     g.M.transpose() * P.inverse() * g.M;
  return (lhs - rhs).norm() / lhs.norm();
}

// 2. Riccati residual and the gain identity on 51 systems.
Outcome RiccatiCorrectness() {
  const Stopwatch clock;
  std::vector<SynthesisInputs> systems = {LoadScenario(kReactor).synthesis};
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    systems.push_back(testing::RandomSystem(seed));
  }
  double worst_res = 0.0;
  double worst_gap = 0.0;
  int max_n = 0;
  for (const SynthesisInputs& in : systems) {
    const Matrix P = SolveRiccati(in);
    worst_res = std::max(worst_res, RiccatiResidual(P, in));
    worst_gap = std::max(worst_gap, IdentityGap(P, in));
    max_n = std::max(max_n, static_cast<int>(in.n()));
  }
  const double seconds = clock.Seconds();
  return {worst_res <= 1e-9 && worst_gap <= 1e-9 && seconds < 10.0 &&
              max_n <= 8,
          Fmt("%zu systems (n<=%d): max residual %.3g, max identity gap "
              "%.3g, %.2fs",
              systems.size(), max_n, worst_res, worst_gap, seconds)};
}

// 3. Scalar plant against the quadratic root.
Outcome ScalarOracle() {
  const Matrix P = SolveRiccati(testing::ScalarInputs());
  const double want = testing::ScalarRiccatiRoot();
  const double err = std::abs(P(0, 0) - want);
  return {err <= 1e-9, Fmt("P=%.12f root=%.12f |err|=%.3g", P(0, 0), want, err)};
}

// 4. u_total ≤ 60 of 120 and τ_min = 0.05 s under an admissible signal.
Outcome CommunicationSavings() {
  std::string detail;
  bool pass = true;
  for (const fs::path& file : {kReactor, kReactorDos}) {
    const ScenarioConfig s = LoadScenario(file);
    const SynthesisCertificate cert = ComputeCertificate(s.synthesis, s.riccati);
    const DosSignal signal = ResolveDosSignal(s, cert);
    const bool admissible =
        Validate(signal, DosBudget::FromCertificate(cert)).admissible();
    const SimulationTrace trace = Run(MakeSimulationConfig(s, cert, signal));
    const TransmissionStats st = SummarizeTransmissions(trace);
    const bool ok = admissible && st.u_total <= 60 && st.tau_min == 0.05 &&
                    st.periodic_baseline == 120 && s.uncertainty.p == 0.5;
    pass = pass && ok;
    detail += Fmt("%s%s: %zu attacks, u_total %zu/%zu, tau_min %.3g s, "
                  "tau_max %.3g s",
                  detail.empty() ? "" : "; ", s.name.c_str(),
                  signal.intervals().size(), st.u_total, st.periodic_baseline,
                  st.tau_min, st.tau_max);
  }
  return {pass, detail};
}

// 5. 100 seeded runs: envelope and out-of-attack decrease never violated.
Outcome IssEnvelopeHolds() {
  const Stopwatch clock;
  const ScenarioConfig base = LoadScenario(kReactorDos);
  const SynthesisCertificate cert =
      ComputeCertificate(base.synthesis, base.riccati);
  // ΔA = pI satisfies ΔAᵀΔA ≤ εF/2 iff p² ≤ ε·f/2.
  const double p_max = std::sqrt(base.synthesis.epsilon *
                                 base.synthesis.F(0, 0) / 2.0);
  std::vector<SimulationConfig> configs;
  std::size_t attacks = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    ScenarioConfig s = base;
    s.uncertainty.mode = UncertaintyMode::kPerStep;
    s.uncertainty.p_min = 0.0;
    s.uncertainty.p_max = p_max;
    s.uncertainty.seed = 5000 + i;
    s.bound_policy = BoundPolicy::kError;
    s.dos.source = DosSource::kGenerate;
    s.dos.style = static_cast<DosStyle>(i % 3);
    s.dos.seed = i;
    configs.push_back(MakeSimulationConfig(s, cert, ResolveDosSignal(s, cert)));
    attacks += configs.back().dos.intervals().size();
  }
  const auto outcomes = RunEnsembleParallel(configs);
  std::size_t iss = 0;
  std::size_t lyap = 0;
  std::size_t bad = 0;
  for (const EnsembleOutcome& o : outcomes) {
    iss += o.iss_violations;
    lyap += o.lyapunov_violations;
    if (o.diverged || !o.admissible || !o.bound_held) ++bad;
  }
  const double seconds = clock.Seconds();
  return {iss == 0 && lyap == 0 && bad == 0 && seconds < 30.0,
          Fmt("100 runs, p in [0, %.3g], %zu attacks: %zu envelope and %zu "
              "decrease violations, %zu invalid runs, %.2fs",
              p_max, attacks, iss, lyap, bad, seconds)};
}

bool BreaksBudget(const DosSignal& s, const DosBudget& b) {
  for (std::size_t k = 2; k <= s.horizon(); ++k) {
    const PrefixCounts c = Measure(s, k);
    const double kd = static_cast<double>(k);
    if (c.t_off / kd > b.rate_bound || c.n_off / kd > b.freq_bound) return true;
  }
  return false;
}

// 6. Generator/validator agreement, mutation rejection, T_a report.
Outcome DosBudgetMachinery() {
  const ScenarioConfig dos_s = LoadScenario(kReactorDos);
  const DosBudget budget = DosBudget::FromCertificate(
      ComputeCertificate(dos_s.synthesis, dos_s.riccati));
  std::size_t accepted = 0;
  std::size_t generated = 0;
  std::vector<DosSignal> signals;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const DosSignal s =
        Generate(120, budget, seed, static_cast<DosStyle>(seed % 3));
    ++generated;
    if (Validate(s, budget).admissible()) ++accepted;
    signals.push_back(s);
  }

  std::mt19937_64 gen(2024);
  std::size_t mutated = 0;
  std::size_t rejected = 0;
  for (std::size_t i = 0; mutated < 100 && i < signals.size(); ++i) {
    std::vector<AttackInterval> iv = signals[i].intervals();
    if (!iv.empty() && gen() % 2 == 0) {
      const std::size_t j = gen() % iv.size();
      const std::size_t limit = j + 1 < iv.size() ? iv[j + 1].start : 120;
      iv[j].duration = limit - iv[j].start;  // extended duration
    } else {
      std::size_t free = 0;
      std::size_t pos = 0;
      while (pos < iv.size() && iv[pos].start == free) free = iv[pos++].end();
      const std::size_t limit = pos < iv.size() ? iv[pos].start : 120;
      if (free >= limit) continue;
      iv.insert(iv.begin() + static_cast<std::ptrdiff_t>(pos),
                {free, limit - free});  // extra interval
    }
    const DosSignal m(120, iv);
    if (!BreaksBudget(m, budget)) continue;
    ++mutated;
    if (!Validate(m, budget).admissible()) ++rejected;
  }

  const SynthesisCertificate paper =
      ComputeCertificate(LoadScenario(kReactor).synthesis);
  constexpr double kReferenceTa = 0.1;
  return {accepted == generated && generated == 1000 && mutated == 100 &&
              rejected == mutated && std::isfinite(paper.Ta) && paper.Ta > 0,
          Fmt("accepted %zu/%zu generated, rejected %zu/%zu mutated; "
              "Ta=%.4g vs reference %.1g (Xi=%.5g, deviation %+.4g)",
              accepted, generated, rejected, mutated, paper.Ta, kReferenceTa,
              paper.Xi, paper.Ta - kReferenceTa)};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 7. Repeated `simulate` with the same scenario and seed is byte-identical.
Outcome Determinism() {
  const fs::path root = fs::temp_directory_path() / "etdos_acceptance_det";
  fs::remove_all(root);
  std::size_t compared = 0;
  bool same = true;
  int runs = 0;
  struct Case {
    fs::path scenario;
    std::vector<std::string> extra;
  };
  const std::vector<Case> cases = {
      {kReactor, {}},
      {kReactorDos, {"--seed", "3"}},
      {kReactorDos, {"--seed", "41"}},
  };
  for (const Case& c : cases) {
    std::string first_csv;
    std::string first_report;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / std::to_string(runs++);
      std::vector<std::string> args = {"simulate", c.scenario.string(),
                                       "--out-dir", dir.string()};
      args.insert(args.end(), c.extra.begin(), c.extra.end());
      std::ostringstream out;
      std::ostringstream err;
      if (cli::Run(args, out, err) != cli::kOk) same = false;
      const std::string csv = Slurp(dir / "trace.csv");
      const std::string report = Slurp(dir / "report.json");
      if (csv.empty() || report.empty()) same = false;
      if (rep == 0) {
        first_csv = csv;
        first_report = report;
      } else {
        same = same && csv == first_csv && report == first_report;
        compared += 2;
      }
    }
  }
  fs::remove_all(root);
  return {same, Fmt("%zu file pairs compared across %zu scenario/seed cases",
                    compared, cases.size())};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace etdos

int main(int argc, char** argv) {
  using namespace etdos;
  const std::vector<Criterion> criteria = {
      {1, "gain reproduction", GainReproduction},
      {2, "riccati correctness", RiccatiCorrectness},
      {3, "scalar oracle", ScalarOracle},
      {4, "communication savings", CommunicationSavings},
      {5, "iss envelope", IssEnvelopeHolds},
      {6, "dos budget machinery", DosBudgetMachinery},
      {7, "determinism", Determinism},
  };
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--only") only = std::atoi(argv[2]);
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
