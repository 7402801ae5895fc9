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

#include "etdos/cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "etdos/diagnostics.h"
#include "etdos/ensemble.h"
#include "etdos/errors.h"
#include "etdos/io.h"
#include "etdos/scenario.h"

namespace etdos::cli {

namespace fs = std::filesystem;

namespace {

std::string Sig6(double v) {
  if (!std::isfinite(v)) return io::FormatDouble(v);
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string MatrixText(const Matrix& M, const std::string& indent) {
  std::ostringstream ss;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    ss << indent << "[";
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      ss << (j ? ", " : "") << Sig6(M(i, j));
    }
    ss << "]\n";
  }
  return ss.str();
}

struct SynthesisOverrides {
  std::optional<double> alpha;
  std::string mu_formula;
  std::string gamma_formula;

  void Apply(ScenarioConfig& s) const {
    if (alpha) s.synthesis.alpha = *alpha;
    if (mu_formula == "derived") s.synthesis.mu_formula = MuFormula::kDerived;
    if (mu_formula == "as_printed") {
      s.synthesis.mu_formula = MuFormula::kAsPrinted;
    }
    if (gamma_formula == "derived") {
      s.synthesis.gamma_formula = GammaFormula::kDerived;
    }
    if (gamma_formula == "as_printed") {
      s.synthesis.gamma_formula = GammaFormula::kAsPrinted;
    }
  }
};

void AddSynthesisFlags(CLI::App* cmd, SynthesisOverrides& o) {
  cmd->add_option("--alpha", o.alpha, "Virtual-input scaling alpha");
  cmd->add_option("--mu-formula", o.mu_formula, "derived | as_printed")
      ->check(CLI::IsMember({"derived", "as_printed"}));
  cmd->add_option("--gamma-formula", o.gamma_formula, "derived | as_printed")
      ->check(CLI::IsMember({"derived", "as_printed"}));
}

struct AlphaSweepSpec {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;
};

AlphaSweepSpec ParseSweep(const std::string& text) {
  AlphaSweepSpec spec;
  char c1 = 0;
  char c2 = 0;
  std::istringstream ss(text);
  if (!(ss >> spec.lo >> c1 >> spec.hi >> c2 >> spec.steps) || c1 != ':' ||
      c2 != ':' || !ss.eof()) {
    throw ConfigError("--alpha-sweep expects lo:hi:steps, got '" + text + "'");
  }
  return spec;
}

void PrintCertificate(const SynthesisCertificate& c, std::ostream& out) {
  out << "alpha          " << Sig6(c.alpha) << "\n";
  out << "residual       " << Sig6(c.residual) << "\n";
  out << "lambda(P)      [" << Sig6(c.lambda_min_P) << ", "
      << Sig6(c.lambda_max_P) << "]\n";
  out << "K =\n" << MatrixText(c.K, "  ");
  out << "L =\n" << MatrixText(c.L, "  ");
  out << "mu             " << Sig6(c.mu) << "\n";
  out << "xi1, xi2       " << Sig6(c.xi1) << ", " << Sig6(c.xi2) << "\n";
  out << "c1, c2         " << Sig6(c.c1) << ", " << Sig6(c.c2) << "\n";
  out << "gamma          " << Sig6(c.gamma) << "\n";
  out << "Xi             " << Sig6(c.Xi) << "\n";
  out << "rate bound     " << Sig6(c.dos_rate_bound) << "\n";
  out << "Ta             " << Sig6(c.Ta) << "\n";
  out << "flags          eps_bound=" << c.flags.epsilon_bound
      << " q1_pd=" << c.flags.q1_positive
      << " c1_in_unit=" << c.flags.c1_in_unit
      << " eta1^2>c1=" << c.flags.eta1_sq_above_c1
      << " eta1>c1=" << c.flags.eta1_above_c1
      << " degenerate_trigger=" << c.flags.trigger_degenerate << "\n";
}

std::string Dump(const io::Json& j) { return j.dump(2) + "\n"; }

// Riccati divergence is a synthesis failure (exit 3), not a simulation one.
SynthesisCertificate Synthesize(const ScenarioConfig& s) {
  try {
    return ComputeCertificate(s.synthesis, s.riccati);
  } catch (const DivergenceError& e) {
    throw SynthesisImpossible(e.what());
  }
}

SynthesisCertificate LoadOrSynthesize(const ScenarioConfig& s,
                                      const std::string& certificate_path) {
  if (!certificate_path.empty()) {
    return io::CertificateFromJson(io::ReadJsonFile(certificate_path));
  }
  return Synthesize(s);
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string scenario;
  SynthesisOverrides overrides;
  std::string alpha_sweep;
  bool allow_invalid = false;
  std::string out_dir = ".";
};

int CmdSynth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
  ScenarioConfig s = LoadScenario(a.scenario);
  a.overrides.Apply(s);

  if (!a.alpha_sweep.empty()) {
    if (!s.reference_K) {
      throw ConfigError("--alpha-sweep needs reference.K in the scenario");
    }
    const AlphaSweepSpec spec = ParseSweep(a.alpha_sweep);
    const std::vector<double> grid = AlphaGrid(spec.lo, spec.hi, spec.steps);
    const std::vector<AlphaSweepPoint> pts = AlphaSweepParallel(
        s.synthesis, grid, *s.reference_K, s.reference_L, s.riccati);
    std::ostringstream csv;
    csv << "alpha,k_mismatch,l_mismatch,converged\n";
    for (const AlphaSweepPoint& p : pts) {
      csv << io::FormatDouble(p.alpha) << ',' << io::FormatDouble(p.k_mismatch)
          << ',' << io::FormatDouble(p.l_mismatch) << ',' << int{p.converged}
          << '\n';
    }
    io::WriteTextFile(fs::path(a.out_dir) / "alpha_sweep.csv", csv.str());
    const std::optional<AlphaSweepPoint> best = BestAlpha(pts);
    if (!best) throw SynthesisImpossible("no alpha in the sweep converged");
    out << "alpha sweep    best alpha " << Sig6(best->alpha)
        << ", max |K - K_ref| = " << Sig6(best->k_mismatch);
    if (s.reference_L) out << ", max |L - L_ref| = " << Sig6(best->l_mismatch);
    out << "\n";
    s.synthesis.alpha = best->alpha;
  }

  const SynthesisCertificate cert = Synthesize(s);
  io::WriteTextFile(fs::path(a.out_dir) / s.outputs.certificate,
                    Dump(io::CertificateToJson(cert)));
  PrintCertificate(cert, out);
  if (s.reference_K && s.reference_K->rows() == cert.K.rows() &&
      s.reference_K->cols() == cert.K.cols()) {
    out << "max |K - K_ref| " << Sig6((cert.K - *s.reference_K).cwiseAbs().maxCoeff())
        << "\n";
  }
  const bool conditions_ok = cert.flags.epsilon_bound && cert.flags.q1_positive;
  if (!conditions_ok) {
    err << "warning: synthesis conditions failed (eps_bound="
        << cert.flags.epsilon_bound << ", q1_pd=" << cert.flags.q1_positive
        << ")\n";
    if (!a.allow_invalid) return kSynthesisError;
  }
  return kOk;
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string scenario;
  SynthesisOverrides overrides;
  std::optional<std::uint64_t> seed;
  bool no_dos = false;
  bool require_valid = false;
  std::string certificate;
  std::string out_dir = ".";
};

int CmdSimulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  ScenarioConfig s = LoadScenario(a.scenario);
  a.overrides.Apply(s);
  if (a.seed) {
    s.dos.seed = *a.seed;
    s.uncertainty.seed = *a.seed;
  }
  if (a.no_dos) s.dos.source = DosSource::kNone;
  if (a.require_valid) s.require_valid_certificate = true;

  const SynthesisCertificate cert = LoadOrSynthesize(s, a.certificate);
  if (s.require_valid_certificate && !cert.valid()) {
    throw InvalidCertificateError(
        "certificate is not valid and --require-valid-certificate is set");
  }
  const DosSignal signal = ResolveDosSignal(s, cert);
  const SimulationTrace trace = Run(MakeSimulationConfig(s, cert, signal));
  const StabilityReport report = CheckIssEnvelope(trace, cert, signal);
  std::optional<TransmissionStats> stats;
  try {
    stats = SummarizeTransmissions(trace);
  } catch (const DegenerateStatsError&) {
  }

  const fs::path dir(a.out_dir);
  std::ostringstream csv;
  io::WriteTraceCsv(csv, trace);
  io::WriteTextFile(dir / s.outputs.trace, csv.str());
  io::WriteTextFile(dir / s.outputs.report,
                    Dump(io::StabilityReportToJson(report, stats)));
  io::WriteTextFile(dir / s.outputs.dos, Dump(io::DosSignalToJson(signal)));
  io::WriteTextFile(dir / s.outputs.certificate,
                    Dump(io::CertificateToJson(cert)));

  out << "steps          " << trace.horizon() << "\n";
  out << "attacks        " << signal.intervals().size() << " ("
      << CountPrefix(signal, signal.horizon()).t_off << " jammed steps)\n";
  if (stats) {
    out << "u_total        " << stats->u_total << " of "
        << stats->periodic_baseline << "\n";
    out << "tau min/max    " << Sig6(stats->tau_min) << " / "
        << Sig6(stats->tau_max) << " s\n";
  }
  out << "final |x|      " << Sig6(trace.final_state.norm()) << "\n";
  out << "worst margin   " << Sig6(report.worst_margin) << "\n";
  out << "ISS violations " << report.iss_bound_violations.size()
      << ", decrease violations " << report.lyapunov_violations.size()
      << (report.lyapunov_report_only ? " (report only)" : "") << "\n";
  if (trace.bound_violations > 0) {
    err << "warning: uncertainty exceeded eps*F/2 at " << trace.bound_violations
        << " step(s); decrease check is report-only\n";
  }
  if (!report.budget_admissible) {
    err << "DoS signal violates the certificate budget at "
        << report.budget.violations.size() << " prefix(es)\n";
    return kInadmissibleDos;
  }
  return report.ok() ? kOk : kIssViolation;
}

// --- dosgen ----------------------------------------------------------------

struct DosgenArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string style;
  std::optional<std::size_t> horizon;
  std::optional<std::size_t> min_intervals;
  std::string certificate;
  std::string out;
  std::string out_dir = ".";
};

int CmdDosgen(const DosgenArgs& a, std::ostream& out, std::ostream&) {
  ScenarioConfig s = LoadScenario(a.scenario);
  s.dos.source = DosSource::kGenerate;
  if (a.seed) s.dos.seed = *a.seed;
  if (!a.style.empty()) s.dos.style = ParseDosStyle(a.style);
  if (a.horizon) s.horizon = *a.horizon;
  if (a.min_intervals) s.dos.min_intervals = *a.min_intervals;
  const SynthesisCertificate cert = LoadOrSynthesize(s, a.certificate);
  const DosSignal signal = ResolveDosSignal(s, cert);
  const fs::path path =
      a.out.empty() ? fs::path(a.out_dir) / s.outputs.dos : fs::path(a.out);
  io::WriteTextFile(path, Dump(io::DosSignalToJson(signal)));
  const PrefixCounts total = CountPrefix(signal, signal.horizon());
  out << "style " << ToString(s.dos.style) << ", seed " << s.dos.seed << ": "
      << total.n_off << " attack(s), " << total.t_off << " jammed step(s) of "
      << signal.horizon() << " -> " << path.string() << "\n";
  return kOk;
}

// --- validate --------------------------------------------------------------

struct ValidateArgs {
  std::string signal;
  std::string certificate;
  std::string out;
};

int CmdValidate(const ValidateArgs& a, std::ostream& out, std::ostream&) {
  const DosSignal signal = io::DosSignalFromJson(io::ReadJsonFile(a.signal));
  const SynthesisCertificate cert =
      io::CertificateFromJson(io::ReadJsonFile(a.certificate));
  const DosBudget budget = DosBudget::FromCertificate(cert);
  const ValidationReport report = Validate(signal, budget);
  const io::Json j = io::ValidationReportToJson(report, budget);
  if (!a.out.empty()) io::WriteTextFile(a.out, Dump(j));
  out << (report.admissible() ? "admissible" : "inadmissible")
      << ": rate bound " << Sig6(budget.rate_bound) << ", frequency bound "
      << Sig6(budget.freq_bound) << ", worst rate margin "
      << Sig6(report.worst_rate_margin) << " (k=" << report.worst_rate_k
      << "), worst frequency margin " << Sig6(report.worst_freq_margin)
      << " (k=" << report.worst_freq_k << "), " << report.violations.size()
      << " violating prefix(es)\n";
  return report.admissible() ? kOk : kInadmissibleDos;
}

// --- report ----------------------------------------------------------------

struct ReportArgs {
  std::string trace;
  std::optional<double> sample_period;
  std::string json;
};

int CmdReport(const ReportArgs& a, std::ostream& out, std::ostream&) {
  std::ifstream in(a.trace);
  if (!in) throw ConfigError("cannot open " + a.trace);
  const io::CsvTrace trace = io::ReadTraceCsv(in);
  const double period = a.sample_period.value_or(trace.sample_period);
  if (!(period > 0.0)) {
    throw ConfigError("sample period unknown; pass --sample-period");
  }
  const TransmissionStats event = SummarizeTransmissions(trace.transmitted, period);
  const TransmissionStats periodic = SummarizeTransmissions(
      std::vector<bool>(trace.transmitted.size(), true), period);

  char line[160];
  out << "Control strategy                  tau_max(s)  tau_min(s)  u_total\n";
  std::snprintf(line, sizeof(line), "%-33s %-11s %-11s %zu\n",
                "Periodic feedback control", Sig6(periodic.tau_max).c_str(),
                Sig6(periodic.tau_min).c_str(), periodic.u_total);
  out << line;
  std::snprintf(line, sizeof(line), "%-33s %-11s %-11s %zu\n",
                "Event-triggered control with DoS", Sig6(event.tau_max).c_str(),
                Sig6(event.tau_min).c_str(), event.u_total);
  out << line;
  if (event.degenerate) out << "(fewer than two transmissions)\n";

  if (!a.json.empty()) {
    io::Json j;
    j["periodic"] = {{"u_total", periodic.u_total},
                     {"tau_min", periodic.tau_min},
                     {"tau_max", periodic.tau_max}};
    j["event_triggered"] = {{"u_total", event.u_total},
                            {"tau_min", event.tau_min},
                            {"tau_max", event.tau_max},
                            {"degenerate", event.degenerate}};
    io::WriteTextFile(a.json, Dump(j));
  }
  return kOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Event-triggered robust control under DoS attacks"};
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Compute a certificate");
  synth_cmd->add_option("scenario", synth.scenario, "Scenario JSON")->required();
  AddSynthesisFlags(synth_cmd, synth.overrides);
  synth_cmd->add_option("--alpha-sweep", synth.alpha_sweep,
                        "lo:hi:steps, pick alpha closest to reference.K");
  synth_cmd->add_flag("--allow-invalid", synth.allow_invalid,
                      "Exit 0 even when synthesis conditions fail");
  synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory");

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run the closed loop");
  sim_cmd->add_option("scenario", sim.scenario, "Scenario JSON")->required();
  AddSynthesisFlags(sim_cmd, sim.overrides);
  sim_cmd->add_option("--seed", sim.seed, "Override DoS and uncertainty seeds");
  sim_cmd->add_flag("--no-dos", sim.no_dos, "Run without attacks");
  sim_cmd->add_flag("--require-valid-certificate", sim.require_valid,
                    "Refuse certificates with failed flags");
  sim_cmd->add_option("--certificate", sim.certificate,
                      "Use this certificate instead of synthesizing");
  sim_cmd->add_option("--out-dir", sim.out_dir, "Output directory");

  DosgenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("dosgen", "Generate a DoS signal");
  gen_cmd->add_option("scenario", gen.scenario, "Scenario JSON")->required();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--style", gen.style,
                      "uniform-random | burst | adversarial-greedy")
      ->check(CLI::IsMember({"uniform-random", "burst", "adversarial-greedy"}));
  gen_cmd->add_option("--horizon", gen.horizon, "Horizon in steps");
  gen_cmd->add_option("--min-intervals", gen.min_intervals,
                      "Fail unless at least this many attacks fit");
  gen_cmd->add_option("--certificate", gen.certificate,
                      "Budget from this certificate");
  gen_cmd->add_option("--out", gen.out, "Output file");
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory");

  ValidateArgs val;
  CLI::App* val_cmd =
      app.add_subcommand("validate", "Check a DoS signal against a budget");
  val_cmd->add_option("signal", val.signal, "DoS signal JSON")->required();
  val_cmd->add_option("certificate", val.certificate, "Certificate JSON")
      ->required();
  val_cmd->add_option("--out", val.out, "Write the report JSON here");

  ReportArgs rep;
  CLI::App* rep_cmd =
      app.add_subcommand("report", "Transmission table for a trace CSV");
  rep_cmd->add_option("trace", rep.trace, "Trace CSV")->required();
  rep_cmd->add_option("--sample-period", rep.sample_period,
                      "Seconds per step (default: from the t column)");
  rep_cmd->add_option("--json", rep.json, "Also write the stats as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (*synth_cmd) return CmdSynth(synth, out, err);
    if (*sim_cmd) return CmdSimulate(sim, out, err);
    if (*gen_cmd) return CmdDosgen(gen, out, err);
    if (*val_cmd) return CmdValidate(val, out, err);
    if (*rep_cmd) return CmdReport(rep, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DegenerateStatsError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InfeasibleError& e) {
    err << "DoS budget: " << e.what() << "\n";
    return kInadmissibleDos;
  } catch (const DivergenceError& e) {
    err << "divergence at step " << e.step() << ": " << e.what() << "\n";
    return kDivergence;
  } catch (const ContractError& e) {
    err << "contract violation: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "synthesis error: " << e.what() << "\n";
    return kSynthesisError;
  }
  return kConfigError;
}

}  // namespace etdos::cli
