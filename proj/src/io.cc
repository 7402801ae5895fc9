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

#include "etdos/io.h"

#include <charconv>
#include <cstdint>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "etdos/errors.h"

namespace etdos::io {

namespace {

std::string Field(std::string_view parent, std::string_view key) {
  return std::string(parent) + "." + std::string(key);
}

const Json& Require(const Json& j, std::string_view key,
                    std::string_view parent) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError("missing field " + Field(parent, key));
  }
  return j.at(std::string(key));
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double ParseCsvDouble(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("bad number '" + s + "' in trace CSV");
  }
  return v;
}

}  // namespace

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Json ScalarToJson(double v) {
  if (std::isfinite(v)) return v;
  return FormatDouble(v);
}

double ScalarFromJson(const Json& j, std::string_view field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigError("field " + std::string(field) + " must be a number");
}

Json MatrixToJson(const Matrix& M) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix MatrixFromJson(const Json& j, std::string_view field,
                      std::optional<Eigen::Index> dim) {
  if (j.is_object()) {
    if (!dim || j.size() != 1 || !j.contains("scaled_identity") ||
        !j.at("scaled_identity").is_number()) {
      throw ConfigError("field " + std::string(field) +
                        " must be a nested array or {\"scaled_identity\": s}");
    }
    return j.at("scaled_identity").get<double>() *
           Matrix::Identity(*dim, *dim);
  }
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw ConfigError("field " + std::string(field) +
                      " must be a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  Matrix M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.size() != cols) {
      throw ConfigError("field " + std::string(field) + " row " +
                        std::to_string(r) + " has the wrong length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) {
        throw ConfigError("field " + std::string(field) + "[" +
                          std::to_string(r) + "][" + std::to_string(c) +
                          "] must be a number");
      }
      M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          row[c].get<double>();
    }
  }
  return M;
}

Vector VectorFromJson(const Json& j, std::string_view field) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError("field " + std::string(field) +
                      " must be a non-empty array");
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ConfigError("field " + std::string(field) + "[" +
                        std::to_string(i) + "] must be a number");
    }
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Json CertificateToJson(const SynthesisCertificate& c) {
  Json j;
  j["P"] = MatrixToJson(c.P);
  j["K"] = MatrixToJson(c.K);
  j["L"] = MatrixToJson(c.L);
  j["M"] = MatrixToJson(c.M);
  j["Q1"] = MatrixToJson(c.Q1);
  j["mu"] = ScalarToJson(c.mu);
  j["xi1"] = ScalarToJson(c.xi1);
  j["xi2"] = ScalarToJson(c.xi2);
  j["c1"] = ScalarToJson(c.c1);
  j["c2"] = ScalarToJson(c.c2);
  j["gamma"] = ScalarToJson(c.gamma);
  j["Xi"] = ScalarToJson(c.Xi);
  j["dos_rate_bound"] = ScalarToJson(c.dos_rate_bound);
  j["Ta"] = ScalarToJson(c.Ta);
  j["flags"] = {
      {"epsilon_bound", c.flags.epsilon_bound},
      {"q1_positive", c.flags.q1_positive},
      {"c1_in_unit", c.flags.c1_in_unit},
      {"eta1_sq_above_c1", c.flags.eta1_sq_above_c1},
      {"eta1_above_c1", c.flags.eta1_above_c1},
      {"trigger_degenerate", c.flags.trigger_degenerate},
      {"valid", c.valid()},
  };
  j["residual"] = ScalarToJson(c.residual);
  j["lambda_min_P"] = ScalarToJson(c.lambda_min_P);
  j["lambda_max_P"] = ScalarToJson(c.lambda_max_P);
  j["alpha"] = c.alpha;
  j["sigma"] = c.sigma;
  j["epsilon"] = c.epsilon;
  j["eta1"] = c.eta1;
  j["eta2"] = c.eta2;
  j["mu_formula"] =
      c.mu_formula == MuFormula::kDerived ? "derived" : "as_printed";
  j["gamma_formula"] =
      c.gamma_formula == GammaFormula::kDerived ? "derived" : "as_printed";
  return j;
}

SynthesisCertificate CertificateFromJson(const Json& j) {
  constexpr std::string_view kParent = "certificate";
  SynthesisCertificate c;
  c.P = MatrixFromJson(Require(j, "P", kParent), "P");
  c.K = MatrixFromJson(Require(j, "K", kParent), "K");
  c.L = MatrixFromJson(Require(j, "L", kParent), "L");
  c.M = MatrixFromJson(Require(j, "M", kParent), "M");
  c.Q1 = MatrixFromJson(Require(j, "Q1", kParent), "Q1");
  c.mu = ScalarFromJson(Require(j, "mu", kParent), "mu");
  c.xi1 = ScalarFromJson(Require(j, "xi1", kParent), "xi1");
  c.xi2 = ScalarFromJson(Require(j, "xi2", kParent), "xi2");
  c.c1 = ScalarFromJson(Require(j, "c1", kParent), "c1");
  c.c2 = ScalarFromJson(Require(j, "c2", kParent), "c2");
  c.gamma = ScalarFromJson(Require(j, "gamma", kParent), "gamma");
  c.Xi = ScalarFromJson(Require(j, "Xi", kParent), "Xi");
  c.dos_rate_bound =
      ScalarFromJson(Require(j, "dos_rate_bound", kParent), "dos_rate_bound");
  c.Ta = ScalarFromJson(Require(j, "Ta", kParent), "Ta");
  c.residual = ScalarFromJson(Require(j, "residual", kParent), "residual");
  const Json& flags = Require(j, "flags", kParent);
  auto flag = [&](const char* key) {
    const Json& f = Require(flags, key, "certificate.flags");
    if (!f.is_boolean()) {
      throw ConfigError(std::string("certificate.flags.") + key +
                        " must be a boolean");
    }
    return f.get<bool>();
  };
  c.flags.epsilon_bound = flag("epsilon_bound");
  c.flags.q1_positive = flag("q1_positive");
  c.flags.c1_in_unit = flag("c1_in_unit");
  c.flags.eta1_sq_above_c1 = flag("eta1_sq_above_c1");
  c.flags.eta1_above_c1 = flag("eta1_above_c1");
  c.flags.trigger_degenerate = flag("trigger_degenerate");
  auto optional_scalar = [&](const char* key, double fallback) {
    return j.contains(key) ? ScalarFromJson(j.at(key), key) : fallback;
  };
  c.lambda_min_P = optional_scalar("lambda_min_P", 0.0);
  c.lambda_max_P = optional_scalar("lambda_max_P", 0.0);
  c.alpha = optional_scalar("alpha", 1.0);
  c.sigma = optional_scalar("sigma", 0.0);
  c.epsilon = optional_scalar("epsilon", 0.0);
  c.eta1 = optional_scalar("eta1", 0.0);
  c.eta2 = optional_scalar("eta2", 0.0);
  if (j.contains("mu_formula") && j.at("mu_formula") == "as_printed") {
    c.mu_formula = MuFormula::kAsPrinted;
  }
  if (j.contains("gamma_formula") && j.at("gamma_formula") == "as_printed") {
    c.gamma_formula = GammaFormula::kAsPrinted;
  }
  return c;
}

namespace {

bool NonNegativeInteger(const Json& j) {
  return j.is_number_integer() && j.get<std::int64_t>() >= 0;
}

}  // namespace

Json DosSignalToJson(const DosSignal& signal) {
  Json intervals = Json::array();
  for (const AttackInterval& iv : signal.intervals()) {
    intervals.push_back(Json::array({iv.start, iv.duration}));
  }
  Json j;
  j["horizon"] = signal.horizon();
  j["intervals"] = std::move(intervals);
  return j;
}

DosSignal DosSignalFromJson(const Json& j) {
  constexpr std::string_view kParent = "dos";
  for (const auto& [key, _] : j.items()) {
    if (key != "horizon" && key != "intervals") {
      throw ConfigError("unknown field dos." + key);
    }
  }
  const Json& h = Require(j, "horizon", kParent);
  if (!NonNegativeInteger(h)) {
    throw ConfigError("dos.horizon must be a nonnegative integer");
  }
  const Json& list = Require(j, "intervals", kParent);
  if (!list.is_array()) throw ConfigError("dos.intervals must be an array");
  std::vector<AttackInterval> intervals;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Json& pair = list[i];
    if (!pair.is_array() || pair.size() != 2 ||
        !NonNegativeInteger(pair[0]) || !NonNegativeInteger(pair[1])) {
      throw ConfigError("dos.intervals[" + std::to_string(i) +
                        "] must be [start, duration]");
    }
    intervals.push_back(
        {pair[0].get<std::size_t>(), pair[1].get<std::size_t>()});
  }
  try {
    return DosSignal(h.get<std::size_t>(), std::move(intervals));
  } catch (const InputError& e) {
    throw ConfigError(std::string("dos: ") + e.what());
  }
}

Json ValidationReportToJson(const ValidationReport& report,
                            const DosBudget& budget) {
  Json violations = Json::array();
  for (const PrefixViolation& v : report.violations) {
    violations.push_back({{"k", v.k},
                          {"rate", v.rate},
                          {"freq", v.freq},
                          {"rate_exceeded", v.rate_exceeded},
                          {"freq_exceeded", v.freq_exceeded}});
  }
  Json j;
  j["admissible"] = report.admissible();
  j["rate_bound"] = ScalarToJson(budget.rate_bound);
  j["freq_bound"] = ScalarToJson(budget.freq_bound);
  j["worst_rate_margin"] = ScalarToJson(report.worst_rate_margin);
  j["worst_rate_k"] = report.worst_rate_k;
  j["worst_freq_margin"] = ScalarToJson(report.worst_freq_margin);
  j["worst_freq_k"] = report.worst_freq_k;
  j["violations"] = std::move(violations);
  return j;
}

Json StabilityReportToJson(const StabilityReport& report,
                           const std::optional<TransmissionStats>& stats) {
  Json j;
  j["ok"] = report.ok();
  j["budget_admissible"] = report.budget_admissible;
  j["uncertainty_bound_held"] = report.uncertainty_bound_held;
  j["lyapunov_report_only"] = report.lyapunov_report_only;
  j["lyapunov_violations"] = report.lyapunov_violations;
  j["iss_bound_violations"] = report.iss_bound_violations;
  j["worst_margin"] = ScalarToJson(report.worst_margin);
  j["worst_margin_k"] = report.worst_margin_k;
  Json envelope = Json::array();
  for (double v : report.envelope) envelope.push_back(ScalarToJson(v));
  j["envelope"] = std::move(envelope);
  j["budget_violations"] = report.budget.violations.size();
  // Attack-interval segments use exponent (tau - a_i), matching the
  // combined bound; recorded so consumers can tell which variant ran.
  j["metadata"] = {{"attack_segment_exponent", "tau - a_i"}};
  if (stats) {
    j["transmissions"] = {{"u_total", stats->u_total},
                          {"tau_min", stats->tau_min},
                          {"tau_max", stats->tau_max},
                          {"periodic_baseline", stats->periodic_baseline},
                          {"degenerate", stats->degenerate}};
  }
  return j;
}

void WriteTraceCsv(std::ostream& out, const SimulationTrace& trace) {
  const Eigen::Index n = trace.rows.empty() ? 0 : trace.rows.front().x.size();
  const Eigen::Index m = trace.rows.empty() ? 0 : trace.rows.front().u.size();
  out << "k,t";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x" << i;
  for (Eigen::Index i = 1; i <= m; ++i) out << ",u" << i;
  out << ",event,transmitted,jammed,dos_active,V,e_norm,x_norm,"
         "threshold_slack\n";
  for (const TraceRow& r : trace.rows) {
    out << r.k << ','
        << FormatDouble(static_cast<double>(r.k) * trace.sample_period);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << FormatDouble(r.x(i));
    for (Eigen::Index i = 0; i < m; ++i) out << ',' << FormatDouble(r.u(i));
    out << ',' << int{r.event} << ',' << int{r.transmitted} << ','
        << int{r.jammed} << ',' << int{r.dos_active} << ','
        << FormatDouble(r.V) << ',' << FormatDouble(r.e.norm()) << ','
        << FormatDouble(r.x.norm()) << ',' << FormatDouble(r.threshold_slack)
        << '\n';
  }
}

CsvTrace ReadTraceCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace CSV is empty");
  const std::vector<std::string> header = SplitCsvLine(line);
  auto column = [&](std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw ConfigError("trace CSV has no column '" + std::string(name) + "'");
  };
  const std::size_t t_col = column("t");
  const std::size_t tx_col = column("transmitted");
  const std::size_t dos_col = column("dos_active");

  CsvTrace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = SplitCsvLine(line);
    if (cells.size() != header.size()) {
      throw ConfigError("trace CSV line " + std::to_string(line_no) +
                        " has " + std::to_string(cells.size()) +
                        " cells, header has " + std::to_string(header.size()));
    }
    trace.t.push_back(ParseCsvDouble(cells[t_col]));
    trace.transmitted.push_back(cells[tx_col] == "1");
    trace.dos_active.push_back(cells[dos_col] == "1");
  }
  if (trace.t.size() >= 2) trace.sample_period = trace.t[1] - trace.t[0];
  return trace;
}

Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

}  // namespace etdos::io
