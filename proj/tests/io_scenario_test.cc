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


#include <bit>
#include <charconv>
#include <cstdint>
#include <random>
#include <utility>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "etdos/errors.h"
#include "etdos/io.h"
#include "etdos/scenario.h"
#include "test_support.h"

namespace etdos {
namespace {

namespace fs = std::filesystem;
using io::Json;

const fs::path kScenarios = ETDOS_SCENARIO_DIR;

Json ReactorJson() { return io::ReadJsonFile(kScenarios / "batch_reactor.json"); }

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double ParseDouble(const std::string& s) {
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

TEST(Scenario, BundledReactorIsVerbatim) {
  const ScenarioConfig s = LoadScenario(kScenarios / "batch_reactor.json");
  EXPECT_EQ(s.name, "batch_reactor");
  EXPECT_EQ(s.synthesis.A, testing::BatchReactorA());
  EXPECT_EQ(s.synthesis.B, testing::BatchReactorB());
  EXPECT_EQ(s.synthesis.Q, 4.0 * Matrix::Identity(4, 4));
  EXPECT_EQ(s.synthesis.F, 2.0 * Matrix::Identity(4, 4));
  EXPECT_EQ(s.synthesis.R1, Matrix::Identity(2, 2));
  EXPECT_EQ(s.synthesis.R2, Matrix::Identity(4, 4));
  EXPECT_EQ(s.synthesis.epsilon, 0.01);
  EXPECT_EQ(s.synthesis.sigma, 0.1);
  EXPECT_EQ(s.synthesis.eta1, 0.3);
  EXPECT_EQ(s.synthesis.eta2, 0.95);
  EXPECT_EQ(s.x0, testing::BatchReactorX0());
  EXPECT_EQ(s.horizon, 120u);
  EXPECT_EQ(s.sample_period, 0.05);
  EXPECT_EQ(s.uncertainty.mode, UncertaintyMode::kFixed);
  EXPECT_EQ(s.uncertainty.p, 0.5);
  ASSERT_TRUE(s.reference_K && s.reference_L);
  EXPECT_EQ(*s.reference_K, testing::ReferenceK());
  EXPECT_EQ(*s.reference_L, testing::ReferenceL());
  EXPECT_EQ(s.riccati.tol, 1e-10);
  EXPECT_EQ(s.riccati.max_iter, 10000);
}

TEST(Scenario, DosVariantDiffersOnlyInEta1) {
  const ScenarioConfig a = LoadScenario(kScenarios / "batch_reactor.json");
  const ScenarioConfig b = LoadScenario(kScenarios / "batch_reactor_dos.json");
  EXPECT_EQ(b.synthesis.eta1, 0.9);
  EXPECT_EQ(a.synthesis.A, b.synthesis.A);
  EXPECT_EQ(a.synthesis.eta2, b.synthesis.eta2);
  EXPECT_EQ(a.x0, b.x0);
}

TEST(Scenario, UnknownKeysRejectedEverywhere) {
  const std::vector<std::vector<std::string>> paths = {
      {}, {"plant"}, {"synthesis"}, {"uncertainty"}, {"dos"}, {"options"},
      {"reference"}};
  for (const auto& path : paths) {
    Json j = ReactorJson();
    Json* node = &j;
    for (const std::string& key : path) node = &(*node)[key];
    (*node)["bogus"] = 1;
    try {
      ParseScenario(j);
      FAIL() << "accepted bogus key under " << (path.empty() ? "" : path[0]);
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
    }
  }
}

TEST(Scenario, TypeAndValueErrorsNameTheField) {
  auto expect_field = [](Json j, const std::string& field) {
    try {
      ParseScenario(j);
      FAIL() << "accepted bad " << field;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos)
          << e.what();
    }
  };
  Json j = ReactorJson();
  j["synthesis"]["sigma"] = "0.1";
  expect_field(j, "synthesis.sigma");
  j = ReactorJson();
  j["horizon_steps"] = -3;
  expect_field(j, "horizon_steps");
  j = ReactorJson();
  j["x0"] = Json::array({1.0, 2.0});
  expect_field(j, "x0");
  j = ReactorJson();
  j["dos"]["style"] = "sneaky";
  expect_field(j, "dos.style");
  j = ReactorJson();
  j["uncertainty"] = {{"mode", "per-step-p"}, {"p_min", 0.2}, {"p_max", 0.1},
                      {"seed", 1}};
  expect_field(j, "p_min");
  j = ReactorJson();
  j["plant"].erase("B");
  expect_field(j, "plant.B");
  j = ReactorJson();
  j["synthesis"]["sigma"] = 1.5;
  expect_field(j, "sigma");
}

TEST(Scenario, UncertaintyAndDosModes) {
  Json j = ReactorJson();
  j["uncertainty"] = {{"mode", "custom-matrix-sequence"},
                      {"sequence", Json::array({{{"scaled_identity", 0.1}}})}};
  j["uncertainty"]["sequence"] =
      Json::array({Json{{"scaled_identity", 0.1}}, Json{{"scaled_identity", 0.0}}});
  j["dos"] = {{"mode", "none"}};
  ScenarioConfig s = ParseScenario(j);
  ASSERT_EQ(s.uncertainty.sequence.size(), 2u);
  EXPECT_EQ(s.uncertainty.sequence[0], 0.1 * Matrix::Identity(4, 4));
  EXPECT_EQ(s.dos.source, DosSource::kNone);

  j["dos"] = {{"mode", "generate"}, {"style", "adversarial-greedy"},
              {"seed", 3}, {"min_intervals", 2}};
  s = ParseScenario(j);
  EXPECT_EQ(s.dos.style, DosStyle::kAdversarialGreedy);
  EXPECT_EQ(s.dos.min_intervals, 2u);
}

TEST(Scenario, DosFileResolvedRelativeToScenario) {
  const fs::path dir = fs::temp_directory_path() / "etdos_io_test";
  fs::create_directories(dir);
  const DosSignal signal(120, {{3, 2}, {50, 1}});
  io::WriteTextFile(dir / "sig.json", io::DosSignalToJson(signal).dump());
  Json j = ReactorJson();
  j["dos"] = {{"mode", "file"}, {"path", "sig.json"}};
  const ScenarioConfig s = ParseScenario(j, dir);
  SynthesisCertificate unused;
  EXPECT_EQ(ResolveDosSignal(s, unused), signal);
}

TEST(Scenario, MalformedJsonFileIsConfigError) {
  const fs::path p = fs::temp_directory_path() / "etdos_bad.json";
  io::WriteTextFile(p, "{ \"plant\": ");
  EXPECT_THROW(LoadScenario(p), ConfigError);
  EXPECT_THROW(LoadScenario(fs::temp_directory_path() / "missing.json"),
               ConfigError);
}

TEST(Json, FormatDoubleRoundTrips) {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::bit_cast<double>(gen());
    if (!std::isfinite(v)) continue;
    EXPECT_EQ(ParseDouble(io::FormatDouble(v)), v);
  }
  EXPECT_EQ(io::FormatDouble(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(io::FormatDouble(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(io::FormatDouble(std::nan("")), "nan");
  EXPECT_EQ(io::FormatDouble(0.05), "0.05");
}

TEST(Json, ScalarMarkers) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(io::ScalarToJson(inf), Json("inf"));
  EXPECT_EQ(io::ScalarFromJson(Json("inf"), "x"), inf);
  EXPECT_TRUE(std::isnan(io::ScalarFromJson(Json("nan"), "x")));
  EXPECT_THROW(io::ScalarFromJson(Json("big"), "x"), ConfigError);
}

TEST(Json, MatrixForms) {
  EXPECT_EQ(io::MatrixFromJson(Json{{"scaled_identity", 3.0}}, "Q", 2),
            3.0 * Matrix::Identity(2, 2));
  EXPECT_THROW(io::MatrixFromJson(Json{{"scaled_identity", 3.0}}, "Q"),
               ConfigError);
  EXPECT_THROW(io::MatrixFromJson(Json::parse("[[1,2],[3]]"), "A"),
               ConfigError);
  const Matrix A = testing::BatchReactorA();
  EXPECT_EQ(io::MatrixFromJson(io::MatrixToJson(A), "A"), A);
}

void ExpectSameCertificate(const SynthesisCertificate& a,
                           const SynthesisCertificate& b) {
  EXPECT_EQ(a.P, b.P);
  EXPECT_EQ(a.K, b.K);
  EXPECT_EQ(a.L, b.L);
  EXPECT_EQ(a.M, b.M);
  EXPECT_EQ(a.Q1, b.Q1);
  for (auto [x, y] : {std::pair{a.mu, b.mu}, {a.xi1, b.xi1}, {a.xi2, b.xi2},
                      {a.c1, b.c1}, {a.c2, b.c2}, {a.gamma, b.gamma},
                      {a.Xi, b.Xi}, {a.dos_rate_bound, b.dos_rate_bound},
                      {a.Ta, b.Ta}, {a.residual, b.residual},
                      {a.alpha, b.alpha}, {a.eta1, b.eta1}}) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(x), std::bit_cast<std::uint64_t>(y));
  }
  EXPECT_EQ(a.flags.epsilon_bound, b.flags.epsilon_bound);
  EXPECT_EQ(a.flags.q1_positive, b.flags.q1_positive);
  EXPECT_EQ(a.flags.trigger_degenerate, b.flags.trigger_degenerate);
  EXPECT_EQ(a.mu_formula, b.mu_formula);
}

TEST(Json, CertificateRoundTripIsExact) {
  std::vector<SynthesisInputs> inputs = {testing::BatchReactorInputs(),
                                         testing::ScalarInputs()};
  SynthesisInputs zero = testing::BatchReactorInputs();
  zero.A.setZero();
  inputs.push_back(zero);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    inputs.push_back(testing::RandomSystem(seed));
  }
  for (const SynthesisInputs& in : inputs) {
    const SynthesisCertificate c = ComputeCertificate(in);
    const Json j = io::CertificateToJson(c);
    const Json reparsed = Json::parse(j.dump());
    ExpectSameCertificate(c, io::CertificateFromJson(reparsed));
  }
}

TEST(Json, CertificateHasDocumentedKeys) {
  const Json j =
      io::CertificateToJson(ComputeCertificate(testing::BatchReactorInputs()));
  for (const char* key : {"P", "K", "L", "M", "Q1", "mu", "xi1", "xi2", "c1",
                          "c2", "gamma", "Xi", "dos_rate_bound", "Ta", "flags",
                          "residual"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j["K"].is_array() && j["K"][0].is_array());
}

TEST(Json, DosSignalRoundTripAndSchema) {
  const DosSignal s(120, {{3, 2}, {50, 7}});
  const Json j = io::DosSignalToJson(s);
  EXPECT_EQ(j.dump(), R"({"horizon":120,"intervals":[[3,2],[50,7]]})");
  EXPECT_EQ(io::DosSignalFromJson(j), s);
  EXPECT_THROW(io::DosSignalFromJson(Json::parse(
                   R"({"horizon":10,"intervals":[],"extra":1})")),
               ConfigError);
  EXPECT_THROW(io::DosSignalFromJson(
                   Json::parse(R"({"horizon":10,"intervals":[[8,5]]})")),
               ConfigError);
  EXPECT_THROW(io::DosSignalFromJson(
                   Json::parse(R"({"horizon":10,"intervals":[[1]]})")),
               ConfigError);
}

SimulationTrace SmallTrace() {
  SimulationConfig cfg;
  const SynthesisInputs in = testing::BatchReactorInputs(0.9);
  cfg.plant = {in.A, in.B, in.F, in.epsilon};
  cfg.certificate = ComputeCertificate(in);
  cfg.x0 = testing::BatchReactorX0();
  cfg.horizon = 120;
  cfg.uncertainty.p = 0.05;
  cfg.dos = DosSignal(120, {{4, 3}, {40, 2}});
  return etdos::Run(cfg);
}

TEST(Csv, HeaderRowsAndPrecision) {
  const SimulationTrace t = SmallTrace();
  std::stringstream ss;
  io::WriteTraceCsv(ss, t);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line,
            "k,t,x1,x2,x3,x4,u1,u2,event,transmitted,jammed,dos_active,V,"
            "e_norm,x_norm,threshold_slack");
  std::size_t rows = 0;
  while (std::getline(ss, line)) {
    const std::vector<std::string> cells = Split(line);
    ASSERT_EQ(cells.size(), 16u);
    const TraceRow& r = t.rows[rows];
    EXPECT_EQ(cells[0], std::to_string(r.k));
    for (int i = 0; i < 4; ++i) EXPECT_EQ(ParseDouble(cells[2 + i]), r.x(i));
    EXPECT_EQ(cells[9], r.transmitted ? "1" : "0");
    EXPECT_EQ(cells[11], r.dos_active ? "1" : "0");
    EXPECT_EQ(ParseDouble(cells[12]), r.V);
    ++rows;
  }
  EXPECT_EQ(rows, 120u);
}

TEST(Csv, ReadBackForReport) {
  const SimulationTrace t = SmallTrace();
  std::stringstream ss;
  io::WriteTraceCsv(ss, t);
  const io::CsvTrace back = io::ReadTraceCsv(ss);
  ASSERT_EQ(back.transmitted.size(), 120u);
  EXPECT_DOUBLE_EQ(back.sample_period, 0.05);
  for (std::size_t k = 0; k < 120; ++k) {
    EXPECT_EQ(back.transmitted[k], t.rows[k].transmitted);
    EXPECT_EQ(back.dos_active[k], t.rows[k].dos_active);
  }
  std::stringstream bad("k,t,x1\n0,0,1\n");
  EXPECT_THROW(io::ReadTraceCsv(bad), ConfigError);
}

TEST(Report, StabilityJsonCarriesMetadata) {
  const SimulationTrace t = SmallTrace();
  const SynthesisCertificate c = ComputeCertificate(testing::BatchReactorInputs(0.9));
  const StabilityReport r =
      CheckIssEnvelope(t, c, DosSignal(120, {{4, 3}, {40, 2}}));
  const Json j = io::StabilityReportToJson(r, SummarizeTransmissions(t));
  EXPECT_EQ(j.dump(), Json::parse(j.dump()).dump());
  EXPECT_NE(j.dump().find("tau - a_i"), std::string::npos);
  EXPECT_NE(j.dump().find("u_total"), std::string::npos);
}

}  // namespace
}  // namespace etdos
