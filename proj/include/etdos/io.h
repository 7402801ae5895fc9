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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "etdos/diagnostics.h"
#include "etdos/dos.h"
#include "etdos/numerics.h"
#include "etdos/simulator.h"
#include "etdos/synthesis.h"

namespace etdos::io {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite.
std::string FormatDouble(double v);

/// Finite values as numbers, non-finite ones as the strings above.
Json ScalarToJson(double v);
/// Inverse of ScalarToJson. Throws ConfigError naming `field`.
double ScalarFromJson(const Json& j, std::string_view field);

/// Row-major nested arrays.
Json MatrixToJson(const Matrix& M);
/// Nested arrays, or {"scaled_identity": s} when `dim` is given.
Matrix MatrixFromJson(const Json& j, std::string_view field,
                      std::optional<Eigen::Index> dim = std::nullopt);
Vector VectorFromJson(const Json& j, std::string_view field);

Json CertificateToJson(const SynthesisCertificate& cert);
SynthesisCertificate CertificateFromJson(const Json& j);

/// {"horizon": k, "intervals": [[start, duration], ...]}
Json DosSignalToJson(const DosSignal& signal);
DosSignal DosSignalFromJson(const Json& j);

Json ValidationReportToJson(const ValidationReport& report,
                            const DosBudget& budget);
Json StabilityReportToJson(const StabilityReport& report,
                           const std::optional<TransmissionStats>& stats);

/// Header k,t,x1..xn,u1..um,event,transmitted,jammed,dos_active,V,e_norm,
/// x_norm,threshold_slack; one row per step.
void WriteTraceCsv(std::ostream& out, const SimulationTrace& trace);

/// The columns of an exported trace that the report needs.
struct CsvTrace {
  std::vector<double> t;
  std::vector<bool> transmitted;
  std::vector<bool> dos_active;
  double sample_period = 0.0;  // t[1] − t[0], 0 for a single row
};

CsvTrace ReadTraceCsv(std::istream& in);

Json ReadJsonFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace etdos::io
