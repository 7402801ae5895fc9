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

#include <iosfwd>
#include <string>
#include <vector>

namespace etdos::cli {

/// Process exit codes, a stable contract for scripts.
enum ExitCode : int {
  kOk = 0,
  kIssViolation = 1,
  kConfigError = 2,
  kSynthesisError = 3,
  kDivergence = 4,
  kInadmissibleDos = 5,
};

/// Runs one CLI invocation; args exclude the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace etdos::cli
