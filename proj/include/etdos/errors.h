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
#include <stdexcept>
#include <string>

namespace etdos {

/// Base of every error thrown by the library. The CLI maps subclasses onto
/// its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not match the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated (e.g. asymmetric input).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input: bad scenario fields, exhausted sequences.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The synthesis problem has no solution with the given data
/// (rank-deficient B, non-PD weights).
class SynthesisImpossible : public Error {
 public:
  using Error::Error;
};

/// A factorization failed or a matrix was numerically singular.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Riccati iteration hit its iteration cap.
class IterationBudgetError : public Error {
 public:
  IterationBudgetError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

/// An iterate or a simulated state left the admissible set (lost PD,
/// NaN/Inf). `step` is the first offending iteration or time step.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// The trigger threshold denominator vanished (K = 0).
class DegenerateTriggerError : public Error {
 public:
  using Error::Error;
};

/// Requested DoS signal cannot satisfy the budget.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain where a quantity is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Scenario or file content does not match its schema.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A run demanded a valid certificate and got one with failed flags.
class InvalidCertificateError : public Error {
 public:
  using Error::Error;
};

/// Transmission statistics requested on a trace with no transmissions.
class DegenerateStatsError : public Error {
 public:
  using Error::Error;
};

}  // namespace etdos
