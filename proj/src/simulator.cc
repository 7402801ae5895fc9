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

#include "etdos/simulator.h"

#include <cmath>
#include <string>

#include "etdos/errors.h"

namespace etdos {

void PlantModel::Validate() const {
  const Eigen::Index n = A.rows();
  if (n == 0 || A.cols() != n) throw DimensionError("A must be square");
  if (B.rows() != n || B.cols() == 0) {
    throw DimensionError("B must have as many rows as A");
  }
  if (F.rows() != n || F.cols() != n) throw DimensionError("F must be n x n");
  RequireFinite(A, "A");
  RequireFinite(B, "B");
  RequireFinite(F, "F");
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (EigExtremes(F).lambda_min < -kDefaultTol) {
    throw InputError("F must be symmetric positive semidefinite");
  }
}

UncertaintySampler::UncertaintySampler(UncertaintySpec spec,
                                       const PlantModel& plant,
                                       BoundPolicy policy)
    : spec_(std::move(spec)),
      bound_(plant.epsilon * plant.F / 2.0),
      policy_(policy),
      rng_(spec_.seed) {
  if (spec_.mode == UncertaintyMode::kPerStep && !(spec_.p_min <= spec_.p_max)) {
    throw InputError("uncertainty range needs p_min <= p_max");
  }
}

Matrix UncertaintySampler::Next(std::size_t k) {
  const Eigen::Index n = bound_.rows();
  Matrix delta;
  switch (spec_.mode) {
    case UncertaintyMode::kFixed:
      delta = spec_.p * Matrix::Identity(n, n);
      break;
    case UncertaintyMode::kPerStep:
      delta = rng_.Uniform(spec_.p_min, spec_.p_max) * Matrix::Identity(n, n);
      break;
    case UncertaintyMode::kCustom:
      if (k >= spec_.sequence.size()) {
        throw InputError("custom uncertainty sequence exhausted at step " +
                         std::to_string(k));
      }
      delta = spec_.sequence[k];
      if (delta.rows() != n || delta.cols() != n) {
        throw DimensionError("custom uncertainty entry " + std::to_string(k) +
                             " has the wrong shape");
      }
      break;
  }
  if (!PsdDominates(delta.transpose() * delta, bound_, kDefaultTol)) {
    if (policy_ == BoundPolicy::kError) {
      throw ContractError("uncertainty at step " + std::to_string(k) +
                          " violates dA'dA <= eps F / 2");
    }
    ++bound_violations_;
  }
  return delta;
}

double TriggerSlack(double mu, double x_sq, double e_sq) {
  return (x_sq == 0.0 ? 0.0 : mu * x_sq) - e_sq;
}

StepResult Step(const PlantModel& plant, const Vector& x, const Vector& x_held,
                bool has_transmitted, const Matrix& delta_A, const Matrix& K,
                bool dos_active, double mu) {
  StepResult r;
  const Vector e = x_held - x;
  r.flags.slack = TriggerSlack(mu, x.squaredNorm(), e.squaredNorm());
  r.flags.event = !has_transmitted || r.flags.slack <= 0.0;
  r.flags.transmitted = r.flags.event && !dos_active;
  r.flags.jammed = r.flags.event && dos_active;

  r.x_held = r.flags.transmitted ? x : x_held;
  r.has_transmitted = has_transmitted || r.flags.transmitted;
  r.e = r.x_held - x;
  r.u = r.has_transmitted ? Vector(K * r.x_held) : Vector::Zero(K.rows());
  r.x_next = (plant.A + delta_A) * x + plant.B * r.u;
  return r;
}

SimulationTrace Run(const SimulationConfig& config) {
  config.plant.Validate();
  const SynthesisCertificate& cert = config.certificate;
  const Eigen::Index n = config.plant.A.rows();
  if (config.require_valid_certificate && !cert.valid()) {
    throw InvalidCertificateError(
        "certificate failed its validity flags and a valid one is required");
  }
  if (config.x0.size() != n) {
    throw DimensionError("x0 has " + std::to_string(config.x0.size()) +
                         " entries, plant has " + std::to_string(n));
  }
  if (cert.K.rows() != config.plant.B.cols() || cert.K.cols() != n ||
      cert.P.rows() != n || cert.P.cols() != n) {
    throw DimensionError("certificate does not match the plant dimensions");
  }
  if (config.horizon < 1) throw InputError("horizon must be at least 1 step");
  if (config.dos.horizon() != config.horizon) {
    throw InputError("DoS signal horizon " +
                     std::to_string(config.dos.horizon()) +
                     " differs from the run horizon " +
                     std::to_string(config.horizon));
  }
  if (!config.x0.allFinite()) throw InputError("x0 must be finite");

  UncertaintySampler sampler(config.uncertainty, config.plant, config.bound_policy);
  const std::vector<bool> jammed = config.dos.Mask();

  SimulationTrace trace;
  trace.sample_period = config.sample_period;
  trace.rows.reserve(config.horizon);

  Vector x = config.x0;
  Vector x_held = config.x0;
  bool has_transmitted = false;
  for (std::size_t k = 0; k < config.horizon; ++k) {
    const Matrix delta = sampler.Next(k);
    StepResult s = Step(config.plant, x, x_held, has_transmitted, delta,
                        cert.K, jammed[k], cert.mu);
    if (!s.x_next.allFinite()) {
      throw DivergenceError(
          "state became non-finite at step " + std::to_string(k + 1), k + 1);
    }
    TraceRow row;
    row.k = k;
    row.V = x.dot(cert.P * x);
    row.x = std::move(x);
    row.x_held = s.x_held;
    row.u = std::move(s.u);
    row.e = std::move(s.e);
    row.event = s.flags.event;
    row.transmitted = s.flags.transmitted;
    row.jammed = s.flags.jammed;
    row.dos_active = jammed[k];
    row.threshold_slack = s.flags.slack;
    trace.rows.push_back(std::move(row));

    x = std::move(s.x_next);
    x_held = std::move(s.x_held);
    has_transmitted = s.has_transmitted;
  }
  trace.final_V = x.dot(cert.P * x);
  trace.final_state = std::move(x);
  trace.bound_violations = sampler.bound_violations();
  return trace;
}

std::vector<bool> PredictEvents(const SimulationConfig& config,
                                const DosSignal& signal) {
  SimulationConfig dry = config;
  dry.dos = signal;
  dry.bound_policy = BoundPolicy::kWarn;
  const SimulationTrace trace = Run(dry);
  std::vector<bool> events(trace.rows.size());
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    events[k] = trace.rows[k].event;
  }
  return events;
}

}  // namespace etdos
