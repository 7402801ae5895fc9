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

#include <optional>
#include <vector>

#include "etdos/numerics.h"

namespace etdos {

/// Which expression to use for the trigger threshold μ. kDerived keeps the
/// (P⁻¹ − εI)⁻¹ factor that also appears in ξ₂; kAsPrinted drops the
/// inverse.
enum class MuFormula { kDerived, kAsPrinted };

/// Growth factor γ = ξ₂(1+√μ)²/λ_min(P) (kDerived) or ξ₂(1+μ)²/λ_min(P)
/// (kAsPrinted).
enum class GammaFormula { kDerived, kAsPrinted };

/// Design data for the robust event-triggered controller.
struct SynthesisInputs {
  Matrix A;   // n×n nominal dynamics
  Matrix B;   // n×m input matrix, full column rank
  Matrix Q;   // n×n state weight, PSD
  Matrix F;   // n×n uncertainty bound, PSD
  Matrix R1;  // m×m input weight, PD
  Matrix R2;  // n×n virtual-input weight, PD
  double alpha = 1.0;
  double epsilon = 0.01;
  double sigma = 0.1;
  double eta1 = 0.3;
  double eta2 = 0.95;
  MuFormula mu_formula = MuFormula::kDerived;
  GammaFormula gamma_formula = GammaFormula::kDerived;

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }

  /// Throws DimensionError / InputError on any broken invariant.
  void Validate() const;
};

struct RiccatiOptions {
  double tol = 1e-10;  // Frobenius norm of the residual
  int max_iter = 10000;
  std::optional<Matrix> init;  // defaults to Q + F
};

/// Quantities derived from a candidate P that every later stage reuses.
struct RiccatiTerms {
  Matrix B_pinv;      // B⁺
  Matrix mismatch;    // I − BB⁺
  Matrix S;           // P⁻¹ + B R₁⁻¹ Bᵀ + α²(I−BB⁺)R₂⁻¹(I−BB⁺)ᵀ
  Matrix S_inv_A;     // S⁻¹A
};

/// Builds S and S⁻¹A for the given P. Throws NumericalError if S cannot be
/// factored.
RiccatiTerms ComputeRiccatiTerms(const Matrix& P, const SynthesisInputs& in);

/// ‖AᵀS⁻¹A − P + Q + F‖_F, evaluated from scratch.
double RiccatiResidual(const Matrix& P, const SynthesisInputs& in);

/// Fixed-point iteration P ← AᵀS(P)⁻¹A + Q + F. Returns the first iterate
/// whose residual is within `opts.tol`.
Matrix SolveRiccati(const SynthesisInputs& in, const RiccatiOptions& opts = {});

struct Gains {
  Matrix K;  // m×n, u = Kx
  Matrix L;  // n×n, virtual v = Lx
  Matrix M;  // n×n, S⁻¹A
};

Gains ComputeGains(const Matrix& P, const SynthesisInputs& in);

struct ConditionReport {
  Matrix Q1;
  bool epsilon_bound = false;  // ε⁻¹I − P ≻ 0
  double epsilon_bound_margin = 0.0;
  bool q1_positive = false;    // Q₁ ≻ 0
  double q1_margin = 0.0;      // λ_min(Q₁)
};

ConditionReport CheckSynthesisConditions(const Matrix& P, const Gains& gains,
                                   const SynthesisInputs& in);

/// ‖A_cᵀ P B K‖ and the norm of the e-quadratic term, shared by μ and ξ₂.
struct TriggerNorms {
  double cross = 0.0;     // ‖A_cᵀPBK‖
  double quadratic = 0.0; // ‖KᵀBᵀ(P⁻¹−εI)⁻¹BK‖, or without the inverse
};

TriggerNorms ComputeTriggerNorms(const Matrix& P, const Gains& gains,
                                 const SynthesisInputs& in, bool with_inverse);

/// μ = σλ²_min(Q₁) / (4‖A_cᵀPBK‖² + 2λ_min(Q₁)‖·‖). Requires Q₁ ≻ 0;
/// throws DegenerateTriggerError when the denominator vanishes.
double ComputeTriggerThreshold(const Matrix& P, const Gains& gains,
                               const Matrix& Q1, const SynthesisInputs& in);

struct CertificateFlags {
  bool epsilon_bound = false;      // ε⁻¹I − P ≻ 0
  bool q1_positive = false;        // Q₁ ≻ 0
  bool c1_in_unit = false;         // 0 < c₁ < 1
  bool eta1_sq_above_c1 = false;   // η₁² > c₁, rate bound positive
  bool eta1_above_c1 = false;      // η₁ > c₁
  bool trigger_degenerate = false; // K = 0, μ unbounded

  /// Hypotheses needed for the closed-loop guarantees.
  bool valid() const { return epsilon_bound && q1_positive && c1_in_unit; }
};

/// Everything the simulator and the DoS budget need, plus the evidence.
/// Infinite values mean "unbounded"; NaN means undefined (invalid
/// certificate).
struct SynthesisCertificate {
  Matrix P, K, L, M, Q1;
  double alpha = 1.0;
  double sigma = 0.0;
  double epsilon = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double mu = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  double c1 = 0.0;
  double gamma = 0.0;
  double c2 = 1.0;
  double Xi = 1.0;
  double dos_rate_bound = 0.0;
  double Ta = 0.0;  // +inf when Ξ ≤ 1 + tol
  double residual = 0.0;
  double lambda_min_P = 0.0;
  double lambda_max_P = 0.0;
  CertificateFlags flags;
  MuFormula mu_formula = MuFormula::kDerived;
  GammaFormula gamma_formula = GammaFormula::kDerived;

  bool valid() const { return flags.valid(); }
};

SynthesisCertificate ComputeCertificate(const SynthesisInputs& in,
                                        const RiccatiOptions& opts = {});

/// One point of an α sweep: max elementwise |K(α) − K_ref| (and L when a
/// reference is supplied; NaN otherwise). Non-converged points carry +inf.
struct AlphaSweepPoint {
  double alpha = 0.0;
  double k_mismatch = 0.0;
  double l_mismatch = 0.0;
  bool converged = false;
};

/// Evenly spaced α ∈ [lo, hi] with `steps` points.
std::vector<double> AlphaGrid(double lo, double hi, int steps);

AlphaSweepPoint EvaluateAlpha(const SynthesisInputs& in, double alpha,
                              const Matrix& K_ref,
                              const std::optional<Matrix>& L_ref,
                              const RiccatiOptions& opts = {});

}  // namespace etdos
