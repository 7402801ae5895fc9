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

#include <string_view>

#include <Eigen/Dense>

namespace etdos {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default tolerance for positive-definiteness and eigenvalue decisions.
inline constexpr double kDefaultTol = 1e-9;

struct SymmetricEigenSummary {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Throws ContractError naming `name` if any entry is NaN or Inf.
void RequireFinite(const Matrix& M, std::string_view name);

/// Throws DimensionError unless M is square.
void RequireSquare(const Matrix& M, std::string_view name);

/// (M + Mᵀ)/2.
Matrix Symmetrize(const Matrix& M);

/// B⁺ = (BᵀB)⁻¹Bᵀ for full-column-rank B. Throws SynthesisImpossible when
/// BᵀB is singular relative to `tol`.
Matrix LeftPseudoInverse(const Matrix& B, double tol = kDefaultTol,
                         std::string_view name = "B");

/// True iff every eigenvalue of the symmetrized M exceeds `tol`.
bool IsPositiveDefinite(const Matrix& M, double tol = kDefaultTol);

/// Extreme eigenvalues of a symmetric matrix. The input is re-symmetrized;
/// asymmetry beyond `sym_tol`·max(1, ‖M‖_F) is a ContractError.
SymmetricEigenSummary EigExtremes(const Matrix& M,
                                  double sym_tol = kDefaultTol);

/// True iff Y − X ⪰ −tol·I, i.e. λ_min(Y − X) ≥ −tol.
bool PsdDominates(const Matrix& X, const Matrix& Y, double tol = kDefaultTol);

/// Operator 2-norm, √λ_max(MᵀM).
double SpectralNorm(const Matrix& M);

/// Inverse of a symmetric positive definite matrix through Cholesky.
/// Throws NumericalError naming `name` if the factorization fails.
Matrix SpdInverse(const Matrix& M, std::string_view name);

/// Solves M X = R for symmetric positive definite M through Cholesky.
Matrix SpdSolve(const Matrix& M, const Matrix& R, std::string_view name);

/// Reciprocal condition estimate of a square matrix (LU based).
double ConditionEstimate(const Matrix& M);

}  // namespace etdos
