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

#include "etdos/numerics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "etdos/errors.h"

namespace etdos {

namespace {

std::string Shape(const Matrix& M) {
  return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

Eigen::VectorXd SymmetricEigenvalues(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(S, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge");
  }
  return solver.eigenvalues();
}

}  // namespace

void RequireFinite(const Matrix& M, std::string_view name) {
  if (!M.allFinite()) {
    throw ContractError(std::string(name) + " has non-finite entries");
  }
}

void RequireSquare(const Matrix& M, std::string_view name) {
  if (M.rows() != M.cols()) {
    throw DimensionError(std::string(name) + " must be square, got " +
                         Shape(M));
  }
}

Matrix Symmetrize(const Matrix& M) {
  RequireSquare(M, "matrix");
  return 0.5 * (M + M.transpose());
}

Matrix LeftPseudoInverse(const Matrix& B, double tol, std::string_view name) {
  RequireFinite(B, name);
  if (B.cols() == 0 || B.rows() < B.cols()) {
    throw SynthesisImpossible(std::string(name) + " (" + Shape(B) +
                              ") cannot have full column rank");
  }
  const Matrix gram = B.transpose() * B;
  const Eigen::VectorXd ev = SymmetricEigenvalues(gram);
  if (ev(0) <= tol * std::max(1.0, ev(ev.size() - 1))) {
    throw SynthesisImpossible(std::string(name) +
                              " is rank deficient (lambda_min(B'B) = " +
                              std::to_string(ev(0)) + ")");
  }
  return gram.llt().solve(B.transpose());
}

bool IsPositiveDefinite(const Matrix& M, double tol) {
  RequireSquare(M, "matrix");
  if (M.size() == 0) return true;
  return EigExtremes(M, std::max(tol, kDefaultTol)).lambda_min > tol;
}

SymmetricEigenSummary EigExtremes(const Matrix& M, double sym_tol) {
  RequireSquare(M, "matrix");
  RequireFinite(M, "matrix");
  if (M.size() == 0) throw DimensionError("eigenvalues of an empty matrix");
  const double asym = (M - M.transpose()).norm();
  if (asym > sym_tol * std::max(1.0, M.norm())) {
    throw ContractError("matrix is not symmetric (asymmetry " +
                        std::to_string(asym) + ")");
  }
  const Eigen::VectorXd ev = SymmetricEigenvalues(Symmetrize(M));
  return {ev(0), ev(ev.size() - 1)};
}

bool PsdDominates(const Matrix& X, const Matrix& Y, double tol) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
    throw DimensionError("psd comparison of " + Shape(X) + " and " +
                         Shape(Y));
  }
  RequireSquare(X, "X");
  if (X.size() == 0) return true;
  return EigExtremes(Y - X, std::max(tol, kDefaultTol)).lambda_min >= -tol;
}

double SpectralNorm(const Matrix& M) {
  RequireFinite(M, "matrix");
  if (M.size() == 0) return 0.0;
  const Matrix gram = M.transpose() * M;
  const Eigen::VectorXd ev = SymmetricEigenvalues(Symmetrize(gram));
  return std::sqrt(std::max(0.0, ev(ev.size() - 1)));
}

Matrix SpdInverse(const Matrix& M, std::string_view name) {
  return SpdSolve(M, Matrix::Identity(M.rows(), M.cols()), name);
}

Matrix SpdSolve(const Matrix& M, const Matrix& R, std::string_view name) {
  RequireSquare(M, name);
  const Eigen::LLT<Matrix> llt(Symmetrize(M));
  if (llt.info() != Eigen::Success) {
    throw NumericalError(std::string(name) +
                         " is not positive definite (Cholesky failed, "
                         "rcond ~ " +
                         std::to_string(ConditionEstimate(M)) + ")");
  }
  return llt.solve(R);
}

double ConditionEstimate(const Matrix& M) {
  RequireSquare(M, "matrix");
  if (M.size() == 0) return 1.0;
  return Eigen::PartialPivLU<Matrix>(M).rcond();
}

}  // namespace etdos
