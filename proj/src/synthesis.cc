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

#include "etdos/synthesis.h"

#include <cmath>
#include <limits>
#include <string>

#include "etdos/errors.h"

namespace etdos {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void RequireShape(const Matrix& M, Eigen::Index rows, Eigen::Index cols,
                  const char* name) {
  if (M.rows() != rows || M.cols() != cols) {
    throw DimensionError(std::string(name) + " must be " +
                         std::to_string(rows) + "x" + std::to_string(cols) +
                         ", got " + std::to_string(M.rows()) + "x" +
                         std::to_string(M.cols()));
  }
  RequireFinite(M, name);
}

void RequireSymmetric(const Matrix& M, const char* name) {
  if ((M - M.transpose()).norm() > kDefaultTol * std::max(1.0, M.norm())) {
    throw InputError(std::string(name) + " must be symmetric");
  }
}

// (P⁻¹ − εI), the matrix whose inverse shows up in Q₁, μ and ξ₂.
Matrix ShiftedInverse(const Matrix& P, double epsilon) {
  return SpdInverse(P, "P") -
         epsilon * Matrix::Identity(P.rows(), P.cols());
}

}  // namespace

void SynthesisInputs::Validate() const {
  const Eigen::Index n = A.rows();
  if (n == 0) throw DimensionError("A must be non-empty");
  RequireShape(A, n, n, "A");
  if (B.rows() != n || B.cols() == 0) {
    throw DimensionError("B must have " + std::to_string(n) +
                         " rows and at least one column");
  }
  RequireFinite(B, "B");
  const Eigen::Index m = B.cols();
  RequireShape(Q, n, n, "Q");
  RequireShape(F, n, n, "F");
  RequireShape(R1, m, m, "R1");
  RequireShape(R2, n, n, "R2");
  RequireSymmetric(Q, "Q");
  RequireSymmetric(F, "F");
  RequireSymmetric(R1, "R1");
  RequireSymmetric(R2, "R2");
  if (EigExtremes(Q).lambda_min < -kDefaultTol) {
    throw InputError("Q must be positive semidefinite");
  }
  if (EigExtremes(F).lambda_min < -kDefaultTol) {
    throw InputError("F must be positive semidefinite");
  }
  if (!IsPositiveDefinite(R1)) throw InputError("R1 must be positive definite");
  if (!IsPositiveDefinite(R2)) throw InputError("R2 must be positive definite");
  if (!std::isfinite(alpha)) throw InputError("alpha must be finite");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InputError("epsilon must be positive");
  }
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw InputError("sigma must lie in (0, 1)");
  }
  if (!(eta1 > 0.0 && eta1 < eta2 && eta2 < 1.0)) {
    throw InputError("need 0 < eta1 < eta2 < 1");
  }
}

RiccatiTerms ComputeRiccatiTerms(const Matrix& P, const SynthesisInputs& in) {
  const Eigen::Index n = in.n();
  RiccatiTerms t;
  t.B_pinv = LeftPseudoInverse(in.B);
  t.mismatch = Matrix::Identity(n, n) - in.B * t.B_pinv;
  t.S = SpdInverse(P, "P") + in.B * SpdSolve(in.R1, in.B.transpose(), "R1") +
        in.alpha * in.alpha * t.mismatch *
            SpdSolve(in.R2, t.mismatch.transpose(), "R2");
  t.S = Symmetrize(t.S);
  t.S_inv_A = SpdSolve(t.S, in.A, "S");
  return t;
}

double RiccatiResidual(const Matrix& P, const SynthesisInputs& in) {
  const RiccatiTerms t = ComputeRiccatiTerms(P, in);
  return (in.A.transpose() * t.S_inv_A - P + in.Q + in.F).norm();
}

Matrix SolveRiccati(const SynthesisInputs& in, const RiccatiOptions& opts) {
  in.Validate();
  Matrix P = opts.init ? *opts.init : Matrix(in.Q + in.F);
  RequireShape(P, in.n(), in.n(), "initial P");
  if (!IsPositiveDefinite(P)) {
    throw InputError("initial P must be symmetric positive definite");
  }
  P = Symmetrize(P);

  double residual = kInf;
  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    RiccatiTerms t;
    try {
      t = ComputeRiccatiTerms(P, in);
    } catch (const NumericalError& e) {
      throw DivergenceError(
          "Riccati iterate lost positive definiteness at iteration " +
              std::to_string(iter) + ": " + e.what(),
          static_cast<std::size_t>(iter));
    }
    const Matrix next = in.A.transpose() * t.S_inv_A + in.Q + in.F;
    if (!next.allFinite()) {
      throw DivergenceError("Riccati iterate became non-finite at iteration " +
                                std::to_string(iter),
                            static_cast<std::size_t>(iter));
    }
    residual = (next - P).norm();
    if (residual <= opts.tol) return P;
    if (iter == opts.max_iter) break;
    P = Symmetrize(next);
  }
  throw IterationBudgetError(
      "Riccati iteration did not converge in " +
          std::to_string(opts.max_iter) +
          " iterations (last residual " + std::to_string(residual) + ")",
      residual);
}

Gains ComputeGains(const Matrix& P, const SynthesisInputs& in) {
  const RiccatiTerms t = ComputeRiccatiTerms(P, in);
  Gains g;
  g.M = t.S_inv_A;
  g.K = -SpdSolve(in.R1, in.B.transpose() * g.M, "R1");
  g.L = -in.alpha * SpdSolve(in.R2, t.mismatch.transpose() * g.M, "R2");
  return g;
}

ConditionReport CheckSynthesisConditions(const Matrix& P, const Gains& gains,
                                   const SynthesisInputs& in) {
  const Eigen::Index n = in.n();
  ConditionReport r;
  const Matrix eps_bound =
      Matrix::Identity(n, n) / in.epsilon - Symmetrize(P);
  r.epsilon_bound_margin = EigExtremes(eps_bound).lambda_min;
  r.epsilon_bound = r.epsilon_bound_margin > kDefaultTol;

  const Matrix P_inv = SpdInverse(P, "P");
  const Matrix Ac = in.A + in.B * gains.K;
  const Matrix positive = in.Q + gains.K.transpose() * in.R1 * gains.K +
                          gains.L.transpose() * in.R2 * gains.L +
                          gains.M.transpose() * P_inv * gains.M;
  const Eigen::FullPivLU<Matrix> shifted(P_inv -
                                         in.epsilon * Matrix::Identity(n, n));
  if (!shifted.isInvertible()) {
    r.Q1 = Matrix::Zero(n, n);
    r.q1_margin = -kInf;
    r.q1_positive = false;
    return r;
  }
  r.Q1 = Symmetrize(positive - Ac.transpose() * shifted.solve(Ac));
  r.q1_margin = EigExtremes(r.Q1).lambda_min;
  r.q1_positive = r.q1_margin > kDefaultTol;
  return r;
}

TriggerNorms ComputeTriggerNorms(const Matrix& P, const Gains& gains,
                                 const SynthesisInputs& in,
                                 bool with_inverse) {
  const Matrix BK = in.B * gains.K;
  const Matrix Ac = in.A + BK;
  const Matrix shifted = ShiftedInverse(P, in.epsilon);
  TriggerNorms norms;
  norms.cross = SpectralNorm(Ac.transpose() * P * BK);
  const Matrix middle =
      with_inverse ? Matrix(Eigen::FullPivLU<Matrix>(shifted).solve(BK))
                   : Matrix(shifted * BK);
  norms.quadratic = SpectralNorm(BK.transpose() * middle);
  return norms;
}

double ComputeTriggerThreshold(const Matrix& P, const Gains& gains,
                               const Matrix& Q1, const SynthesisInputs& in) {
  const SymmetricEigenSummary q1 = EigExtremes(Q1);
  if (!(q1.lambda_min > kDefaultTol)) {
    throw ContractError("trigger threshold needs Q1 positive definite");
  }
  const TriggerNorms norms = ComputeTriggerNorms(
      P, gains, in, in.mu_formula == MuFormula::kDerived);
  const double lam = q1.lambda_min;
  const double denom =
      4.0 * norms.cross * norms.cross + 2.0 * lam * norms.quadratic;
  if (!(denom > 0.0)) {
    throw DegenerateTriggerError(
        "trigger threshold denominator is zero (K = 0)");
  }
  return in.sigma * lam * lam / denom;
}

SynthesisCertificate ComputeCertificate(const SynthesisInputs& in,
                                        const RiccatiOptions& opts) {
  SynthesisCertificate c;
  c.P = SolveRiccati(in, opts);
  const Gains g = ComputeGains(c.P, in);
  const ConditionReport cond = CheckSynthesisConditions(c.P, g, in);
  c.K = g.K;
  c.L = g.L;
  c.M = g.M;
  c.Q1 = cond.Q1;
  c.alpha = in.alpha;
  c.sigma = in.sigma;
  c.epsilon = in.epsilon;
  c.eta1 = in.eta1;
  c.eta2 = in.eta2;
  c.mu_formula = in.mu_formula;
  c.gamma_formula = in.gamma_formula;
  c.flags.epsilon_bound = cond.epsilon_bound;
  c.flags.q1_positive = cond.q1_positive;

  const SymmetricEigenSummary p_eig = EigExtremes(c.P);
  c.lambda_min_P = p_eig.lambda_min;
  c.lambda_max_P = p_eig.lambda_max;

  const double lam = cond.q1_margin;
  c.xi1 = lam / 2.0;
  if (cond.q1_positive) {
    const TriggerNorms norms = ComputeTriggerNorms(c.P, g, in, true);
    c.xi2 = 2.0 * norms.cross * norms.cross / lam + norms.quadratic;
    try {
      c.mu = ComputeTriggerThreshold(c.P, g, c.Q1, in);
    } catch (const DegenerateTriggerError&) {
      c.mu = kInf;
      c.flags.trigger_degenerate = true;
    }
  } else {
    c.xi2 = kNaN;
    c.mu = kNaN;
  }

  c.c1 = 1.0 - (lam / (2.0 * c.lambda_min_P)) * (1.0 - in.sigma);
  if (c.xi2 == 0.0) {
    c.gamma = 0.0;
  } else {
    const double lead = in.gamma_formula == GammaFormula::kDerived
                            ? 1.0 + std::sqrt(c.mu)
                            : 1.0 + c.mu;
    c.gamma = c.xi2 * lead * lead / c.lambda_min_P;
  }
  c.c2 = 1.0 + c.gamma;
  c.Xi = c.lambda_max_P / c.lambda_min_P;
  c.dos_rate_bound = (2.0 * std::log(in.eta1) - std::log(c.c1)) /
                     (std::log(c.c2) - std::log(c.c1));
  c.Ta = c.Xi <= 1.0 + kDefaultTol
             ? kInf
             : 2.0 * (std::log(in.eta2) - std::log(in.eta1)) / std::log(c.Xi);
  c.residual = RiccatiResidual(c.P, in);

  c.flags.c1_in_unit = c.c1 > 0.0 && c.c1 < 1.0;
  c.flags.eta1_sq_above_c1 = in.eta1 * in.eta1 > c.c1;
  c.flags.eta1_above_c1 = in.eta1 > c.c1;
  return c;
}

std::vector<double> AlphaGrid(double lo, double hi, int steps) {
  if (steps < 1 || !(lo <= hi)) {
    throw InputError("alpha sweep needs lo <= hi and steps >= 1");
  }
  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    grid[static_cast<std::size_t>(i)] =
        steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
  }
  return grid;
}

AlphaSweepPoint EvaluateAlpha(const SynthesisInputs& in, double alpha,
                              const Matrix& K_ref,
                              const std::optional<Matrix>& L_ref,
                              const RiccatiOptions& opts) {
  AlphaSweepPoint pt{alpha, kInf, L_ref ? kInf : kNaN, false};
  SynthesisInputs local = in;
  local.alpha = alpha;
  try {
    const Matrix P = SolveRiccati(local, opts);
    const Gains g = ComputeGains(P, local);
    if (g.K.rows() != K_ref.rows() || g.K.cols() != K_ref.cols()) {
      throw DimensionError("reference K has the wrong shape");
    }
    pt.k_mismatch = (g.K - K_ref).cwiseAbs().maxCoeff();
    if (L_ref) {
      if (g.L.rows() != L_ref->rows() || g.L.cols() != L_ref->cols()) {
        throw DimensionError("reference L has the wrong shape");
      }
      pt.l_mismatch = (g.L - *L_ref).cwiseAbs().maxCoeff();
    }
    pt.converged = true;
  } catch (const DimensionError&) {
    throw;
  } catch (const Error&) {
    pt.converged = false;
  }
  return pt;
}

}  // namespace etdos
