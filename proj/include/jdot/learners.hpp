// Copyright 2026 The JDOT Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Kernel hypothesis classes and their fixed-coupling fits.
//
// Every predictor is a kernel expansion f(x) = sum_j a_j k(x, x_j) + b over a
// set of support inputs, with the squared RKHS norm trace(A^T K A) as
// regularizer. Regression fits are closed-form kernel ridge regression on
// transported targets; classification fits are K one-vs-all squared-hinge
// problems on transported class proportions.

#ifndef JDOT_LEARNERS_HPP_
#define JDOT_LEARNERS_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "jdot/ot.hpp"
#include "jdot/types.hpp"

namespace jdot {

enum class KernelKind { kLinear, kRbf };

const char* KernelName(KernelKind kind);
KernelKind ParseKernel(const std::string& name);

// k(x, x') = x.x' (linear) or exp(-bandwidth * ||x - x'||^2) (rbf).
struct Kernel {
  KernelKind kind = KernelKind::kRbf;
  double bandwidth = 1.0;

  Matrix Gram(const Matrix& a, const Matrix& b) const;
  Matrix Gram(const Matrix& a) const { return Gram(a, a); }
};

// 1 / (2 * median pairwise squared distance) over distinct pairs of rows.
// Falls back to 1 when every pair coincides.
double MedianHeuristicBandwidth(const Matrix& inputs);

struct Predictor {
  Task task = Task::kRegression;
  Kernel kernel;
  Matrix support_points;  // n x d
  Matrix coefficients;    // n x m (m = output dim, or number of classes)
  Vector intercept;       // m

  Eigen::Index output_dim() const { return coefficients.cols(); }
  Eigen::Index input_dim() const { return support_points.cols(); }
};

// Raw kernel-expansion outputs, n x m.
Matrix PredictScores(const Predictor& model, const Matrix& inputs);
// argmax over the m scores; lowest index wins ties.
std::vector<int> PredictClasses(const Predictor& model, const Matrix& inputs);
// trace(A^T K A) on the support points.
double RkhsNormSquared(const Predictor& model);

// yhat_j = N_t * sum_i gamma_ij y_i^s. Each row is a convex combination of
// source labels when the plan's columns sum to 1/N_t.
Matrix TransportedTargets(const Matrix& coupling, const Matrix& source_targets);

// P_hat = N_t * gamma^T P^s with P^s the one-hot class matrix. Rows sum to
// one for a feasible plan.
Matrix TransportedProportions(const Matrix& coupling, const std::vector<int>& source_classes,
                              int num_classes);

Matrix OneHot(const std::vector<int>& classes, int num_classes);

// Minimizes (1/n) sum_j ||yhat_j - f(x_j)||^2 + lambda ||f||^2 over the RKHS.
// Without intercept the coefficients solve (K + n lambda I) a = yhat.
Predictor FitKrrWeighted(const Matrix& inputs, const Matrix& targets, const Kernel& kernel,
                         double lambda, bool fit_intercept = false);

// Residual ||(K + n lambda I) a + b - yhat|| / ||yhat|| of a fitted model on
// its own support points.
double KrrStationarityResidual(const Predictor& model, const Matrix& targets, double lambda);

struct HingeOptions {
  double tol = 1e-6;
  int64_t max_iter = 5000;
  bool fit_intercept = false;
};

struct HingeFit {
  Predictor model;
  bool converged = false;
  int64_t iterations = 0;
  // Sum of the per-class objectives at the returned point.
  double objective = 0.0;
  // Largest per-class gradient norm relative to (1 + |objective_k|).
  double gradient_ratio = 0.0;
};

// One-vs-all squared hinge with transported proportions P (n x K):
//   (1/n) sum_{j,k} [P_jk L(1, f_k(x_j)) + (1 - P_jk) L(-1, f_k(x_j))]
//     + lambda sum_k ||f_k||^2,
// solved per class in coefficient space by a descent method with
// backtracking line search. The step direction is the generalized Newton
// direction of the piecewise-quadratic loss, falling back to the
// function-space gradient when that is not a descent direction.
HingeFit FitHingeOva(const Matrix& inputs, const Matrix& proportions, const Kernel& kernel,
                     double lambda, const HingeOptions& options = {});

// Objective and coefficient-space gradient of a single one-vs-all component,
// exposed for gradient checks. `gram` is the kernel matrix on the inputs,
// `positive_weight` the column P_{:,k}.
struct HingeComponentEval {
  double objective = 0.0;
  Vector gradient;           // d objective / d a
  double intercept_grad = 0.0;
};
HingeComponentEval EvalHingeComponent(const Matrix& gram, const Vector& positive_weight,
                                      const Vector& coefficients, double intercept, double lambda);

// Sum over k of EvalHingeComponent(..).objective for a whole model whose
// support points are the fit inputs.
double HingeOvaObjective(const Matrix& gram, const Matrix& proportions, const Matrix& coefficients,
                         const Vector& intercept, double lambda);

}  // namespace jdot

#endif  // JDOT_LEARNERS_HPP_
