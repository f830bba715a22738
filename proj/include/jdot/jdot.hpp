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

// Joint distribution optimal transport by block coordinate descent.
//
// The driver minimizes
//   sum_ij gamma_ij (alpha d(x_i^s, x_j^t) + L(y_i^s, f(x_j^t))) + lambda ||f||^2
// jointly over the coupling gamma and the hypothesis f, alternating an OT
// solve on the current joint cost with a refit of f on the transported
// labels. f^0 is fitted on the labeled source sample.

#ifndef JDOT_JDOT_HPP_
#define JDOT_JDOT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jdot/cost.hpp"
#include "jdot/data.hpp"
#include "jdot/learners.hpp"
#include "jdot/ot.hpp"

namespace jdot {

enum class OtSolver { kExact, kEntropic };

struct JdotConfig {
  Task task = Task::kRegression;
  // Unset means 1 / max_ij d(x_i^s, x_j^t).
  std::optional<double> alpha;
  // When set, alpha is a multiple of 1 / max_ij d, i.e. it weights feature
  // distances normalized to [0, 1].
  bool alpha_relative = false;
  double lambda = 1e-2;
  int max_iter = 10;
  double rel_tol = 1e-5;
  // When false the loop always runs max_iter iterations; convergence is
  // still detected and reported in JdotTrace::converged_at.
  bool early_stop = true;
  OtSolver ot = OtSolver::kExact;
  EntropicOptions entropic;
  KernelKind kernel = KernelKind::kRbf;
  // Unset means the median heuristic on the target inputs.
  std::optional<double> bandwidth;
  bool fit_intercept = false;
  HingeOptions hinge;
  uint64_t seed = 0;
  // Keep a copy of f^k for every iteration (needed for accuracy curves).
  bool keep_models = false;

  void Validate() const;
};

enum class HalfStep { kTransport, kFit };

const char* HalfStepName(HalfStep step);

struct TraceRecord {
  int iteration = 0;
  HalfStep step = HalfStep::kTransport;
  // Full objective sum_ij gamma_ij C_ij(f) + lambda ||f||^2 after the step.
  double objective = 0.0;
  // sum_ij gamma_ij (alpha d_ij + L_ij(f)), i.e. without the regularizer.
  double ot_objective = 0.0;
  // sum_ij gamma_ij alpha d_ij alone.
  double feature_term = 0.0;
  double regularization = 0.0;
  double marginal_violation = 0.0;
  bool ot_converged = true;
  bool fit_converged = true;
};

struct JdotTrace {
  double alpha = 0.0;
  Kernel kernel;
  std::vector<TraceRecord> records;
  Predictor initial_model;
  // models[k - 1] is f^k when keep_models is set.
  std::vector<Predictor> models;
  Predictor final_model;
  TransportPlan final_plan;
  int iterations = 0;
  bool converged = false;
  // First iteration whose objective moved by less than rel_tol (relative);
  // 0 when that never happened.
  int converged_at = 0;
};

// Kernel with its bandwidth resolved against the target inputs.
Kernel ResolveKernel(const JdotConfig& config, const Matrix& target_inputs);

// Fit on the labeled source sample only (the "source-only" baseline and
// the BCD starting point).
Predictor FitSourceOnly(const LabeledDataset& source, const Kernel& kernel,
                        const JdotConfig& config);

// sum_ij gamma_ij (alpha d_ij + L(y_i^s, f(x_j^t))) + lambda ||f||^2.
double JdotObjective(const Matrix& coupling, const Matrix& dist, const LabeledDataset& source,
                     const Matrix& target_inputs, const Predictor& model, double alpha,
                     double lambda);

JdotTrace JdotFit(const LabeledDataset& source, const Matrix& target_inputs,
                  const JdotConfig& config);

// Evaluation helpers.
double Accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);
double MeanSquaredError(const Matrix& predicted, const Matrix& truth);
// Fraction of rows whose Euclidean prediction error is <= radius.
double WithinRangeAccuracy(const Matrix& predicted, const Matrix& truth, double radius);

struct Metrics {
  std::optional<double> accuracy;
  std::optional<double> mse;
  std::optional<double> within_range;
};

Metrics Evaluate(const Predictor& model, const LabeledDataset& data,
                 std::optional<double> within_range_radius = std::nullopt);

}  // namespace jdot

#endif  // JDOT_JDOT_HPP_
