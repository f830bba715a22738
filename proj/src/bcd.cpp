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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "jdot/jdot.hpp"

namespace jdot {

const char* HalfStepName(HalfStep step) { return step == HalfStep::kTransport ? "ot" : "fit"; }

void JdotConfig::Validate() const {
  if (alpha && (!(*alpha > 0.0) || !std::isfinite(*alpha))) {
    throw InvalidInput("alpha must be positive and finite");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("lambda must be positive");
  if (max_iter < 1) throw InvalidInput("max_iter must be >= 1");
  if (!(rel_tol > 0.0)) throw InvalidInput("rel_tol must be positive");
  if (bandwidth && (!(*bandwidth > 0.0) || !std::isfinite(*bandwidth))) {
    throw InvalidInput("bandwidth must be positive and finite");
  }
  if (ot == OtSolver::kEntropic && !(entropic.epsilon > 0.0)) {
    throw InvalidInput("entropic epsilon must be positive");
  }
}

Kernel ResolveKernel(const JdotConfig& config, const Matrix& target_inputs) {
  Kernel kernel;
  kernel.kind = config.kernel;
  if (config.kernel == KernelKind::kRbf) {
    kernel.bandwidth = config.bandwidth ? *config.bandwidth : MedianHeuristicBandwidth(target_inputs);
  } else {
    kernel.bandwidth = 0.0;
  }
  return kernel;
}

namespace {

void CheckSource(const LabeledDataset& source, Task task) {
  source.Validate();
  if (source.task != task) {
    throw InvalidInput(std::string("source dataset is ") + TaskName(source.task) +
                       " but the config asks for " + TaskName(task));
  }
  if (!source.has_labels()) throw InvalidInput("source dataset has no labels");
  if (task == Task::kClassification && source.num_classes < 1) {
    throw InvalidInput("classification source needs num_classes >= 1");
  }
}

Matrix LabelLoss(const LabeledDataset& source, const Matrix& scores) {
  return source.task == Task::kClassification ? LabelLossMatrix(source.classes, scores)
                                              : LabelLossMatrix(source.targets, scores);
}

}  // namespace

Predictor FitSourceOnly(const LabeledDataset& source, const Kernel& kernel,
                        const JdotConfig& config) {
  CheckSource(source, config.task);
  if (config.task == Task::kRegression) {
    return FitKrrWeighted(source.X, source.targets, kernel, config.lambda, config.fit_intercept);
  }
  HingeOptions opts = config.hinge;
  opts.fit_intercept = config.fit_intercept;
  return FitHingeOva(source.X, OneHot(source.classes, source.num_classes), kernel, config.lambda,
                     opts)
      .model;
}

double JdotObjective(const Matrix& coupling, const Matrix& dist, const LabeledDataset& source,
                     const Matrix& target_inputs, const Predictor& model, double alpha,
                     double lambda) {
  const Matrix scores = PredictScores(model, target_inputs);
  const Matrix loss = LabelLoss(source, scores);
  return coupling.cwiseProduct(alpha * dist + loss).sum() + lambda * RkhsNormSquared(model);
}

JdotTrace JdotFit(const LabeledDataset& source, const Matrix& target_inputs,
                  const JdotConfig& config) {
  config.Validate();
  CheckSource(source, config.task);
  if (target_inputs.rows() < 1) throw InvalidInput("target sample is empty");
  if (!target_inputs.allFinite()) throw InvalidInput("target inputs contain a non-finite value");

  const Matrix dist = FeatureDistanceMatrix(source.X, target_inputs);
  JdotTrace trace;
  if (config.alpha && !config.alpha_relative) {
    trace.alpha = *config.alpha;
  } else {
    trace.alpha = HeuristicAlpha(dist) * (config.alpha ? *config.alpha : 1.0);
  }
  trace.kernel = ResolveKernel(config, target_inputs);
  const double alpha = trace.alpha;
  const double lambda = config.lambda;

  HingeOptions hinge = config.hinge;
  hinge.fit_intercept = config.fit_intercept;

  trace.initial_model = FitSourceOnly(source, trace.kernel, config);
  Predictor model = trace.initial_model;
  double previous = std::numeric_limits<double>::quiet_NaN();

  for (int k = 1; k <= config.max_iter; ++k) {
    // gamma^k <- argmin over the polytope with f^{k-1} fixed.
    const Matrix feature_cost = alpha * dist;
    const Matrix scores = PredictScores(model, target_inputs);
    const CostMatrix cost(feature_cost + LabelLoss(source, scores));
    TransportPlan plan = config.ot == OtSolver::kExact ? SolveExact(cost)
                                                       : SolveEntropic(cost, config.entropic);

    TraceRecord ot_rec;
    ot_rec.iteration = k;
    ot_rec.step = HalfStep::kTransport;
    ot_rec.ot_objective = plan.coupling.cwiseProduct(cost.values()).sum();
    ot_rec.feature_term = plan.coupling.cwiseProduct(feature_cost).sum();
    ot_rec.regularization = lambda * RkhsNormSquared(model);
    ot_rec.objective = ot_rec.ot_objective + ot_rec.regularization;
    ot_rec.marginal_violation = plan.marginal_violation;
    ot_rec.ot_converged = plan.converged;
    trace.records.push_back(ot_rec);

    // f^k <- argmin over the RKHS with gamma^k fixed.
    bool fit_converged = true;
    if (config.task == Task::kRegression) {
      const Matrix yhat = TransportedTargets(plan.coupling, source.targets);
      model = FitKrrWeighted(target_inputs, yhat, trace.kernel, lambda, config.fit_intercept);
    } else {
      const Matrix props =
          TransportedProportions(plan.coupling, source.classes, source.num_classes);
      HingeFit fit = FitHingeOva(target_inputs, props, trace.kernel, lambda, hinge);
      fit_converged = fit.converged;
      model = std::move(fit.model);
    }

    const Matrix new_scores = PredictScores(model, target_inputs);
    TraceRecord fit_rec;
    fit_rec.iteration = k;
    fit_rec.step = HalfStep::kFit;
    fit_rec.ot_objective = plan.coupling.cwiseProduct(feature_cost + LabelLoss(source, new_scores)).sum();
    fit_rec.feature_term = ot_rec.feature_term;
    fit_rec.regularization = lambda * RkhsNormSquared(model);
    fit_rec.objective = fit_rec.ot_objective + fit_rec.regularization;
    fit_rec.marginal_violation = plan.marginal_violation;
    fit_rec.ot_converged = plan.converged;
    fit_rec.fit_converged = fit_converged;
    trace.records.push_back(fit_rec);

    if (config.keep_models) trace.models.push_back(model);
    trace.final_plan = std::move(plan);
    trace.iterations = k;

    const double current = fit_rec.objective;
    if (std::isfinite(previous)) {
      const double scale = std::max(std::fabs(previous), std::numeric_limits<double>::min());
      if (std::fabs(current - previous) / scale < config.rel_tol) {
        trace.converged = true;
        if (trace.converged_at == 0) trace.converged_at = k;
        if (config.early_stop) break;
      }
    }
    previous = current;
  }
  trace.final_model = std::move(model);
  return trace;
}

double Accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || truth.empty()) {
    throw InvalidInput("accuracy needs equal-length, non-empty label vectors");
  }
  size_t hits = 0;
  for (size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double MeanSquaredError(const Matrix& predicted, const Matrix& truth) {
  if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols() || truth.rows() == 0) {
    throw InvalidInput("mse needs equal-shape, non-empty matrices");
  }
  return (predicted - truth).rowwise().squaredNorm().mean();
}

double WithinRangeAccuracy(const Matrix& predicted, const Matrix& truth, double radius) {
  if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols() || truth.rows() == 0) {
    throw InvalidInput("within-range accuracy needs equal-shape, non-empty matrices");
  }
  if (!(radius >= 0.0)) throw InvalidInput("within-range radius must be non-negative");
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < truth.rows(); ++i) {
    if ((predicted.row(i) - truth.row(i)).norm() <= radius) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.rows());
}

Metrics Evaluate(const Predictor& model, const LabeledDataset& data,
                 std::optional<double> within_range_radius) {
  if (!data.has_labels()) throw InvalidInput("evaluation dataset has no labels");
  Metrics m;
  if (model.task == Task::kClassification) {
    if (data.task != Task::kClassification) throw InvalidInput("classifier evaluated on regression data");
    m.accuracy = Accuracy(PredictClasses(model, data.X), data.classes);
  } else {
    if (data.task != Task::kRegression) throw InvalidInput("regressor evaluated on class labels");
    const Matrix pred = PredictScores(model, data.X);
    m.mse = MeanSquaredError(pred, data.targets);
    if (within_range_radius) m.within_range = WithinRangeAccuracy(pred, data.targets, *within_range_radius);
  }
  return m;
}

}  // namespace jdot
