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

#include "jdot/cost.hpp"

#include <cmath>
#include <string>

namespace jdot {
namespace {

void CheckFiniteScores(const Matrix& scores) {
  if (!scores.allFinite()) throw InvalidInput("prediction matrix has a non-finite entry");
}

void CheckAlpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidInput("alpha must be positive and finite");
  }
}

}  // namespace

double OvaSquaredHinge(int label, std::span<const double> scores) {
  double total = 0.0;
  for (size_t k = 0; k < scores.size(); ++k) {
    total += SquaredHinge(static_cast<int>(k) == label ? 1.0 : -1.0, scores[k]);
  }
  return total;
}

Matrix FeatureDistanceMatrix(const Matrix& source, const Matrix& target) {
  if (source.cols() != target.cols()) {
    throw InvalidInput("feature dimension mismatch: source has " + std::to_string(source.cols()) +
                       ", target has " + std::to_string(target.cols()));
  }
  Matrix dist(source.rows(), target.rows());
  for (Eigen::Index i = 0; i < source.rows(); ++i) {
    for (Eigen::Index j = 0; j < target.rows(); ++j) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < source.cols(); ++k) {
        const double diff = source(i, k) - target(j, k);
        acc += diff * diff;
      }
      dist(i, j) = acc;
    }
  }
  return dist;
}

double HeuristicAlpha(const Matrix& dist) {
  const double max_d = dist.size() == 0 ? 0.0 : dist.maxCoeff();
  if (!(max_d > 0.0)) {
    throw InvalidInput("heuristic alpha is undefined: all feature distances are zero");
  }
  return 1.0 / max_d;
}

Matrix LabelLossMatrix(const Matrix& source_targets, const Matrix& target_scores) {
  if (source_targets.cols() != target_scores.cols()) {
    throw InvalidInput("label dimension mismatch between source targets and predictions");
  }
  CheckFiniteScores(target_scores);
  Matrix loss(source_targets.rows(), target_scores.rows());
  for (Eigen::Index i = 0; i < source_targets.rows(); ++i) {
    for (Eigen::Index j = 0; j < target_scores.rows(); ++j) {
      loss(i, j) = (source_targets.row(i) - target_scores.row(j)).squaredNorm();
    }
  }
  return loss;
}

Matrix LabelLossMatrix(const std::vector<int>& source_classes, const Matrix& target_scores) {
  CheckFiniteScores(target_scores);
  const Eigen::Index n_classes = target_scores.cols();
  // Per target sample: the all-negative hinge total, and per class the
  // correction for flipping that class to the positive side.
  Matrix loss(static_cast<Eigen::Index>(source_classes.size()), target_scores.rows());
  for (Eigen::Index j = 0; j < target_scores.rows(); ++j) {
    double all_negative = 0.0;
    for (Eigen::Index k = 0; k < n_classes; ++k) all_negative += SquaredHinge(-1.0, target_scores(j, k));
    for (size_t i = 0; i < source_classes.size(); ++i) {
      const int label = source_classes[i];
      if (label < 0 || label >= n_classes) {
        throw InvalidInput("source class index " + std::to_string(label) + " out of range [0, " +
                           std::to_string(n_classes) + ")");
      }
      const double f = target_scores(j, label);
      loss(static_cast<Eigen::Index>(i), j) =
          all_negative - SquaredHinge(-1.0, f) + SquaredHinge(1.0, f);
    }
  }
  return loss;
}

CostMatrix AssembleJointCost(const Matrix& dist, const Matrix& source_targets,
                             const Matrix& target_scores, const JointCostConfig& config) {
  CheckAlpha(config.alpha);
  if (config.loss != LabelLossKind::kSquared) {
    throw InvalidInput("real-valued labels require the squared label loss");
  }
  if (dist.rows() != source_targets.rows() || dist.cols() != target_scores.rows()) {
    throw InvalidInput("distance matrix shape does not match label/prediction counts");
  }
  return CostMatrix(config.alpha * dist + LabelLossMatrix(source_targets, target_scores));
}

CostMatrix AssembleJointCost(const Matrix& dist, const std::vector<int>& source_classes,
                             const Matrix& target_scores, const JointCostConfig& config) {
  CheckAlpha(config.alpha);
  if (config.loss != LabelLossKind::kSquaredHingeOva) {
    throw InvalidInput("class labels require the squared-hinge one-vs-all loss");
  }
  if (dist.rows() != static_cast<Eigen::Index>(source_classes.size()) ||
      dist.cols() != target_scores.rows()) {
    throw InvalidInput("distance matrix shape does not match label/prediction counts");
  }
  return CostMatrix(config.alpha * dist + LabelLossMatrix(source_classes, target_scores));
}

}  // namespace jdot
