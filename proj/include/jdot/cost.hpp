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

// Joint feature/label ground cost
//   C_ij = alpha * d(x_i^s, x_j^t) + L(y_i^s, f(x_j^t)).

#ifndef JDOT_COST_HPP_
#define JDOT_COST_HPP_

#include <span>
#include <vector>

#include "jdot/ot.hpp"
#include "jdot/types.hpp"

namespace jdot {

enum class FeatureMetric { kSquaredEuclidean };

enum class LabelLossKind {
  kSquared,          // ||y1 - y2||^2
  kSquaredHingeOva,  // sum_k max(0, 1 - s_k f_k)^2, s_k = +1 for the true class
};

struct JointCostConfig {
  double alpha = 1.0;
  FeatureMetric metric = FeatureMetric::kSquaredEuclidean;
  LabelLossKind loss = LabelLossKind::kSquared;
};

// Binary squared hinge max(0, 1 - y f)^2 for y in {-1, +1}.
inline double SquaredHinge(double y, double f) {
  const double m = 1.0 - y * f;
  return m > 0.0 ? m * m : 0.0;
}

// Sum over classes of the one-vs-all squared hinge for a sample of class
// `label` with score row `scores`.
double OvaSquaredHinge(int label, std::span<const double> scores);

// Entry (i, j) = ||x_i^s - x_j^t||^2, summed over features in index order.
Matrix FeatureDistanceMatrix(const Matrix& source, const Matrix& target);

// alpha = 1 / max_ij dist_ij.
double HeuristicAlpha(const Matrix& dist);

// Regression: `source_targets` is N_s x m, `target_scores` N_t x m.
CostMatrix AssembleJointCost(const Matrix& dist, const Matrix& source_targets,
                             const Matrix& target_scores, const JointCostConfig& config);

// Classification: class indices for the source, N_t x K score matrix.
CostMatrix AssembleJointCost(const Matrix& dist, const std::vector<int>& source_classes,
                             const Matrix& target_scores, const JointCostConfig& config);

// Label-loss block only (no alpha * dist term), N_s x N_t.
Matrix LabelLossMatrix(const Matrix& source_targets, const Matrix& target_scores);
Matrix LabelLossMatrix(const std::vector<int>& source_classes, const Matrix& target_scores);

}  // namespace jdot

#endif  // JDOT_COST_HPP_
