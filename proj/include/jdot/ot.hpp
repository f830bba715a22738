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

// Discrete optimal transport between two uniform empirical measures.
//
// Both solvers take an N_s x N_t cost matrix and return a coupling whose
// rows sum to 1/N_s and whose columns sum to 1/N_t. The exact solver is a
// primal network simplex working on integer flows; the entropic solver is a
// log-domain Sinkhorn iteration on dual potentials.

#ifndef JDOT_OT_HPP_
#define JDOT_OT_HPP_

#include <cstdint>

#include "jdot/types.hpp"

namespace jdot {

// Dense matrix of non-negative finite ground costs. Construction validates
// the entries, so every CostMatrix in the program is a legal OT input.
class CostMatrix {
 public:
  explicit CostMatrix(Matrix values);

  const Matrix& values() const { return values_; }
  Eigen::Index n_source() const { return values_.rows(); }
  Eigen::Index n_target() const { return values_.cols(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

 private:
  Matrix values_;
};

struct TransportPlan {
  Matrix coupling;
  // <coupling, C> for the cost the plan was solved on.
  double objective = 0.0;
  // Always true for the exact solver. False when Sinkhorn hit max_iter
  // before the row marginals reached the requested tolerance.
  bool converged = true;
  int64_t iterations = 0;
  // max(row_err, col_err) at return time.
  double marginal_violation = 0.0;
};

struct MarginalError {
  double row_err = 0.0;
  double col_err = 0.0;
};

// Max absolute deviation of the row sums from 1/N_s and of the column sums
// from 1/N_t.
MarginalError MarginalViolation(const Matrix& coupling);
inline MarginalError MarginalViolation(const TransportPlan& plan) {
  return MarginalViolation(plan.coupling);
}

// Global minimizer of <gamma, C> over the transportation polytope with
// uniform marginals. Deterministic: the block-search pricing always starts
// at arc 0 and ties in the ratio test follow the strongly feasible tree
// rule, so degenerate problems return the same vertex on every call.
TransportPlan SolveExact(const CostMatrix& cost);

struct EntropicOptions {
  double epsilon = 1e-2;
  int64_t max_iter = 10000;
  // Stop once the row marginal error drops below this. Columns are exact
  // after every full iteration.
  double tol = 1e-6;
};

// Minimizer of <gamma, C> + epsilon * sum gamma log gamma. The objective
// field holds the unregularized transport cost <gamma, C>.
TransportPlan SolveEntropic(const CostMatrix& cost, const EntropicOptions& options);

}  // namespace jdot

#endif  // JDOT_OT_HPP_
