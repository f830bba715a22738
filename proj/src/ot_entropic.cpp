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
#include <string>

#include "jdot/ot.hpp"

namespace jdot {

CostMatrix::CostMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw InvalidInput("cost matrix must have at least one row and one column");
  }
  for (Eigen::Index i = 0; i < values_.rows(); ++i) {
    for (Eigen::Index j = 0; j < values_.cols(); ++j) {
      const double c = values_(i, j);
      if (!std::isfinite(c)) {
        throw InvalidInput("cost entry (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") is not finite");
      }
      if (c < 0.0) {
        throw InvalidInput("cost entry (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") is negative");
      }
    }
  }
}

MarginalError MarginalViolation(const Matrix& coupling) {
  MarginalError err;
  if (coupling.size() == 0) return err;
  const double row_target = 1.0 / static_cast<double>(coupling.rows());
  const double col_target = 1.0 / static_cast<double>(coupling.cols());
  err.row_err = (coupling.rowwise().sum().array() - row_target).abs().maxCoeff();
  err.col_err = (coupling.colwise().sum().array() - col_target).abs().maxCoeff();
  return err;
}

namespace {

// log(sum_k exp(v_k)) with the max shifted out.
template <typename Vec>
double LogSumExp(const Vec& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

}  // namespace

// Alternating updates of the dual potentials f (rows) and g (columns):
//   f_i = eps log a - eps LSE_j((g_j - C_ij) / eps)
//   g_j = eps log b - eps LSE_i((f_i - C_ij) / eps)
// with gamma_ij = exp((f_i + g_j - C_ij) / eps). Working on potentials keeps
// every exponent <= 0 after the max shift, so small eps does not underflow
// the whole kernel the way plain matrix scaling does.
TransportPlan SolveEntropic(const CostMatrix& cost, const EntropicOptions& options) {
  if (!(options.epsilon > 0.0) || !std::isfinite(options.epsilon)) {
    throw InvalidInput("entropic epsilon must be positive and finite");
  }
  if (options.max_iter < 1) throw InvalidInput("entropic max_iter must be >= 1");
  if (!(options.tol > 0.0)) throw InvalidInput("entropic tol must be positive");

  const Matrix& c = cost.values();
  const Eigen::Index ns = c.rows();
  const Eigen::Index nt = c.cols();
  const double eps = options.epsilon;
  const double log_a = -std::log(static_cast<double>(ns));
  const double log_b = -std::log(static_cast<double>(nt));

  Vector f = Vector::Zero(ns);
  Vector g = Vector::Zero(nt);
  Vector scratch_row(nt);
  Vector scratch_col(ns);

  TransportPlan plan;
  plan.converged = false;
  double row_err = 0.0;
  int64_t it = 0;
  for (; it < options.max_iter; ++it) {
    for (Eigen::Index i = 0; i < ns; ++i) {
      scratch_row = (g - c.row(i).transpose()) / eps;
      f(i) = eps * (log_a - LogSumExp(scratch_row));
    }
    for (Eigen::Index j = 0; j < nt; ++j) {
      scratch_col = (f - c.col(j)) / eps;
      g(j) = eps * (log_b - LogSumExp(scratch_col));
    }
    // Columns now match b exactly (up to rounding); measure the rows.
    row_err = 0.0;
    for (Eigen::Index i = 0; i < ns; ++i) {
      scratch_row = (f(i) + g.array() - c.row(i).transpose().array()) / eps;
      const double row_sum = std::exp(LogSumExp(scratch_row));
      row_err = std::max(row_err, std::fabs(row_sum - std::exp(log_a)));
    }
    if (row_err <= options.tol) {
      plan.converged = true;
      ++it;
      break;
    }
  }

  plan.coupling.resize(ns, nt);
  for (Eigen::Index i = 0; i < ns; ++i) {
    for (Eigen::Index j = 0; j < nt; ++j) {
      plan.coupling(i, j) = std::exp((f(i) + g(j) - c(i, j)) / eps);
    }
  }
  plan.iterations = it;
  plan.objective = plan.coupling.cwiseProduct(c).sum();
  const MarginalError err = MarginalViolation(plan.coupling);
  plan.marginal_violation = std::max(err.row_err, err.col_err);
  return plan;
}

}  // namespace jdot
