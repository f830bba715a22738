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

#include "jdot/learners.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "jdot/cost.hpp"

namespace jdot {

const char* TaskName(Task task) {
  return task == Task::kRegression ? "regression" : "classification";
}

Task ParseTask(const std::string& name) {
  if (name == "regression") return Task::kRegression;
  if (name == "classification") return Task::kClassification;
  throw InvalidInput("unknown task '" + name + "' (expected regression|classification)");
}

const char* KernelName(KernelKind kind) { return kind == KernelKind::kLinear ? "linear" : "rbf"; }

KernelKind ParseKernel(const std::string& name) {
  if (name == "linear") return KernelKind::kLinear;
  if (name == "rbf") return KernelKind::kRbf;
  throw InvalidInput("unknown kernel '" + name + "' (expected linear|rbf)");
}

Matrix Kernel::Gram(const Matrix& a, const Matrix& b) const {
  if (a.cols() != b.cols()) throw InvalidInput("kernel inputs have different feature dimensions");
  if (kind == KernelKind::kLinear) return a * b.transpose();
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw InvalidInput("rbf bandwidth must be positive and finite");
  }
  Matrix gram(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      gram(i, j) = std::exp(-bandwidth * (a.row(i) - b.row(j)).squaredNorm());
    }
  }
  return gram;
}

double MedianHeuristicBandwidth(const Matrix& inputs) {
  std::vector<double> d2;
  const Eigen::Index n = inputs.rows();
  d2.reserve(static_cast<size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) d2.push_back((inputs.row(i) - inputs.row(j)).squaredNorm());
  }
  if (d2.empty()) return 1.0;
  std::sort(d2.begin(), d2.end());
  const size_t m = d2.size();
  const double median = m % 2 == 1 ? d2[m / 2] : 0.5 * (d2[m / 2 - 1] + d2[m / 2]);
  return median > 0.0 ? 1.0 / (2.0 * median) : 1.0;
}

Matrix PredictScores(const Predictor& model, const Matrix& inputs) {
  if (inputs.cols() != model.input_dim()) {
    throw InvalidInput("feature dimension mismatch: model expects " +
                       std::to_string(model.input_dim()) + ", got " + std::to_string(inputs.cols()));
  }
  Matrix scores = model.kernel.Gram(inputs, model.support_points) * model.coefficients;
  if (model.intercept.size() == scores.cols()) scores.rowwise() += model.intercept.transpose();
  return scores;
}

std::vector<int> PredictClasses(const Predictor& model, const Matrix& inputs) {
  const Matrix scores = PredictScores(model, inputs);
  std::vector<int> classes(static_cast<size_t>(scores.rows()), 0);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (Eigen::Index k = 1; k < scores.cols(); ++k) {
      if (scores(i, k) > scores(i, best)) best = static_cast<int>(k);
    }
    classes[static_cast<size_t>(i)] = best;
  }
  return classes;
}

double RkhsNormSquared(const Predictor& model) {
  if (model.coefficients.size() == 0) return 0.0;
  const Matrix gram = model.kernel.Gram(model.support_points);
  return (model.coefficients.transpose() * gram * model.coefficients).trace();
}

Matrix TransportedTargets(const Matrix& coupling, const Matrix& source_targets) {
  if (coupling.rows() != source_targets.rows()) {
    throw InvalidInput("plan rows do not match the number of source labels");
  }
  return static_cast<double>(coupling.cols()) * (coupling.transpose() * source_targets);
}

Matrix OneHot(const std::vector<int>& classes, int num_classes) {
  Matrix onehot = Matrix::Zero(static_cast<Eigen::Index>(classes.size()), num_classes);
  for (size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] < 0 || classes[i] >= num_classes) {
      throw InvalidInput("class index " + std::to_string(classes[i]) + " out of range [0, " +
                         std::to_string(num_classes) + ")");
    }
    onehot(static_cast<Eigen::Index>(i), classes[i]) = 1.0;
  }
  return onehot;
}

Matrix TransportedProportions(const Matrix& coupling, const std::vector<int>& source_classes,
                              int num_classes) {
  if (coupling.rows() != static_cast<Eigen::Index>(source_classes.size())) {
    throw InvalidInput("plan rows do not match the number of source labels");
  }
  return static_cast<double>(coupling.cols()) *
         (coupling.transpose() * OneHot(source_classes, num_classes));
}

Predictor FitKrrWeighted(const Matrix& inputs, const Matrix& targets, const Kernel& kernel,
                         double lambda, bool fit_intercept) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("lambda must be positive");
  if (inputs.rows() != targets.rows()) {
    throw InvalidInput("inputs and targets have different sample counts");
  }
  if (inputs.rows() == 0) throw InvalidInput("cannot fit on an empty sample");
  const Eigen::Index n = inputs.rows();
  Matrix system = kernel.Gram(inputs);
  system.diagonal().array() += static_cast<double>(n) * lambda;

  Eigen::LLT<Matrix> llt(system);
  const double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
  if (!(rcond > 1e-15)) {
    std::ostringstream msg;
    msg << "kernel ridge system is numerically singular (reciprocal condition estimate " << rcond
        << ")";
    throw SolverError(msg.str());
  }

  auto solve = [&](const Matrix& rhs) {
    Matrix x = llt.solve(rhs);
    // One round of iterative refinement.
    const Matrix residual = rhs - system * x;
    x += llt.solve(residual);
    return x;
  };

  Predictor model;
  model.kernel = kernel;
  model.support_points = inputs;
  model.intercept = Vector::Zero(targets.cols());
  if (!fit_intercept) {
    model.coefficients = solve(targets);
    return model;
  }
  // With an unregularized intercept b: a = M^-1 (yhat - 1 b^T) and the
  // residual must sum to zero, giving b = 1^T M^-1 yhat / 1^T M^-1 1.
  const Matrix ones = Matrix::Ones(n, 1);
  const Matrix u = solve(ones);
  const Matrix v = solve(targets);
  const double denom = u.sum();
  model.intercept = v.colwise().sum().transpose() / denom;
  model.coefficients = v - u * model.intercept.transpose();
  return model;
}

double KrrStationarityResidual(const Predictor& model, const Matrix& targets, double lambda) {
  const Eigen::Index n = model.support_points.rows();
  Matrix system = model.kernel.Gram(model.support_points);
  system.diagonal().array() += static_cast<double>(n) * lambda;
  Matrix lhs = system * model.coefficients;
  lhs.rowwise() += model.intercept.transpose();
  const double denom = targets.norm();
  const double num = (lhs - targets).norm();
  return denom > 0.0 ? num / denom : num;
}

namespace {

struct PointwiseHinge {
  double value = 0.0;
  double slope = 0.0;      // d/df
  double curvature = 0.0;  // generalized second derivative
};

// p * max(0, 1 - f)^2 + (1 - p) * max(0, 1 + f)^2
PointwiseHinge WeightedHinge(double p, double f) {
  PointwiseHinge h;
  const double pos = 1.0 - f;
  const double neg = 1.0 + f;
  if (pos > 0.0) {
    h.value += p * pos * pos;
    h.slope -= 2.0 * p * pos;
    h.curvature += 2.0 * p;
  }
  if (neg > 0.0) {
    h.value += (1.0 - p) * neg * neg;
    h.slope += 2.0 * (1.0 - p) * neg;
    h.curvature += 2.0 * (1.0 - p);
  }
  return h;
}

double ComponentObjective(const Matrix& gram, const Vector& p, const Vector& a, double b,
                          double lambda) {
  const Vector f = (gram * a).array() + b;
  double loss = 0.0;
  for (Eigen::Index j = 0; j < f.size(); ++j) loss += WeightedHinge(p(j), f(j)).value;
  return loss / static_cast<double>(f.size()) + lambda * a.dot(gram * a);
}

struct ComponentResult {
  Vector a;
  double b = 0.0;
  double objective = 0.0;
  double gradient_ratio = 0.0;
  bool converged = false;
  int64_t iterations = 0;
};

ComponentResult FitHingeComponent(const Matrix& gram, const Vector& p, double lambda,
                                  const HingeOptions& options) {
  const Eigen::Index n = gram.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  ComponentResult r;
  r.a = Vector::Zero(n);
  r.b = 0.0;

  Vector f(n), slope(n), curv(n), gf(n), grad_a(n);
  for (int64_t it = 0; it <= options.max_iter; ++it) {
    f = (gram * r.a).array() + r.b;
    double loss = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const PointwiseHinge h = WeightedHinge(p(j), f(j));
      loss += h.value;
      slope(j) = h.slope * inv_n;
      curv(j) = h.curvature * inv_n;
    }
    const Vector ka = gram * r.a;
    r.objective = loss * inv_n + lambda * r.a.dot(ka);
    // grad_a = K (g_f + 2 lambda a); grad_b = sum g_f.
    gf = slope + 2.0 * lambda * r.a;
    grad_a = gram * gf;
    const double grad_b = options.fit_intercept ? slope.sum() : 0.0;
    const double grad_norm = std::sqrt(grad_a.squaredNorm() + grad_b * grad_b);
    r.gradient_ratio = grad_norm / (1.0 + std::fabs(r.objective));
    r.iterations = it;
    if (r.gradient_ratio <= options.tol) {
      r.converged = true;
      break;
    }
    if (it == options.max_iter) break;

    // Generalized Newton step. The Hessian in a is K (D K + 2 lambda I), so
    // dividing the Newton equations by K leaves (D K + 2 lambda I) da = -gf.
    Vector step_a;
    double step_b = 0.0;
    bool have_newton = false;
    if (options.fit_intercept) {
      Matrix sys(n + 1, n + 1);
      sys.topLeftCorner(n, n) = curv.asDiagonal() * gram;
      sys.topLeftCorner(n, n).diagonal().array() += 2.0 * lambda;
      sys.topRightCorner(n, 1) = curv;
      sys.bottomLeftCorner(1, n) = (curv.transpose() * gram);
      sys(n, n) = curv.sum();
      Vector rhs(n + 1);
      rhs.head(n) = -gf;
      rhs(n) = -grad_b;
      Eigen::FullPivLU<Matrix> lu(sys);
      if (lu.isInvertible()) {
        const Vector sol = lu.solve(rhs);
        if (sol.allFinite()) {
          step_a = sol.head(n);
          step_b = sol(n);
          have_newton = true;
        }
      }
    } else {
      Matrix sys = curv.asDiagonal() * gram;
      sys.diagonal().array() += 2.0 * lambda;
      const Vector sol = sys.partialPivLu().solve(-gf);
      if (sol.allFinite()) {
        step_a = sol;
        have_newton = true;
      }
    }
    double slope_dir = have_newton ? grad_a.dot(step_a) + grad_b * step_b : 0.0;
    if (!have_newton || !(slope_dir < 0.0)) {
      // Function-space gradient: descent because grad_a^T (-gf) = -gf^T K gf.
      step_a = -gf;
      step_b = -grad_b;
      slope_dir = grad_a.dot(step_a) + grad_b * step_b;
      if (!(slope_dir < 0.0)) break;
    }

    double t = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      const Vector a_new = r.a + t * step_a;
      const double b_new = r.b + t * step_b;
      const double obj_new = ComponentObjective(gram, p, a_new, b_new, lambda);
      if (obj_new <= r.objective + 1e-4 * t * slope_dir) {
        r.a = a_new;
        r.b = b_new;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  return r;
}

}  // namespace

HingeComponentEval EvalHingeComponent(const Matrix& gram, const Vector& positive_weight,
                                      const Vector& coefficients, double intercept, double lambda) {
  const Eigen::Index n = gram.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Vector f = (gram * coefficients).array() + intercept;
  Vector slope(n);
  double loss = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const PointwiseHinge h = WeightedHinge(positive_weight(j), f(j));
    loss += h.value;
    slope(j) = h.slope * inv_n;
  }
  HingeComponentEval eval;
  eval.objective = loss * inv_n + lambda * coefficients.dot(gram * coefficients);
  eval.gradient = gram * (slope + 2.0 * lambda * coefficients);
  eval.intercept_grad = slope.sum();
  return eval;
}

double HingeOvaObjective(const Matrix& gram, const Matrix& proportions, const Matrix& coefficients,
                         const Vector& intercept, double lambda) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < proportions.cols(); ++k) {
    const double b = intercept.size() > k ? intercept(k) : 0.0;
    total += ComponentObjective(gram, proportions.col(k), coefficients.col(k), b, lambda);
  }
  return total;
}

HingeFit FitHingeOva(const Matrix& inputs, const Matrix& proportions, const Kernel& kernel,
                     double lambda, const HingeOptions& options) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("lambda must be positive");
  if (inputs.rows() != proportions.rows()) {
    throw InvalidInput("inputs and proportions have different sample counts");
  }
  if (inputs.rows() == 0) throw InvalidInput("cannot fit on an empty sample");
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw InvalidInput("hinge solver needs tol > 0 and max_iter >= 1");
  }
  const Eigen::Index n = inputs.rows();
  const Eigen::Index n_classes = proportions.cols();
  const Matrix gram = kernel.Gram(inputs);

  HingeFit fit;
  fit.model.task = Task::kClassification;
  fit.model.kernel = kernel;
  fit.model.support_points = inputs;
  fit.model.coefficients = Matrix::Zero(n, n_classes);
  fit.model.intercept = Vector::Zero(n_classes);
  fit.converged = true;
  for (Eigen::Index k = 0; k < n_classes; ++k) {
    const ComponentResult r = FitHingeComponent(gram, proportions.col(k), lambda, options);
    fit.model.coefficients.col(k) = r.a;
    fit.model.intercept(k) = r.b;
    fit.objective += r.objective;
    fit.gradient_ratio = std::max(fit.gradient_ratio, r.gradient_ratio);
    fit.iterations = std::max(fit.iterations, r.iterations);
    fit.converged = fit.converged && r.converged;
  }
  return fit;
}

}  // namespace jdot
