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

#include "jdot/jdot_c.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jdot/data.hpp"
#include "jdot/jdot.hpp"
#include "jdot/serialize.hpp"

struct jdot_dataset {
  jdot::LabeledDataset ds;
};

struct jdot_model {
  jdot::Predictor model;
};

struct jdot_result {
  jdot::JdotTrace trace;
};

namespace {

thread_local std::string g_last_error;

jdot_status Fail(jdot_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `fn`, translating library exceptions into status codes.
template <typename Fn>
jdot_status Guard(Fn&& fn) {
  try {
    fn();
    return JDOT_OK;
  } catch (const jdot::InvalidInput& e) {
    return Fail(JDOT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const jdot::DataError& e) {
    return Fail(JDOT_ERR_DATA, e.what());
  } catch (const jdot::SolverError& e) {
    return Fail(JDOT_ERR_SOLVER, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(JDOT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(JDOT_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(JDOT_ERR_INTERNAL, "unknown error");
  }
}

void Require(bool ok, const char* message) {
  if (!ok) throw jdot::InvalidInput(message);
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

jdot::Task ToTask(jdot_task task) {
  return task == JDOT_TASK_CLASSIFICATION ? jdot::Task::kClassification : jdot::Task::kRegression;
}

jdot_task FromTask(jdot::Task task) {
  return task == jdot::Task::kClassification ? JDOT_TASK_CLASSIFICATION : JDOT_TASK_REGRESSION;
}

std::vector<std::string> SplitNames(const char* list) {
  std::vector<std::string> out;
  if (list == nullptr) return out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void CopyOut(const jdot::Matrix& m, double* out, size_t capacity) {
  const auto needed = static_cast<size_t>(m.size());
  Require(out != nullptr, "output buffer is null");
  if (capacity < needed) {
    throw jdot::InvalidInput("output buffer too small: need " + std::to_string(needed) +
                             " doubles, have " + std::to_string(capacity));
  }
  std::memcpy(out, m.data(), needed * sizeof(double));
}

void FillPlanInfo(const jdot::TransportPlan& plan, jdot_plan_info* info) {
  if (info == nullptr) return;
  const jdot::MarginalError err = jdot::MarginalViolation(plan);
  info->n_source = static_cast<size_t>(plan.coupling.rows());
  info->n_target = static_cast<size_t>(plan.coupling.cols());
  info->objective = plan.objective;
  info->row_err = err.row_err;
  info->col_err = err.col_err;
  info->converged = plan.converged ? 1 : 0;
  info->iterations = plan.iterations;
}

}  // namespace

extern "C" {

const char* jdot_version(void) { return "1.0.0"; }

const char* jdot_last_error(void) { return g_last_error.c_str(); }

void jdot_string_free(char* s) { std::free(s); }

jdot_status jdot_dataset_load_csv(const char* path, jdot_task task, const char* label_columns,
                                  int num_classes, int labels_optional, jdot_dataset** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "path and out must be non-null");
    jdot::CsvSchema schema;
    schema.task = ToTask(task);
    schema.label_columns = SplitNames(label_columns);
    schema.num_classes = num_classes;
    schema.labels_optional = labels_optional != 0;
    auto handle = std::make_unique<jdot_dataset>();
    handle->ds = jdot::LoadCsv(path, schema);
    *out = handle.release();
  });
}

jdot_status jdot_dataset_load_descriptor(const char* path, int num_classes,
                                         int labels_optional, jdot_dataset** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "path and out must be non-null");
    Require(num_classes >= 0, "num_classes must be >= 0");
    jdot::DatasetDescriptor d = jdot::ReadDescriptor(path);
    if (num_classes > 0) d.schema.num_classes = num_classes;
    d.schema.labels_optional = labels_optional != 0;
    auto handle = std::make_unique<jdot_dataset>();
    handle->ds = jdot::LoadCsv(d.path, d.schema);
    *out = handle.release();
  });
}

jdot_status jdot_dataset_save_csv(const jdot_dataset* ds, const char* path) {
  return Guard([&] {
    Require(ds != nullptr && path != nullptr, "dataset and path must be non-null");
    jdot::SaveCsv(ds->ds, path);
  });
}

jdot_status jdot_dataset_create(jdot_task task, const double* features, size_t n, size_t dim,
                                const double* labels, size_t label_dim, int num_classes,
                                jdot_dataset** out) {
  return Guard([&] {
    Require(features != nullptr && out != nullptr, "features and out must be non-null");
    Require(n > 0 && dim > 0, "dataset needs n > 0 and dim > 0");
    auto handle = std::make_unique<jdot_dataset>();
    jdot::LabeledDataset& ds = handle->ds;
    ds.task = ToTask(task);
    ds.X = Eigen::Map<const jdot::Matrix>(features, static_cast<Eigen::Index>(n),
                                          static_cast<Eigen::Index>(dim));
    if (labels != nullptr) {
      if (ds.task == jdot::Task::kClassification) {
        int max_label = -1;
        for (size_t i = 0; i < n; ++i) {
          const double v = labels[i];
          Require(v >= 0.0 && v == static_cast<double>(static_cast<int>(v)),
                  "class labels must be non-negative integers");
          ds.classes.push_back(static_cast<int>(v));
          max_label = std::max(max_label, ds.classes.back());
        }
        ds.num_classes = num_classes > 0 ? num_classes : max_label + 1;
      } else {
        Require(label_dim > 0, "regression labels need label_dim > 0");
        ds.targets = Eigen::Map<const jdot::Matrix>(labels, static_cast<Eigen::Index>(n),
                                                    static_cast<Eigen::Index>(label_dim));
      }
    } else if (ds.task == jdot::Task::kClassification) {
      ds.num_classes = num_classes;
    }
    ds.Validate();
    *out = handle.release();
  });
}

jdot_status jdot_dataset_gen_rotated_gaussians(size_t n_per_class, double rotation, uint64_t seed,
                                               jdot_dataset** source, jdot_dataset** target) {
  return Guard([&] {
    Require(source != nullptr && target != nullptr, "output handles must be non-null");
    auto pair = jdot::GenRotatedGaussians(static_cast<int64_t>(n_per_class), rotation, seed);
    auto s = std::make_unique<jdot_dataset>(jdot_dataset{std::move(pair.source)});
    auto t = std::make_unique<jdot_dataset>(jdot_dataset{std::move(pair.target)});
    *source = s.release();
    *target = t.release();
  });
}

jdot_status jdot_dataset_gen_regression_shift(size_t n, double noise, uint64_t seed,
                                              jdot_dataset** source, jdot_dataset** target) {
  return Guard([&] {
    Require(source != nullptr && target != nullptr, "output handles must be non-null");
    Require(noise >= 0.0, "noise must be non-negative");
    jdot::RegressionShiftParams params;
    params.noise = noise;
    auto pair = jdot::GenRegressionShift(static_cast<int64_t>(n), seed, params);
    auto s = std::make_unique<jdot_dataset>(jdot_dataset{std::move(pair.source)});
    auto t = std::make_unique<jdot_dataset>(jdot_dataset{std::move(pair.target)});
    *source = s.release();
    *target = t.release();
  });
}

jdot_status jdot_dataset_subsample(const jdot_dataset* ds, double fraction, uint64_t seed,
                                   jdot_dataset** out) {
  return Guard([&] {
    Require(ds != nullptr && out != nullptr, "dataset and out must be non-null");
    auto handle = std::make_unique<jdot_dataset>();
    handle->ds = jdot::Subsample(ds->ds, fraction, seed);
    *out = handle.release();
  });
}

size_t jdot_dataset_rows(const jdot_dataset* ds) {
  return ds == nullptr ? 0 : static_cast<size_t>(ds->ds.size());
}

size_t jdot_dataset_dim(const jdot_dataset* ds) {
  return ds == nullptr ? 0 : static_cast<size_t>(ds->ds.dim());
}

int jdot_dataset_has_labels(const jdot_dataset* ds) {
  return ds != nullptr && ds->ds.has_labels() ? 1 : 0;
}

int jdot_dataset_num_classes(const jdot_dataset* ds) { return ds == nullptr ? 0 : ds->ds.num_classes; }

jdot_task jdot_dataset_task(const jdot_dataset* ds) {
  return ds == nullptr ? JDOT_TASK_REGRESSION : FromTask(ds->ds.task);
}

jdot_status jdot_dataset_features(const jdot_dataset* ds, double* out, size_t capacity) {
  return Guard([&] {
    Require(ds != nullptr, "dataset must be non-null");
    CopyOut(ds->ds.X, out, capacity);
  });
}

void jdot_dataset_free(jdot_dataset* ds) { delete ds; }

jdot_status jdot_heuristic_alpha(const jdot_dataset* source, const jdot_dataset* target,
                                 double* alpha) {
  return Guard([&] {
    Require(source != nullptr && target != nullptr && alpha != nullptr, "null argument");
    *alpha = jdot::HeuristicAlpha(jdot::FeatureDistanceMatrix(source->ds.X, target->ds.X));
  });
}

jdot_status jdot_ot_solve(const double* cost, size_t n_source, size_t n_target, double epsilon,
                          int64_t max_iter, double tol, double* coupling, jdot_plan_info* info) {
  return Guard([&] {
    Require(cost != nullptr, "cost must be non-null");
    Require(n_source > 0 && n_target > 0, "cost matrix must be non-empty");
    const jdot::CostMatrix c(jdot::Matrix(Eigen::Map<const jdot::Matrix>(
        cost, static_cast<Eigen::Index>(n_source), static_cast<Eigen::Index>(n_target))));
    jdot::TransportPlan plan;
    if (epsilon > 0.0) {
      jdot::EntropicOptions opts;
      opts.epsilon = epsilon;
      if (max_iter > 0) opts.max_iter = max_iter;
      if (tol > 0.0) opts.tol = tol;
      plan = jdot::SolveEntropic(c, opts);
    } else {
      plan = jdot::SolveExact(c);
    }
    if (coupling != nullptr) CopyOut(plan.coupling, coupling, n_source * n_target);
    FillPlanInfo(plan, info);
  });
}

jdot_status jdot_fit(const jdot_dataset* source, const jdot_dataset* target,
                     const char* config_json, jdot_result** out) {
  return Guard([&] {
    Require(source != nullptr && target != nullptr && out != nullptr, "null argument");
    const jdot::JdotConfig cfg = jdot::ConfigFromJson(config_json == nullptr ? "" : config_json);
    auto handle = std::make_unique<jdot_result>();
    handle->trace = jdot::JdotFit(source->ds, target->ds.X, cfg);
    *out = handle.release();
  });
}

jdot_status jdot_fit_source_only(const jdot_dataset* source, const jdot_dataset* target,
                                 const char* config_json, jdot_model** out) {
  return Guard([&] {
    Require(source != nullptr && target != nullptr && out != nullptr, "null argument");
    const jdot::JdotConfig cfg = jdot::ConfigFromJson(config_json == nullptr ? "" : config_json);
    const jdot::Kernel kernel = jdot::ResolveKernel(cfg, target->ds.X);
    auto handle = std::make_unique<jdot_model>();
    handle->model = jdot::FitSourceOnly(source->ds, kernel, cfg);
    *out = handle.release();
  });
}

double jdot_result_alpha(const jdot_result* r) { return r == nullptr ? 0.0 : r->trace.alpha; }

double jdot_result_bandwidth(const jdot_result* r) {
  return r == nullptr ? 0.0 : r->trace.kernel.bandwidth;
}

int jdot_result_iterations(const jdot_result* r) { return r == nullptr ? 0 : r->trace.iterations; }

int jdot_result_converged(const jdot_result* r) {
  return r != nullptr && r->trace.converged ? 1 : 0;
}

int jdot_result_converged_at(const jdot_result* r) {
  return r == nullptr ? 0 : r->trace.converged_at;
}

size_t jdot_result_num_records(const jdot_result* r) {
  return r == nullptr ? 0 : r->trace.records.size();
}

jdot_status jdot_result_record(const jdot_result* r, size_t index, int* iteration,
                               int* is_fit_step, double* objective) {
  return Guard([&] {
    Require(r != nullptr, "result must be non-null");
    Require(index < r->trace.records.size(), "record index out of range");
    const jdot::TraceRecord& rec = r->trace.records[index];
    if (iteration != nullptr) *iteration = rec.iteration;
    if (is_fit_step != nullptr) *is_fit_step = rec.step == jdot::HalfStep::kFit ? 1 : 0;
    if (objective != nullptr) *objective = rec.objective;
  });
}

jdot_status jdot_result_trace_jsonl(const jdot_result* r, char** out) {
  return Guard([&] {
    Require(r != nullptr && out != nullptr, "null argument");
    *out = CopyString(jdot::TraceToJsonLines(r->trace));
  });
}

jdot_status jdot_result_plan(const jdot_result* r, double* coupling, size_t capacity,
                             jdot_plan_info* info) {
  return Guard([&] {
    Require(r != nullptr, "result must be non-null");
    if (coupling != nullptr) CopyOut(r->trace.final_plan.coupling, coupling, capacity);
    FillPlanInfo(r->trace.final_plan, info);
  });
}

jdot_status jdot_result_model(const jdot_result* r, int iteration, jdot_model** out) {
  return Guard([&] {
    Require(r != nullptr && out != nullptr, "null argument");
    const jdot::JdotTrace& t = r->trace;
    Require(iteration >= 0 && iteration <= t.iterations, "iteration out of range");
    auto handle = std::make_unique<jdot_model>();
    if (iteration == 0) {
      handle->model = t.initial_model;
    } else if (static_cast<size_t>(iteration) <= t.models.size()) {
      handle->model = t.models[static_cast<size_t>(iteration) - 1];
    } else if (iteration == t.iterations) {
      handle->model = t.final_model;
    } else {
      throw jdot::InvalidInput("intermediate models were not kept (set keep_models)");
    }
    *out = handle.release();
  });
}

void jdot_result_free(jdot_result* r) { delete r; }

jdot_status jdot_model_to_json(const jdot_model* m, char** out) {
  return Guard([&] {
    Require(m != nullptr && out != nullptr, "null argument");
    *out = CopyString(jdot::PredictorToJson(m->model));
  });
}

jdot_status jdot_model_from_json(const char* json, jdot_model** out) {
  return Guard([&] {
    Require(json != nullptr && out != nullptr, "null argument");
    auto handle = std::make_unique<jdot_model>();
    handle->model = jdot::PredictorFromJson(json);
    *out = handle.release();
  });
}

jdot_task jdot_model_task(const jdot_model* m) {
  return m == nullptr ? JDOT_TASK_REGRESSION : FromTask(m->model.task);
}

size_t jdot_model_output_dim(const jdot_model* m) {
  return m == nullptr ? 0 : static_cast<size_t>(m->model.output_dim());
}

jdot_status jdot_model_predict(const jdot_model* m, const jdot_dataset* ds, double* out,
                               size_t capacity) {
  return Guard([&] {
    Require(m != nullptr && ds != nullptr, "null argument");
    CopyOut(jdot::PredictScores(m->model, ds->ds.X), out, capacity);
  });
}

jdot_status jdot_model_predict_classes(const jdot_model* m, const jdot_dataset* ds, int* out,
                                       size_t capacity) {
  return Guard([&] {
    Require(m != nullptr && ds != nullptr && out != nullptr, "null argument");
    Require(m->model.task == jdot::Task::kClassification, "model is not a classifier");
    const std::vector<int> classes = jdot::PredictClasses(m->model, ds->ds.X);
    Require(capacity >= classes.size(), "output buffer too small");
    std::memcpy(out, classes.data(), classes.size() * sizeof(int));
  });
}

jdot_status jdot_model_evaluate(const jdot_model* m, const jdot_dataset* ds,
                                double within_range_radius, jdot_metrics* out) {
  return Guard([&] {
    Require(m != nullptr && ds != nullptr && out != nullptr, "null argument");
    std::optional<double> radius;
    if (within_range_radius >= 0.0) radius = within_range_radius;
    const jdot::Metrics metrics = jdot::Evaluate(m->model, ds->ds, radius);
    *out = jdot_metrics{};
    if (metrics.accuracy) {
      out->has_accuracy = 1;
      out->accuracy = *metrics.accuracy;
    }
    if (metrics.mse) {
      out->has_mse = 1;
      out->mse = *metrics.mse;
    }
    if (metrics.within_range) {
      out->has_within_range = 1;
      out->within_range = *metrics.within_range;
    }
  });
}

void jdot_model_free(jdot_model* m) { delete m; }

}  // extern "C"
