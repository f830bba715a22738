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

// Exercises the shared library only through its C interface.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "jdot/jdot_c.h"

namespace {

struct Pair {
  jdot_dataset* source = nullptr;
  jdot_dataset* target = nullptr;
  ~Pair() {
    jdot_dataset_free(source);
    jdot_dataset_free(target);
  }
};

double BruteForce(const std::vector<double>& c, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  double best = 1e300;
  do {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += c[i * n + p[i]];
    best = std::min(best, s / n);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

TEST(CApi, VersionAndErrorChannel) {
  EXPECT_STREQ(jdot_version(), "1.0.0");
  jdot_dataset* ds = nullptr;
  EXPECT_EQ(jdot_dataset_load_csv("/nonexistent/file.csv", JDOT_TASK_REGRESSION, "y", 0, 0, &ds),
            JDOT_ERR_DATA);
  EXPECT_EQ(ds, nullptr);
  EXPECT_NE(std::string(jdot_last_error()).find("cannot open"), std::string::npos);
  EXPECT_EQ(jdot_dataset_load_csv(nullptr, JDOT_TASK_REGRESSION, "y", 0, 0, &ds),
            JDOT_ERR_INVALID_ARGUMENT);
}

TEST(CApi, OtSolveMatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 2; n <= 6; ++n) {
    std::vector<double> c(n * n), g(n * n);
    for (double& v : c) v = u(rng);
    jdot_plan_info info{};
    ASSERT_EQ(jdot_ot_solve(c.data(), n, n, 0.0, 0, 0.0, g.data(), &info), JDOT_OK);
    EXPECT_NEAR(info.objective, BruteForce(c, n), 1e-9);
    EXPECT_LE(info.row_err, 1e-12);
    EXPECT_LE(info.col_err, 1e-12);
    EXPECT_EQ(info.converged, 1);
    ASSERT_EQ(jdot_ot_solve(c.data(), n, n, 0.2, 100000, 1e-9, g.data(), &info), JDOT_OK);
    ASSERT_EQ(info.converged, 1);
    EXPECT_GE(info.objective, BruteForce(c, n) - 1e-12);
    EXPECT_LE(info.row_err, 1e-9);
  }
  std::vector<double> neg = {1.0, -1.0, 0.0, 0.0};
  jdot_plan_info info{};
  EXPECT_EQ(jdot_ot_solve(neg.data(), 2, 2, 0.0, 0, 0.0, nullptr, &info), JDOT_ERR_INVALID_ARGUMENT);
}

TEST(CApi, DatasetCreateAndAccessors) {
  const double x[] = {0, 0, 1, 0, 0, 1, 1, 1};
  const double y[] = {0, 1, 1, 0};
  jdot_dataset* ds = nullptr;
  ASSERT_EQ(jdot_dataset_create(JDOT_TASK_CLASSIFICATION, x, 4, 2, y, 1, 2, &ds), JDOT_OK);
  EXPECT_EQ(jdot_dataset_rows(ds), 4u);
  EXPECT_EQ(jdot_dataset_dim(ds), 2u);
  EXPECT_EQ(jdot_dataset_has_labels(ds), 1);
  EXPECT_EQ(jdot_dataset_num_classes(ds), 2);
  EXPECT_EQ(jdot_dataset_task(ds), JDOT_TASK_CLASSIFICATION);
  double back[8];
  ASSERT_EQ(jdot_dataset_features(ds, back, 8), JDOT_OK);
  EXPECT_EQ(std::memcmp(back, x, sizeof(x)), 0);
  EXPECT_EQ(jdot_dataset_features(ds, back, 7), JDOT_ERR_INVALID_ARGUMENT);
  jdot_dataset_free(ds);
  const double bad[] = {0, 3, 1, 0};
  EXPECT_EQ(jdot_dataset_create(JDOT_TASK_CLASSIFICATION, x, 4, 2, bad, 1, 2, &ds),
            JDOT_ERR_INVALID_ARGUMENT);
}

TEST(CApi, CsvRoundTripAndSubsample) {
  Pair p;
  ASSERT_EQ(jdot_dataset_gen_rotated_gaussians(5, 0.3, 1, &p.source, &p.target), JDOT_OK);
  const auto path = (std::filesystem::temp_directory_path() / "jdot_capi_test.csv").string();
  ASSERT_EQ(jdot_dataset_save_csv(p.source, path.c_str()), JDOT_OK);
  jdot_dataset* back = nullptr;
  ASSERT_EQ(jdot_dataset_load_csv(path.c_str(), JDOT_TASK_CLASSIFICATION, "label", 3, 0, &back),
            JDOT_OK);
  std::vector<double> a(30), b(30);
  jdot_dataset_features(p.source, a.data(), a.size());
  jdot_dataset_features(back, b.data(), b.size());
  EXPECT_EQ(a, b);
  jdot_dataset* sub = nullptr;
  ASSERT_EQ(jdot_dataset_subsample(back, 0.4, 3, &sub), JDOT_OK);
  EXPECT_EQ(jdot_dataset_rows(sub), 6u);
  jdot_dataset_free(sub);
  jdot_dataset_free(back);
  EXPECT_EQ(jdot_dataset_load_csv(path.c_str(), JDOT_TASK_CLASSIFICATION, "nope", 0, 0, &back),
            JDOT_ERR_DATA);
  const auto desc = (std::filesystem::temp_directory_path() / "jdot_capi_test.json").string();
  {
    std::FILE* f = std::fopen(desc.c_str(), "w");
    ASSERT_NE(f, nullptr);
    std::fputs(R"({"path": "jdot_capi_test.csv", "task": "classification", "label_columns": ["label"]})", f);
    std::fclose(f);
  }
  ASSERT_EQ(jdot_dataset_load_descriptor(desc.c_str(), 4, 0, &back), JDOT_OK);
  EXPECT_EQ(jdot_dataset_task(back), JDOT_TASK_CLASSIFICATION);
  EXPECT_EQ(jdot_dataset_num_classes(back), 4);
  jdot_dataset_features(back, b.data(), b.size());
  EXPECT_EQ(a, b);
  jdot_dataset_free(back);
  EXPECT_EQ(jdot_dataset_load_descriptor(desc.c_str(), -1, 0, &back), JDOT_ERR_INVALID_ARGUMENT);
  std::filesystem::remove(desc);
  std::filesystem::remove(path);
}

TEST(CApi, FitResultAndModelLifecycle) {
  Pair p;
  ASSERT_EQ(jdot_dataset_gen_rotated_gaussians(15, 0.78, 2, &p.source, &p.target), JDOT_OK);
  const char* cfg =
      R"({"task":"classification","alpha":1,"alpha_relative":true,"max_iter":6,"keep_models":true})";
  jdot_result* r = nullptr;
  ASSERT_EQ(jdot_fit(p.source, p.target, cfg, &r), JDOT_OK) << jdot_last_error();
  double h = 0.0;
  ASSERT_EQ(jdot_heuristic_alpha(p.source, p.target, &h), JDOT_OK);
  EXPECT_NEAR(jdot_result_alpha(r), h, 1e-15 * h);
  EXPECT_GT(jdot_result_bandwidth(r), 0.0);
  const int iters = jdot_result_iterations(r);
  ASSERT_GE(iters, 1);
  ASSERT_EQ(jdot_result_num_records(r), 2u * iters);
  double prev = 1e300;
  for (size_t i = 0; i < jdot_result_num_records(r); ++i) {
    int it = 0, fit = 0;
    double obj = 0.0;
    ASSERT_EQ(jdot_result_record(r, i, &it, &fit, &obj), JDOT_OK);
    EXPECT_EQ(it, static_cast<int>(i / 2) + 1);
    EXPECT_EQ(fit, static_cast<int>(i % 2));
    EXPECT_LE(obj, prev + 1e-8 * (1 + std::fabs(prev)));
    prev = obj;
  }
  EXPECT_EQ(jdot_result_record(r, 1000, nullptr, nullptr, nullptr), JDOT_ERR_INVALID_ARGUMENT);
  if (jdot_result_converged(r)) {
    EXPECT_EQ(jdot_result_converged_at(r), iters);
  }

  char* trace = nullptr;
  ASSERT_EQ(jdot_result_trace_jsonl(r, &trace), JDOT_OK);
  EXPECT_EQ(static_cast<size_t>(std::count(trace, trace + std::strlen(trace), '\n')),
            2u * iters);
  jdot_string_free(trace);

  std::vector<double> plan(45 * 45);
  jdot_plan_info info{};
  ASSERT_EQ(jdot_result_plan(r, plan.data(), plan.size(), &info), JDOT_OK);
  EXPECT_EQ(info.n_source, 45u);
  EXPECT_NEAR(std::accumulate(plan.begin(), plan.end(), 0.0), 1.0, 1e-12);

  jdot_model* m = nullptr;
  ASSERT_EQ(jdot_result_model(r, iters, &m), JDOT_OK);
  jdot_model* m0 = nullptr;
  ASSERT_EQ(jdot_result_model(r, 0, &m0), JDOT_OK);
  jdot_model* bad = nullptr;
  EXPECT_EQ(jdot_result_model(r, iters + 1, &bad), JDOT_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(jdot_model_task(m), JDOT_TASK_CLASSIFICATION);
  EXPECT_EQ(jdot_model_output_dim(m), 3u);

  jdot_metrics met{}, met0{};
  ASSERT_EQ(jdot_model_evaluate(m, p.target, -1.0, &met), JDOT_OK);
  ASSERT_EQ(jdot_model_evaluate(m0, p.target, -1.0, &met0), JDOT_OK);
  EXPECT_EQ(met.has_accuracy, 1);
  EXPECT_EQ(met.has_mse, 0);
  EXPECT_GE(met.accuracy, met0.accuracy);

  jdot_model* base = nullptr;
  ASSERT_EQ(jdot_fit_source_only(p.source, p.target, cfg, &base), JDOT_OK);
  jdot_metrics metb{};
  ASSERT_EQ(jdot_model_evaluate(base, p.target, -1.0, &metb), JDOT_OK);
  EXPECT_EQ(metb.accuracy, met0.accuracy);

  // JSON round trip reproduces predictions exactly.
  char* json = nullptr;
  ASSERT_EQ(jdot_model_to_json(m, &json), JDOT_OK);
  jdot_model* m2 = nullptr;
  ASSERT_EQ(jdot_model_from_json(json, &m2), JDOT_OK);
  jdot_string_free(json);
  std::vector<double> s1(135), s2(135);
  ASSERT_EQ(jdot_model_predict(m, p.target, s1.data(), s1.size()), JDOT_OK);
  ASSERT_EQ(jdot_model_predict(m2, p.target, s2.data(), s2.size()), JDOT_OK);
  EXPECT_EQ(s1, s2);
  std::vector<int> c1(45);
  ASSERT_EQ(jdot_model_predict_classes(m2, p.target, c1.data(), c1.size()), JDOT_OK);
  for (int j = 0; j < 45; ++j) {
    const double* row = &s1[3 * j];
    EXPECT_EQ(c1[j], std::max_element(row, row + 3) - row);
  }
  EXPECT_EQ(jdot_model_predict(m, p.target, s1.data(), 10), JDOT_ERR_INVALID_ARGUMENT);

  jdot_model_free(base);
  jdot_model_free(m2);
  jdot_model_free(m0);
  jdot_model_free(m);
  jdot_result_free(r);
}

TEST(CApi, RegressionMetricsAndWithinRange) {
  Pair p;
  ASSERT_EQ(jdot_dataset_gen_regression_shift(40, 0.1, 3, &p.source, &p.target), JDOT_OK);
  jdot_result* r = nullptr;
  ASSERT_EQ(jdot_fit(p.source, p.target, nullptr, &r), JDOT_OK);
  jdot_model* m = nullptr;
  ASSERT_EQ(jdot_result_model(r, jdot_result_iterations(r), &m), JDOT_OK);
  jdot_metrics met{};
  ASSERT_EQ(jdot_model_evaluate(m, p.target, 0.5, &met), JDOT_OK);
  EXPECT_EQ(met.has_mse, 1);
  EXPECT_EQ(met.has_within_range, 1);
  EXPECT_GE(met.within_range, 0.0);
  EXPECT_LE(met.within_range, 1.0);
  jdot_model_free(m);
  jdot_result_free(r);
}

TEST(CApi, ErrorCodes) {
  Pair p;
  ASSERT_EQ(jdot_dataset_gen_regression_shift(10, 0.1, 1, &p.source, &p.target), JDOT_OK);
  jdot_result* r = nullptr;
  EXPECT_EQ(jdot_fit(p.source, p.target, R"({"lambda": -1})", &r), JDOT_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(jdot_fit(p.source, p.target, R"({"bogus": 1})", &r), JDOT_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(jdot_fit(p.source, p.target, R"({"task": "classification"})", &r),
            JDOT_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(jdot_fit(nullptr, p.target, nullptr, &r), JDOT_ERR_INVALID_ARGUMENT);
  jdot_model* m = nullptr;
  EXPECT_EQ(jdot_model_from_json("{\"format\": 1}", &m), JDOT_ERR_DATA);
  EXPECT_EQ(jdot_model_from_json("not json", &m), JDOT_ERR_DATA);
  EXPECT_FALSE(std::string(jdot_last_error()).empty());
  jdot_dataset* s = nullptr;
  jdot_dataset* t = nullptr;
  EXPECT_EQ(jdot_dataset_gen_rotated_gaussians(0, 0.0, 1, &s, &t), JDOT_ERR_INVALID_ARGUMENT);
}

}  // namespace
