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

#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "jdot/serialize.hpp"
#include "json.hpp"

namespace jdot {
namespace {

TEST(PredictorJson, RoundTripIsBitExact) {
  const DomainPair d = GenRotatedGaussians(6, 0.5, 1);
  JdotConfig cfg;
  cfg.task = Task::kClassification;
  cfg.fit_intercept = true;
  cfg.max_iter = 2;
  const JdotTrace t = JdotFit(d.source, d.target.X, cfg);
  const Predictor back = PredictorFromJson(PredictorToJson(t.final_model));
  EXPECT_EQ(back.task, Task::kClassification);
  EXPECT_EQ(back.kernel.kind, t.final_model.kernel.kind);
  EXPECT_EQ(back.kernel.bandwidth, t.final_model.kernel.bandwidth);
  EXPECT_EQ(back.support_points, t.final_model.support_points);
  EXPECT_EQ(back.coefficients, t.final_model.coefficients);
  EXPECT_EQ(back.intercept, t.final_model.intercept);
  EXPECT_EQ(PredictScores(back, d.target.X), PredictScores(t.final_model, d.target.X));
}

TEST(PredictorJson, KeyOrderIsStable) {
  Predictor m;
  m.support_points = Matrix::Zero(1, 1);
  m.coefficients = Matrix::Zero(1, 1);
  m.intercept = Vector::Zero(1);
  const std::string s = PredictorToJson(m);
  const auto pos = [&](const char* k) { return s.find(std::string("\"") + k + "\""); };
  EXPECT_LT(pos("format"), pos("version"));
  EXPECT_LT(pos("version"), pos("task"));
  EXPECT_LT(pos("task"), pos("kernel"));
  EXPECT_LT(pos("kernel"), pos("support_points"));
  EXPECT_LT(pos("support_points"), pos("coefficients"));
  EXPECT_LT(pos("coefficients"), pos("intercept"));
}

TEST(PredictorJson, MalformedDocumentsAreDataErrors) {
  EXPECT_THROW(PredictorFromJson("{"), DataError);
  EXPECT_THROW(PredictorFromJson("{\"format\":\"other\"}"), DataError);
  EXPECT_THROW(PredictorFromJson(R"({"format":"jdot-predictor","version":2})"), DataError);
  EXPECT_THROW(PredictorFromJson(
                   R"({"format":"jdot-predictor","version":1,"task":"regression",
                       "kernel":{"kind":"rbf","bandwidth":1},"support_points":[[0],[1]],
                       "coefficients":[[0]],"intercept":[0]})"),
               DataError);
  EXPECT_THROW(PredictorFromJson(
                   R"({"format":"jdot-predictor","version":1,"task":"bogus",
                       "kernel":{"kind":"rbf","bandwidth":1},"support_points":[[0]],
                       "coefficients":[[0]],"intercept":[0]})"),
               DataError);
}

TEST(TraceJson, OneLinePerHalfStep) {
  const DomainPair d = GenRegressionShift(12, 2);
  JdotConfig cfg;
  cfg.max_iter = 3;
  cfg.early_stop = false;
  const JdotTrace t = JdotFit(d.source, d.target.X, cfg);
  std::stringstream ss(TraceToJsonLines(t));
  std::string line;
  size_t n = 0;
  while (std::getline(ss, line)) {
    const auto j = nlohmann::ordered_json::parse(line);
    const TraceRecord& r = t.records[n];
    EXPECT_EQ(j.at("iter").get<int>(), r.iteration);
    EXPECT_EQ(j.at("step").get<std::string>(), HalfStepName(r.step));
    EXPECT_EQ(j.at("objective").get<double>(), r.objective);
    EXPECT_EQ(j.begin().key(), "iter");
    ++n;
  }
  EXPECT_EQ(n, 6u);
}

TEST(ConfigJson, ParsesEveryKey) {
  const JdotConfig c = ConfigFromJson(R"({
    "task": "classification", "alpha": 0.5, "alpha_relative": true, "lambda": 0.1,
    "max_iter": 7, "rel_tol": 1e-4, "early_stop": false, "ot": "entropic", "epsilon": 0.2,
    "sinkhorn_max_iter": 50, "sinkhorn_tol": 1e-7, "kernel": "linear", "bandwidth": 2.5,
    "fit_intercept": true, "hinge_tol": 1e-5, "hinge_max_iter": 30, "seed": 9,
    "keep_models": true})");
  EXPECT_EQ(c.task, Task::kClassification);
  EXPECT_EQ(*c.alpha, 0.5);
  EXPECT_TRUE(c.alpha_relative);
  EXPECT_EQ(c.lambda, 0.1);
  EXPECT_EQ(c.max_iter, 7);
  EXPECT_EQ(c.rel_tol, 1e-4);
  EXPECT_FALSE(c.early_stop);
  EXPECT_EQ(c.ot, OtSolver::kEntropic);
  EXPECT_EQ(c.entropic.epsilon, 0.2);
  EXPECT_EQ(c.entropic.max_iter, 50);
  EXPECT_EQ(c.entropic.tol, 1e-7);
  EXPECT_EQ(c.kernel, KernelKind::kLinear);
  EXPECT_EQ(*c.bandwidth, 2.5);
  EXPECT_TRUE(c.fit_intercept);
  EXPECT_EQ(c.hinge.tol, 1e-5);
  EXPECT_EQ(c.hinge.max_iter, 30);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_TRUE(c.keep_models);
  const JdotConfig again = ConfigFromJson(ConfigToJson(c));
  EXPECT_EQ(ConfigToJson(again), ConfigToJson(c));
}

TEST(ConfigJson, DefaultsAndSentinels) {
  const JdotConfig c = ConfigFromJson(R"({"alpha":"heuristic","bandwidth":"median"})");
  EXPECT_FALSE(c.alpha.has_value());
  EXPECT_FALSE(c.bandwidth.has_value());
  EXPECT_EQ(c.lambda, 1e-2);
  EXPECT_EQ(ConfigFromJson("").max_iter, JdotConfig{}.max_iter);
}

TEST(ConfigJson, RejectsBadDocuments) {
  EXPECT_THROW(ConfigFromJson(R"({"alpah": 1})"), InvalidInput);
  EXPECT_THROW(ConfigFromJson(R"({"alpha": "big"})"), InvalidInput);
  EXPECT_THROW(ConfigFromJson(R"({"alpha": -1})"), InvalidInput);
  EXPECT_THROW(ConfigFromJson(R"({"lambda": "x"})"), InvalidInput);
  EXPECT_THROW(ConfigFromJson(R"({"ot": "fast"})"), InvalidInput);
  EXPECT_THROW(ConfigFromJson("[1]"), InvalidInput);
  EXPECT_THROW(ConfigFromJson("{"), DataError);
}

}  // namespace
}  // namespace jdot
