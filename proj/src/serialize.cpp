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

#include "jdot/serialize.hpp"

#include "json.hpp"

namespace jdot {
namespace {

using Json = nlohmann::ordered_json;

Json MatrixToJson(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix MatrixFromJson(const Json& j, const char* what) {
  if (!j.is_array()) throw DataError(std::string(what) + " must be an array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  const Eigen::Index m = n == 0 ? 0 : static_cast<Eigen::Index>(j.at(0).size());
  Matrix out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = j.at(static_cast<size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m) {
      throw DataError(std::string(what) + " rows must all have the same length");
    }
    for (Eigen::Index c = 0; c < m; ++c) out(i, c) = row.at(static_cast<size_t>(c)).get<double>();
  }
  return out;
}

Json Parse(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

}  // namespace

std::string PredictorToJson(const Predictor& model) {
  Json j;
  j["format"] = "jdot-predictor";
  j["version"] = 1;
  j["task"] = TaskName(model.task);
  j["kernel"] = {{"kind", KernelName(model.kernel.kind)}, {"bandwidth", model.kernel.bandwidth}};
  j["support_points"] = MatrixToJson(model.support_points);
  j["coefficients"] = MatrixToJson(model.coefficients);
  Json intercept = Json::array();
  for (Eigen::Index k = 0; k < model.intercept.size(); ++k) intercept.push_back(model.intercept(k));
  j["intercept"] = std::move(intercept);
  return j.dump();
}

Predictor PredictorFromJson(const std::string& text) {
  const Json j = Parse(text, "predictor");
  try {
    if (j.at("format").get<std::string>() != "jdot-predictor") {
      throw DataError("not a jdot-predictor document");
    }
    if (j.at("version").get<int>() != 1) throw DataError("unsupported predictor version");
    Predictor model;
    model.task = ParseTask(j.at("task").get<std::string>());
    model.kernel.kind = ParseKernel(j.at("kernel").at("kind").get<std::string>());
    model.kernel.bandwidth = j.at("kernel").at("bandwidth").get<double>();
    model.support_points = MatrixFromJson(j.at("support_points"), "support_points");
    model.coefficients = MatrixFromJson(j.at("coefficients"), "coefficients");
    const Json& b = j.at("intercept");
    model.intercept.resize(static_cast<Eigen::Index>(b.size()));
    for (size_t k = 0; k < b.size(); ++k) model.intercept(static_cast<Eigen::Index>(k)) = b[k].get<double>();
    if (model.support_points.rows() != model.coefficients.rows()) {
      throw DataError("support_points and coefficients have different row counts");
    }
    if (model.intercept.size() != model.coefficients.cols()) {
      throw DataError("intercept length does not match the coefficient columns");
    }
    return model;
  } catch (const Json::exception& e) {
    throw DataError(std::string("invalid predictor document: ") + e.what());
  } catch (const InvalidInput& e) {
    throw DataError(std::string("invalid predictor document: ") + e.what());
  }
}

std::string TraceRecordToJson(const TraceRecord& r) {
  Json j;
  j["iter"] = r.iteration;
  j["step"] = HalfStepName(r.step);
  j["objective"] = r.objective;
  j["ot_objective"] = r.ot_objective;
  j["feature_term"] = r.feature_term;
  j["regularization"] = r.regularization;
  j["marginal_violation"] = r.marginal_violation;
  j["ot_converged"] = r.ot_converged;
  j["fit_converged"] = r.fit_converged;
  return j.dump();
}

std::string TraceToJsonLines(const JdotTrace& trace) {
  std::string out;
  for (const TraceRecord& r : trace.records) {
    out += TraceRecordToJson(r);
    out += '\n';
  }
  return out;
}

JdotConfig ConfigFromJson(const std::string& text) {
  JdotConfig cfg;
  if (text.empty()) return cfg;
  const Json j = Parse(text, "config");
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "task") {
        cfg.task = ParseTask(value.get<std::string>());
      } else if (key == "alpha") {
        if (value.is_string()) {
          if (value.get<std::string>() != "heuristic") throw InvalidInput("alpha must be a number or \"heuristic\"");
          cfg.alpha.reset();
        } else {
          cfg.alpha = value.get<double>();
        }
      } else if (key == "alpha_relative") {
        cfg.alpha_relative = value.get<bool>();
      } else if (key == "early_stop") {
        cfg.early_stop = value.get<bool>();
      } else if (key == "lambda") {
        cfg.lambda = value.get<double>();
      } else if (key == "max_iter") {
        cfg.max_iter = value.get<int>();
      } else if (key == "rel_tol") {
        cfg.rel_tol = value.get<double>();
      } else if (key == "ot") {
        const auto name = value.get<std::string>();
        if (name == "exact") {
          cfg.ot = OtSolver::kExact;
        } else if (name == "entropic") {
          cfg.ot = OtSolver::kEntropic;
        } else {
          throw InvalidInput("ot must be \"exact\" or \"entropic\"");
        }
      } else if (key == "epsilon") {
        cfg.entropic.epsilon = value.get<double>();
      } else if (key == "sinkhorn_max_iter") {
        cfg.entropic.max_iter = value.get<int64_t>();
      } else if (key == "sinkhorn_tol") {
        cfg.entropic.tol = value.get<double>();
      } else if (key == "kernel") {
        cfg.kernel = ParseKernel(value.get<std::string>());
      } else if (key == "bandwidth") {
        if (value.is_string()) {
          if (value.get<std::string>() != "median") throw InvalidInput("bandwidth must be a number or \"median\"");
          cfg.bandwidth.reset();
        } else {
          cfg.bandwidth = value.get<double>();
        }
      } else if (key == "fit_intercept") {
        cfg.fit_intercept = value.get<bool>();
      } else if (key == "hinge_tol") {
        cfg.hinge.tol = value.get<double>();
      } else if (key == "hinge_max_iter") {
        cfg.hinge.max_iter = value.get<int64_t>();
      } else if (key == "seed") {
        cfg.seed = value.get<uint64_t>();
      } else if (key == "keep_models") {
        cfg.keep_models = value.get<bool>();
      } else {
        throw InvalidInput("unknown config key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("config value has the wrong type: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

std::string ConfigToJson(const JdotConfig& cfg) {
  Json j;
  j["task"] = TaskName(cfg.task);
  if (cfg.alpha) {
    j["alpha"] = *cfg.alpha;
  } else {
    j["alpha"] = "heuristic";
  }
  j["alpha_relative"] = cfg.alpha_relative;
  j["lambda"] = cfg.lambda;
  j["max_iter"] = cfg.max_iter;
  j["rel_tol"] = cfg.rel_tol;
  j["early_stop"] = cfg.early_stop;
  j["ot"] = cfg.ot == OtSolver::kExact ? "exact" : "entropic";
  if (cfg.ot == OtSolver::kEntropic) {
    j["epsilon"] = cfg.entropic.epsilon;
    j["sinkhorn_max_iter"] = cfg.entropic.max_iter;
    j["sinkhorn_tol"] = cfg.entropic.tol;
  }
  j["kernel"] = KernelName(cfg.kernel);
  if (cfg.bandwidth) {
    j["bandwidth"] = *cfg.bandwidth;
  } else {
    j["bandwidth"] = "median";
  }
  j["fit_intercept"] = cfg.fit_intercept;
  j["hinge_tol"] = cfg.hinge.tol;
  j["hinge_max_iter"] = cfg.hinge.max_iter;
  j["seed"] = cfg.seed;
  j["keep_models"] = cfg.keep_models;
  return j.dump();
}

}  // namespace jdot
