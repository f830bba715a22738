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

// JSON encodings shared by the C API and the command-line tool.
//
// Predictor document (keys in this order):
//   {
//     "format": "jdot-predictor", "version": 1,
//     "task": "regression" | "classification",
//     "kernel": {"kind": "linear" | "rbf", "bandwidth": <number>},
//     "support_points": [[...], ...],   // n rows of d numbers
//     "coefficients": [[...], ...],     // n rows of m numbers
//     "intercept": [...]                // m numbers
//   }
//
// Trace: one JSON object per line and per half-step, with keys
//   iter, step ("ot" | "fit"), objective, ot_objective, feature_term,
//   regularization, marginal_violation, ot_converged, fit_converged.
//
// Config document: every key optional, defaults as in JdotConfig.
//   {"task": "...", "alpha": <number> | "heuristic", "alpha_relative": <bool>,
//    "lambda": <number>, "max_iter": <int>, "rel_tol": <number>,
//    "early_stop": <bool>,
//    "ot": "exact" | "entropic", "epsilon": <number>,
//    "sinkhorn_max_iter": <int>, "sinkhorn_tol": <number>,
//    "kernel": "linear" | "rbf", "bandwidth": <number> | "median",
//    "fit_intercept": <bool>, "hinge_tol": <number>,
//    "hinge_max_iter": <int>, "seed": <int>, "keep_models": <bool>}
//
// Numbers are written in shortest round-trip form, so a document read back
// reproduces every double bit for bit.

#ifndef JDOT_SERIALIZE_HPP_
#define JDOT_SERIALIZE_HPP_

#include <string>

#include "jdot/jdot.hpp"

namespace jdot {

std::string PredictorToJson(const Predictor& model);
Predictor PredictorFromJson(const std::string& text);

std::string TraceRecordToJson(const TraceRecord& record);
std::string TraceToJsonLines(const JdotTrace& trace);

JdotConfig ConfigFromJson(const std::string& text);
std::string ConfigToJson(const JdotConfig& config);

}  // namespace jdot

#endif  // JDOT_SERIALIZE_HPP_
