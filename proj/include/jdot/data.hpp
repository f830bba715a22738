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

#ifndef JDOT_DATA_HPP_
#define JDOT_DATA_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "jdot/types.hpp"

namespace jdot {

enum class DomainTag { kSource, kTarget };

// Feature matrix plus optional labels. Classification labels are class
// indices in [0, num_classes); regression labels are an N x m matrix.
// Target-domain datasets may carry labels that are only used for scoring.
struct LabeledDataset {
  Task task = Task::kRegression;
  DomainTag domain = DomainTag::kSource;
  Matrix X;
  std::vector<int> classes;
  Matrix targets;
  int num_classes = 0;
  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;

  Eigen::Index size() const { return X.rows(); }
  Eigen::Index dim() const { return X.cols(); }
  bool has_labels() const {
    return task == Task::kClassification ? !classes.empty() : targets.rows() > 0;
  }

  // Throws InvalidInput when any invariant is broken: N >= 1, finite
  // values, label count equal to N, class indices below num_classes.
  void Validate() const;
};

// Three 2-D isotropic Gaussians. Defaults: centers on a ring of radius 3 at
// angles 0, pi/2 and pi; standard deviations 0.4, 0.6, 0.8.
struct RotatedGaussiansParams {
  double radius = 3.0;
  std::vector<double> angles = {0.0, 1.5707963267948966, 3.141592653589793};
  std::vector<double> sigmas = {0.4, 0.6, 0.8};
};

struct DomainPair {
  LabeledDataset source;
  LabeledDataset target;
};

// Source: n_per_class draws per class. Target: an independent draw from the
// same mixture, rotated by `rotation` radians about the origin (the angle is
// reduced modulo 2 pi first). Both carry labels.
DomainPair GenRotatedGaussians(int64_t n_per_class, double rotation, uint64_t seed,
                               const RotatedGaussiansParams& params = {});

// 1-D regression under domain shift. Source inputs are a two-component
// mixture N(-2, 1) / N(2, 1) with y = sin(x / 2) * 2 + noise. Target inputs
// come from a narrower mixture N(-1.5, 0.5) / N(2, 1) shifted by +2, and
// the response moves with them: y = 2 sin((x - 2) / 2) + noise.
struct RegressionShiftParams {
  double noise = 0.1;
  double shift = 2.0;
  double amplitude = 2.0;
};

double RegressionShiftSourceCurve(double x, const RegressionShiftParams& params);
double RegressionShiftTargetCurve(double x, const RegressionShiftParams& params);

DomainPair GenRegressionShift(int64_t n, uint64_t seed, const RegressionShiftParams& params = {});

// CSV layout: comma separated, one header row, '.' decimal point, no
// quoting. Columns named in `label_columns` are labels; `feature_columns`
// selects features (empty means every non-label column, in file order).
struct CsvSchema {
  Task task = Task::kRegression;
  std::vector<std::string> label_columns;
  std::vector<std::string> feature_columns;
  // Classification only: 0 infers max(label) + 1.
  int num_classes = 0;
  // When false, missing label columns are an error.
  bool labels_optional = false;
};

LabeledDataset LoadCsv(const std::string& path, const CsvSchema& schema);

// JSON descriptor pointing at a CSV file:
//   {"path": "x.csv", "task": "classification", "label_columns": ["label"],
//    "feature_columns": [...], "num_classes": 3}
// feature_columns and num_classes are optional. A relative path is resolved
// against the descriptor's own directory.
struct DatasetDescriptor {
  std::string path;
  CsvSchema schema;
};

DatasetDescriptor ParseDescriptor(const std::string& json_text, const std::string& base_dir,
                                  const std::string& origin = "<descriptor>");
DatasetDescriptor ReadDescriptor(const std::string& json_path);
// Reads the descriptor and then the CSV it names.
LabeledDataset LoadDescriptor(const std::string& json_path, bool labels_optional = false);
LabeledDataset ParseCsv(const std::string& text, const CsvSchema& schema,
                        const std::string& origin = "<memory>");
void SaveCsv(const LabeledDataset& ds, const std::string& path);
std::string FormatCsv(const LabeledDataset& ds);

// floor(fraction * N) rows drawn uniformly without replacement, returned in
// their original order.
LabeledDataset Subsample(const LabeledDataset& ds, double fraction, uint64_t seed);

LabeledDataset SelectRows(const LabeledDataset& ds, const std::vector<Eigen::Index>& rows);

}  // namespace jdot

#endif  // JDOT_DATA_HPP_
