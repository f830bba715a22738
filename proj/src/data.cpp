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

#include "jdot/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

namespace jdot {

void LabeledDataset::Validate() const {
  if (X.rows() < 1) throw InvalidInput("dataset must contain at least one sample");
  if (X.cols() < 1) throw InvalidInput("dataset must contain at least one feature");
  if (!X.allFinite()) throw InvalidInput("dataset features contain a non-finite value");
  if (task == Task::kClassification) {
    if (!classes.empty()) {
      if (static_cast<Eigen::Index>(classes.size()) != X.rows()) {
        throw InvalidInput("class label count does not match the number of samples");
      }
      for (int c : classes) {
        if (c < 0 || c >= num_classes) {
          throw InvalidInput("class index " + std::to_string(c) + " out of range [0, " +
                             std::to_string(num_classes) + ")");
        }
      }
    }
  } else if (targets.rows() > 0) {
    if (targets.rows() != X.rows()) {
      throw InvalidInput("target row count does not match the number of samples");
    }
    if (!targets.allFinite()) throw InvalidInput("regression targets contain a non-finite value");
  }
}

namespace {

LabeledDataset SampleGaussians(std::mt19937_64& rng, int64_t n_per_class,
                               const RotatedGaussiansParams& params) {
  const size_t n_classes = params.angles.size();
  std::normal_distribution<double> normal(0.0, 1.0);
  LabeledDataset ds;
  ds.task = Task::kClassification;
  ds.num_classes = static_cast<int>(n_classes);
  ds.X.resize(static_cast<Eigen::Index>(n_classes) * n_per_class, 2);
  ds.classes.resize(static_cast<size_t>(ds.X.rows()));
  ds.feature_names = {"x0", "x1"};
  ds.label_names = {"label"};
  Eigen::Index row = 0;
  for (size_t c = 0; c < n_classes; ++c) {
    const double cx = params.radius * std::cos(params.angles[c]);
    const double cy = params.radius * std::sin(params.angles[c]);
    for (int64_t k = 0; k < n_per_class; ++k, ++row) {
      ds.X(row, 0) = cx + params.sigmas[c] * normal(rng);
      ds.X(row, 1) = cy + params.sigmas[c] * normal(rng);
      ds.classes[static_cast<size_t>(row)] = static_cast<int>(c);
    }
  }
  return ds;
}

}  // namespace

DomainPair GenRotatedGaussians(int64_t n_per_class, double rotation, uint64_t seed,
                               const RotatedGaussiansParams& params) {
  if (n_per_class < 1) throw InvalidInput("n_per_class must be >= 1");
  if (params.angles.empty() || params.angles.size() != params.sigmas.size()) {
    throw InvalidInput("gaussian centers and sigmas must be non-empty and of equal length");
  }
  std::mt19937_64 rng(seed);
  DomainPair pair;
  pair.source = SampleGaussians(rng, n_per_class, params);
  pair.source.domain = DomainTag::kSource;
  pair.target = SampleGaussians(rng, n_per_class, params);
  pair.target.domain = DomainTag::kTarget;

  const double angle = std::fmod(rotation, 2.0 * std::numbers::pi);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (Eigen::Index i = 0; i < pair.target.X.rows(); ++i) {
    const double x = pair.target.X(i, 0);
    const double y = pair.target.X(i, 1);
    pair.target.X(i, 0) = c * x - s * y;
    pair.target.X(i, 1) = s * x + c * y;
  }
  return pair;
}

double RegressionShiftSourceCurve(double x, const RegressionShiftParams& params) {
  return params.amplitude * std::sin(x / 2.0);
}

double RegressionShiftTargetCurve(double x, const RegressionShiftParams& params) {
  return params.amplitude * std::sin((x - params.shift) / 2.0);
}

DomainPair GenRegressionShift(int64_t n, uint64_t seed, const RegressionShiftParams& params) {
  if (n < 2) throw InvalidInput("regression generator needs n >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int64_t half = n / 2;

  auto make = [&](bool target) {
    LabeledDataset ds;
    ds.task = Task::kRegression;
    ds.domain = target ? DomainTag::kTarget : DomainTag::kSource;
    ds.X.resize(n, 1);
    ds.targets.resize(n, 1);
    ds.feature_names = {"x"};
    ds.label_names = {"y"};
    for (int64_t i = 0; i < n; ++i) {
      const double z = normal(rng);
      double x;
      if (!target) {
        x = i < half ? z - 2.0 : z + 2.0;
      } else {
        x = (i < half ? 0.5 * z - 1.5 : z + 2.0) + params.shift;
      }
      const double clean =
          target ? RegressionShiftTargetCurve(x, params) : RegressionShiftSourceCurve(x, params);
      ds.X(i, 0) = x;
      ds.targets(i, 0) = clean + params.noise * normal(rng);
    }
    return ds;
  };
  DomainPair pair;
  pair.source = make(false);
  pair.target = make(true);
  return pair;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string Trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(Trim(std::string_view(line).substr(start)));
      break;
    }
    out.push_back(Trim(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

std::string Where(const std::string& origin, size_t line, const std::string& column) {
  return origin + ":" + std::to_string(line) + ", column '" + column + "'";
}

double ParseCell(const std::string& cell, const std::string& origin, size_t line,
                 const std::string& column) {
  if (cell.empty()) throw DataError(Where(origin, line, column) + ": missing value");
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw DataError(Where(origin, line, column) + ": non-numeric value '" + cell + "'");
  }
  if (!std::isfinite(value)) {
    throw DataError(Where(origin, line, column) + ": non-finite value '" + cell + "'");
  }
  return value;
}

}  // namespace

LabeledDataset ParseCsv(const std::string& text, const CsvSchema& schema, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) {
      header = SplitFields(line);
      break;
    }
  }
  if (header.empty()) throw DataError(origin + ": missing header row");

  auto find_column = [&](const std::string& name) -> long {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<long>(it - header.begin());
  };

  std::vector<long> label_idx;
  for (const std::string& name : schema.label_columns) {
    const long idx = find_column(name);
    if (idx < 0) {
      if (schema.labels_optional) {
        label_idx.clear();
        break;
      }
      throw DataError(origin + ": label column '" + name + "' not found in header");
    }
    label_idx.push_back(idx);
  }
  if (schema.task == Task::kClassification && label_idx.size() > 1) {
    throw DataError(origin + ": classification takes exactly one label column");
  }

  std::vector<long> feature_idx;
  if (schema.feature_columns.empty()) {
    for (long c = 0; c < static_cast<long>(header.size()); ++c) {
      const bool is_label =
          std::find(schema.label_columns.begin(), schema.label_columns.end(), header[c]) !=
          schema.label_columns.end();
      if (!is_label) feature_idx.push_back(c);
    }
  } else {
    for (const std::string& name : schema.feature_columns) {
      const long idx = find_column(name);
      if (idx < 0) throw DataError(origin + ": feature column '" + name + "' not found in header");
      feature_idx.push_back(idx);
    }
  }
  if (feature_idx.empty()) throw DataError(origin + ": no feature columns");

  std::vector<std::vector<double>> features;
  std::vector<std::vector<double>> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const std::vector<std::string> fields = SplitFields(line);
    if (fields.size() != header.size()) {
      throw DataError(origin + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(feature_idx.size());
    for (long c : feature_idx) row.push_back(ParseCell(fields[c], origin, line_no, header[c]));
    features.push_back(std::move(row));
    std::vector<double> lab;
    for (long c : label_idx) lab.push_back(ParseCell(fields[c], origin, line_no, header[c]));
    if (schema.task == Task::kClassification && !lab.empty()) {
      const double v = lab[0];
      if (v != std::floor(v) || v < 0.0) {
        throw DataError(Where(origin, line_no, header[label_idx[0]]) +
                        ": class label must be a non-negative integer, got '" +
                        fields[label_idx[0]] + "'");
      }
      if (schema.num_classes > 0 && v >= schema.num_classes) {
        throw DataError(Where(origin, line_no, header[label_idx[0]]) + ": class label " +
                        fields[label_idx[0]] + " out of range [0, " +
                        std::to_string(schema.num_classes) + ")");
      }
    }
    labels.push_back(std::move(lab));
  }
  if (features.empty()) throw DataError(origin + ": no data rows");

  LabeledDataset ds;
  ds.task = schema.task;
  const auto n = static_cast<Eigen::Index>(features.size());
  ds.X.resize(n, static_cast<Eigen::Index>(feature_idx.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < ds.X.cols(); ++k) ds.X(i, k) = features[i][k];
  }
  for (long c : feature_idx) ds.feature_names.push_back(header[c]);
  for (long c : label_idx) ds.label_names.push_back(header[c]);
  if (!label_idx.empty()) {
    if (schema.task == Task::kClassification) {
      int max_label = 0;
      for (const auto& lab : labels) {
        ds.classes.push_back(static_cast<int>(lab[0]));
        max_label = std::max(max_label, ds.classes.back());
      }
      ds.num_classes = schema.num_classes > 0 ? schema.num_classes : max_label + 1;
    } else {
      ds.targets.resize(n, static_cast<Eigen::Index>(label_idx.size()));
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < ds.targets.cols(); ++k) ds.targets(i, k) = labels[i][k];
      }
    }
  } else if (schema.task == Task::kClassification) {
    ds.num_classes = schema.num_classes;
  }
  ds.Validate();
  return ds;
}

LabeledDataset LoadCsv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseCsv(buf.str(), schema, path);
}

namespace {

std::vector<std::string> NameList(const nlohmann::json& doc, const char* key,
                                  const std::string& origin) {
  std::vector<std::string> out;
  if (!doc.contains(key)) return out;
  const nlohmann::json& v = doc.at(key);
  if (!v.is_array()) throw DataError(origin + ": '" + key + "' must be an array of strings");
  for (const auto& e : v) {
    if (!e.is_string()) throw DataError(origin + ": '" + key + "' must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

DatasetDescriptor ParseDescriptor(const std::string& json_text, const std::string& base_dir,
                                  const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(origin + ": malformed JSON: " + e.what());
  }
  if (!doc.is_object()) throw DataError(origin + ": descriptor must be a JSON object");
  if (!doc.contains("path") || !doc.at("path").is_string()) {
    throw DataError(origin + ": missing string field 'path'");
  }
  if (!doc.contains("task") || !doc.at("task").is_string()) {
    throw DataError(origin + ": missing string field 'task'");
  }
  DatasetDescriptor d;
  std::filesystem::path p(doc.at("path").get<std::string>());
  if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
  d.path = p.string();
  const std::string task = doc.at("task").get<std::string>();
  if (task == "classification") {
    d.schema.task = Task::kClassification;
  } else if (task == "regression") {
    d.schema.task = Task::kRegression;
  } else {
    throw DataError(origin + ": unknown task '" + task + "'");
  }
  d.schema.label_columns = NameList(doc, "label_columns", origin);
  d.schema.feature_columns = NameList(doc, "feature_columns", origin);
  if (doc.contains("num_classes")) {
    const auto& nc = doc.at("num_classes");
    if (!nc.is_number_integer() || nc.get<int64_t>() < 0) {
      throw DataError(origin + ": 'num_classes' must be a non-negative integer");
    }
    d.schema.num_classes = nc.get<int>();
  }
  return d;
}

DatasetDescriptor ReadDescriptor(const std::string& json_path) {
  std::ifstream in(json_path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + json_path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseDescriptor(buf.str(), std::filesystem::path(json_path).parent_path().string(),
                         json_path);
}

LabeledDataset LoadDescriptor(const std::string& json_path, bool labels_optional) {
  DatasetDescriptor d = ReadDescriptor(json_path);
  d.schema.labels_optional = labels_optional;
  return LoadCsv(d.path, d.schema);
}

std::string FormatCsv(const LabeledDataset& ds) {
  std::ostringstream out;
  std::vector<std::string> names = ds.feature_names;
  if (static_cast<Eigen::Index>(names.size()) != ds.dim()) {
    names.clear();
    for (Eigen::Index k = 0; k < ds.dim(); ++k) names.push_back("x" + std::to_string(k));
  }
  std::vector<std::string> label_names;
  if (ds.has_labels()) {
    const Eigen::Index m = ds.task == Task::kClassification ? 1 : ds.targets.cols();
    label_names = ds.label_names;
    if (static_cast<Eigen::Index>(label_names.size()) != m) {
      label_names.clear();
      if (m == 1) {
        label_names.push_back(ds.task == Task::kClassification ? "label" : "y");
      } else {
        for (Eigen::Index k = 0; k < m; ++k) label_names.push_back("y" + std::to_string(k));
      }
    }
  }
  bool first = true;
  for (const auto& name : names) {
    out << (first ? "" : ",") << name;
    first = false;
  }
  for (const auto& name : label_names) out << "," << name;
  out << "\n";

  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    for (Eigen::Index k = 0; k < ds.dim(); ++k) {
      if (k > 0) out << ",";
      put(ds.X(i, k));
    }
    if (ds.has_labels()) {
      if (ds.task == Task::kClassification) {
        out << "," << ds.classes[static_cast<size_t>(i)];
      } else {
        for (Eigen::Index k = 0; k < ds.targets.cols(); ++k) {
          out << ",";
          put(ds.targets(i, k));
        }
      }
    }
    out << "\n";
  }
  return out.str();
}

void SaveCsv(const LabeledDataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << FormatCsv(ds);
  if (!out) throw DataError("failed writing '" + path + "'");
}

LabeledDataset SelectRows(const LabeledDataset& ds, const std::vector<Eigen::Index>& rows) {
  LabeledDataset out;
  out.task = ds.task;
  out.domain = ds.domain;
  out.num_classes = ds.num_classes;
  out.feature_names = ds.feature_names;
  out.label_names = ds.label_names;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), ds.dim());
  const bool has_targets = ds.targets.rows() > 0;
  if (has_targets) out.targets.resize(static_cast<Eigen::Index>(rows.size()), ds.targets.cols());
  for (size_t r = 0; r < rows.size(); ++r) {
    const Eigen::Index src = rows[r];
    if (src < 0 || src >= ds.size()) throw InvalidInput("row index out of range");
    const auto dst = static_cast<Eigen::Index>(r);
    out.X.row(dst) = ds.X.row(src);
    if (has_targets) out.targets.row(dst) = ds.targets.row(src);
    if (!ds.classes.empty()) out.classes.push_back(ds.classes[static_cast<size_t>(src)]);
  }
  return out;
}

LabeledDataset Subsample(const LabeledDataset& ds, double fraction, uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidInput("fraction must lie in (0, 1]");
  const Eigen::Index n = ds.size();
  // The small epsilon keeps e.g. 0.6 * 10 from flooring to 5.
  const auto keep = static_cast<Eigen::Index>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  if (keep < 1) throw InvalidInput("fraction * N must be at least 1");
  std::vector<Eigen::Index> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  if (keep < n) {
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates: the first `keep` slots become the sample.
    for (Eigen::Index i = 0; i < keep; ++i) {
      std::uniform_int_distribution<Eigen::Index> pick(i, n - 1);
      std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(pick(rng))]);
    }
    idx.resize(static_cast<size_t>(keep));
    std::sort(idx.begin(), idx.end());
  }
  return SelectRows(ds, idx);
}

}  // namespace jdot
