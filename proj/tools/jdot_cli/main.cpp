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

// jdot: command-line front end over the libjdot C interface.
//
// Exit codes: 0 ok, 1 internal error, 2 usage / invalid argument,
// 3 data error (unreadable or malformed input, schema mismatch), 4 solver
// failure. Worker count comes from --workers, else JDOT_WORKERS, else the
// hardware concurrency.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "handles.hpp"
#include "jdot/jdot_c.h"
#include "json.hpp"

namespace jdot_cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;

// Shortest representation that reads back to the same double.
std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ParseNumber(const std::string& text, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw CliError(kExitUsage, "invalid " + what + " '" + text + "'");
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw CliError(kExitUsage, "empty entry in list '" + text + "'");
    out.push_back(item.substr(b, e - b + 1));
  }
  if (out.empty()) throw CliError(kExitUsage, "empty list");
  return out;
}

// "heuristic" or a positive number, normalized to shortest round-trip form.
std::string NormalizeAlpha(const std::string& token) {
  if (token == "heuristic") return token;
  const double v = ParseNumber(token, "alpha");
  if (!(v > 0.0)) throw CliError(kExitUsage, "alpha must be positive, got '" + token + "'");
  return FormatDouble(v);
}

std::vector<double> ParseNumberList(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& t : SplitList(text)) out.push_back(ParseNumber(t, what));
  return out;
}

int WorkerCount(int flag) {
  int n = flag;
  if (n <= 0) {
    if (const char* env = std::getenv("JDOT_WORKERS")) {
      try {
        n = std::stoi(env);
      } catch (const std::exception&) {
        throw CliError(kExitUsage, std::string("JDOT_WORKERS is not an integer: ") + env);
      }
    }
  }
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, n);
}

// Runs fn(0..n-1) on a bounded pool. fn must not throw.
void RunPool(size_t n, int workers, const std::function<void(size_t)>& fn) {
  const size_t w = std::min<size_t>(n, static_cast<size_t>(std::max(1, workers)));
  if (w <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (size_t t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(kExitData, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw CliError(kExitData, "failed writing '" + path.string() + "'");
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kExitData, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

jdot_task ParseTaskFlag(const std::string& task) {
  if (task == "classification") return JDOT_TASK_CLASSIFICATION;
  if (task == "regression") return JDOT_TASK_REGRESSION;
  throw CliError(kExitUsage, "task must be 'classification' or 'regression', got '" + task + "'");
}

const char* TaskName(jdot_task task) {
  return task == JDOT_TASK_CLASSIFICATION ? "classification" : "regression";
}

// Solver flags shared by every fitting command.
struct FitFlags {
  std::string kernel = "rbf";
  std::string bandwidth = "median";
  double lambda = 1e-2;
  std::string ot = "exact";
  int iters = 10;
  double rel_tol = 1e-5;
  bool alpha_relative = false;
  bool intercept = false;
  double within_range = -1.0;
};

void AddFitFlags(CLI::App* cmd, FitFlags* f) {
  cmd->add_option("--kernel", f->kernel, "linear | rbf")->capture_default_str();
  cmd->add_option("--bandwidth", f->bandwidth, "rbf bandwidth (number) or 'median'")
      ->capture_default_str();
  cmd->add_option("--ot", f->ot, "exact | entropic | entropic:EPS")->capture_default_str();
  cmd->add_option("--iters", f->iters, "maximum BCD iterations")->capture_default_str();
  cmd->add_option("--rel-tol", f->rel_tol, "relative objective change for convergence")
      ->capture_default_str();
  cmd->add_flag("--intercept", f->intercept, "fit an unpenalized intercept");
  cmd->add_option("--within-range", f->within_range,
                  "regression: also report the fraction of predictions within this radius");
}

// Builds the config document passed to jdot_fit.
Json BuildConfig(jdot_task task, const std::string& alpha, double lambda, const FitFlags& f,
                 std::optional<double> epsilon_override = std::nullopt) {
  Json c;
  c["task"] = TaskName(task);
  if (alpha == "heuristic") {
    c["alpha"] = "heuristic";
  } else {
    c["alpha"] = ParseNumber(alpha, "alpha");
  }
  c["alpha_relative"] = f.alpha_relative;
  c["lambda"] = lambda;
  c["max_iter"] = f.iters;
  c["rel_tol"] = f.rel_tol;
  if (f.kernel != "rbf" && f.kernel != "linear") {
    throw CliError(kExitUsage, "kernel must be 'linear' or 'rbf', got '" + f.kernel + "'");
  }
  c["kernel"] = f.kernel;
  if (f.bandwidth == "median") {
    c["bandwidth"] = "median";
  } else {
    c["bandwidth"] = ParseNumber(f.bandwidth, "bandwidth");
  }
  std::optional<double> eps = epsilon_override;
  if (!eps) {
    if (f.ot == "exact") {
      eps = 0.0;
    } else if (f.ot == "entropic") {
      eps = 1e-2;
    } else if (f.ot.rfind("entropic:", 0) == 0) {
      eps = ParseNumber(f.ot.substr(9), "entropic epsilon");
      if (!(*eps > 0.0)) throw CliError(kExitUsage, "entropic epsilon must be positive");
    } else {
      throw CliError(kExitUsage, "--ot must be 'exact', 'entropic' or 'entropic:EPS'");
    }
  }
  if (*eps > 0.0) {
    c["ot"] = "entropic";
    c["epsilon"] = *eps;
  } else {
    c["ot"] = "exact";
  }
  c["fit_intercept"] = f.intercept;
  return c;
}

Json MetricsJson(const jdot_metrics& m) {
  Json j = Json::object();
  if (m.has_accuracy) j["accuracy"] = m.accuracy;
  if (m.has_mse) j["mse"] = m.mse;
  if (m.has_within_range) j["within_range"] = m.within_range;
  return j;
}

// Headline metric for a series: accuracy for classifiers, mse otherwise.
double HeadlineMetric(const jdot_metrics& m) { return m.has_accuracy ? m.accuracy : m.mse; }

jdot_metrics EvaluateModel(const jdot_model* model, const jdot_dataset* data, double radius) {
  jdot_metrics m{};
  Check(jdot_model_evaluate(model, data, radius, &m), "evaluation failed");
  return m;
}

std::string TakeString(jdot_status status, char* raw, const std::string& context) {
  OwnedString owned(raw);
  Check(status, context);
  return owned ? std::string(owned.get()) : std::string();
}

std::string ModelJson(const jdot_model* model) {
  char* raw = nullptr;
  const jdot_status st = jdot_model_to_json(model, &raw);
  return TakeString(st, raw, "model serialization failed");
}

Json TraceJson(const jdot_result* r) {
  char* raw = nullptr;
  const jdot_status st = jdot_result_trace_jsonl(r, &raw);
  const std::string text = TakeString(st, raw, "trace serialization failed");
  Json out = Json::array();
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty()) out.push_back(Json::parse(line));
  }
  return out;
}

// Objective after the fit half-step of every iteration, in order.
std::vector<double> FitObjectives(const jdot_result* r) {
  std::vector<double> out;
  const size_t n = jdot_result_num_records(r);
  for (size_t i = 0; i < n; ++i) {
    int iteration = 0;
    int is_fit = 0;
    double obj = 0.0;
    Check(jdot_result_record(r, i, &iteration, &is_fit, &obj), "trace access failed");
    if (is_fit) out.push_back(obj);
  }
  return out;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void EmitReport(const Json& report, const std::string& path) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    WriteFile(path, text);
  }
}

// ---- toy --------------------------------------------------------------------

struct ToyFlags {
  std::string kind;
  std::string alphas;
  bool alpha_absolute = false;
  std::string lambda = "0.01";
  uint64_t seed = 7;
  int64_t n_per_class = 50;
  double rotation = kPi / 4.0;
  int64_t n = 100;
  double noise = 0.1;
  std::string out_dir = "jdot_toy";
  int workers = 0;
  FitFlags fit;
};

struct ToyRun {
  std::string alpha;
  double alpha_effective = 0.0;
  double bandwidth = 0.0;
  int iterations = 0;
  bool converged = false;
  int converged_at = 0;
  Json final_metrics;
  std::string model_json;
  Json trace;
  std::vector<double> series_metric;
  std::vector<double> series_objective;
  std::exception_ptr error;
};

int CmdToy(const ToyFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  const bool classification = flags.kind == "rotated-gaussians";
  if (!classification && flags.kind != "regression-1d") {
    throw CliError(kExitUsage, "toy kind must be 'rotated-gaussians' or 'regression-1d'");
  }
  const jdot_task task = classification ? JDOT_TASK_CLASSIFICATION : JDOT_TASK_REGRESSION;
  if (flags.fit.iters < 1) throw CliError(kExitUsage, "--iters must be >= 1");
  if (classification && flags.fit.within_range >= 0.0) {
    throw CliError(kExitUsage, "--within-range applies to regression only");
  }

  std::vector<std::string> alphas;
  const std::string alpha_list =
      flags.alphas.empty() ? (classification ? "0.1,0.5,1,10" : "heuristic") : flags.alphas;
  for (const auto& t : SplitList(alpha_list)) alphas.push_back(NormalizeAlpha(t));
  const double lambda = ParseNumber(flags.lambda, "lambda");

  jdot_dataset* s_raw = nullptr;
  jdot_dataset* t_raw = nullptr;
  if (classification) {
    if (flags.n_per_class < 1) throw CliError(kExitUsage, "--n-per-class must be >= 1");
    Check(jdot_dataset_gen_rotated_gaussians(static_cast<size_t>(flags.n_per_class), flags.rotation,
                                             flags.seed, &s_raw, &t_raw),
          "data generation failed");
  } else {
    if (flags.n < 2) throw CliError(kExitUsage, "--n must be >= 2");
    Check(jdot_dataset_gen_regression_shift(static_cast<size_t>(flags.n), flags.noise, flags.seed,
                                            &s_raw, &t_raw),
          "data generation failed");
  }
  Dataset source(s_raw);
  Dataset target(t_raw);

  const fs::path dir(flags.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError(kExitData, "cannot create '" + dir.string() + "': " + ec.message());
  Check(jdot_dataset_save_csv(source.get(), (dir / "source.csv").string().c_str()),
        "writing source.csv");
  Check(jdot_dataset_save_csv(target.get(), (dir / "target.csv").string().c_str()),
        "writing target.csv");

  double heuristic = 0.0;
  Check(jdot_heuristic_alpha(source.get(), target.get(), &heuristic), "heuristic alpha");

  FitFlags fit = flags.fit;
  fit.alpha_relative = classification && !flags.alpha_absolute;

  // Source-only baseline.
  const std::string base_cfg = BuildConfig(task, "heuristic", lambda, fit).dump();
  jdot_model* b_raw = nullptr;
  Check(jdot_fit_source_only(source.get(), target.get(), base_cfg.c_str(), &b_raw),
        "baseline fit failed");
  Model baseline(b_raw);
  const jdot_metrics base_metrics = EvaluateModel(baseline.get(), target.get(), fit.within_range);
  WriteFile(dir / "model_baseline.json", ModelJson(baseline.get()) + "\n");

  std::vector<ToyRun> runs(alphas.size());
  RunPool(alphas.size(), WorkerCount(flags.workers), [&](size_t i) {
    ToyRun& run = runs[i];
    run.alpha = alphas[i];
    try {
      Json cfg = BuildConfig(task, alphas[i], lambda, fit);
      cfg["early_stop"] = false;  // full curves
      cfg["keep_models"] = true;
      cfg["seed"] = flags.seed;
      const std::string text = cfg.dump();
      jdot_result* r_raw = nullptr;
      Check(jdot_fit(source.get(), target.get(), text.c_str(), &r_raw), "JDOT fit failed");
      Result result(r_raw);
      run.alpha_effective = jdot_result_alpha(result.get());
      run.bandwidth = jdot_result_bandwidth(result.get());
      run.iterations = jdot_result_iterations(result.get());
      run.converged = jdot_result_converged(result.get()) != 0;
      run.converged_at = jdot_result_converged_at(result.get());
      run.series_objective = FitObjectives(result.get());
      for (int k = 1; k <= run.iterations; ++k) {
        jdot_model* m_raw = nullptr;
        Check(jdot_result_model(result.get(), k, &m_raw), "model access failed");
        Model m(m_raw);
        const jdot_metrics met = EvaluateModel(m.get(), target.get(), fit.within_range);
        run.series_metric.push_back(HeadlineMetric(met));
        if (k == run.iterations) {
          run.final_metrics = MetricsJson(met);
          run.model_json = ModelJson(m.get());
        }
      }
      run.trace = TraceJson(result.get());
    } catch (...) {
      run.error = std::current_exception();
    }
  });
  for (const auto& run : runs) {
    if (run.error) std::rethrow_exception(run.error);
  }

  const char* metric_name = classification ? "accuracy" : "mse";
  std::string series = std::string("series,alpha,iteration,") + metric_name + ",objective\n";
  Json run_docs = Json::array();
  for (size_t i = 0; i < runs.size(); ++i) {
    const ToyRun& run = runs[i];
    const std::string model_file = "model_alpha_" + std::to_string(i) + ".json";
    WriteFile(dir / model_file, run.model_json + "\n");
    for (size_t k = 0; k < run.series_metric.size(); ++k) {
      series += "jdot," + run.alpha + "," + std::to_string(k + 1) + "," +
                FormatDouble(run.series_metric[k]) + "," + FormatDouble(run.series_objective[k]) +
                "\n";
    }
    Json doc;
    if (run.alpha == "heuristic") {
      doc["alpha"] = "heuristic";
    } else {
      doc["alpha"] = ParseNumber(run.alpha, "alpha");
    }
    doc["alpha_effective"] = run.alpha_effective;
    doc["bandwidth"] = run.bandwidth;
    doc["iterations"] = run.iterations;
    doc["converged"] = run.converged;
    doc["converged_at"] = run.converged_at;
    doc["metrics"] = run.final_metrics;
    doc["model"] = model_file;
    doc["trace"] = run.trace;
    run_docs.push_back(std::move(doc));
  }
  WriteFile(dir / "series.csv", series);

  Json report;
  report["command"] = "toy";
  report["kind"] = flags.kind;
  report["version"] = jdot_version();
  report["seed"] = flags.seed;
  Json params;
  if (classification) {
    params["n_per_class"] = flags.n_per_class;
    params["rotation"] = flags.rotation;
  } else {
    params["n"] = flags.n;
    params["noise"] = flags.noise;
  }
  report["generator"] = params;
  report["config"] = BuildConfig(task, "heuristic", lambda, fit);
  report["config"].erase("alpha");
  report["config"]["early_stop"] = false;
  if (fit.within_range >= 0.0) report["within_range_radius"] = fit.within_range;
  report["data"] = {{"source", "source.csv"},
                    {"target", "target.csv"},
                    {"n_source", jdot_dataset_rows(source.get())},
                    {"n_target", jdot_dataset_rows(target.get())},
                    {"dim", jdot_dataset_dim(source.get())}};
  report["heuristic_alpha"] = heuristic;
  report["baseline"] = {{"model", "model_baseline.json"}, {"metrics", MetricsJson(base_metrics)}};
  report["runs"] = std::move(run_docs);
  report["series"] = "series.csv";
  report["wall_time_seconds"] = Seconds(start);
  WriteFile(dir / "report.json", report.dump(2) + "\n");

  std::cout << "baseline " << metric_name << " " << FormatDouble(HeadlineMetric(base_metrics))
            << "\n";
  for (const auto& run : runs) {
    std::cout << "alpha " << run.alpha << " " << metric_name << " "
              << FormatDouble(run.series_metric.back()) << " converged_at " << run.converged_at
              << "\n";
  }
  std::cout << "report " << (dir / "report.json").string() << "\n";
  return kExitOk;
}

// ---- adapt ------------------------------------------------------------------

struct AdaptFlags {
  std::string source;
  std::string target;
  std::string task;
  std::string label;
  int num_classes = 0;
  std::string alpha = "heuristic";
  std::string lambda = "0.01";
  uint64_t seed = 0;
  std::string report;
  std::string model_out;
  std::string baseline_model_out;
  std::string trace_out;
  FitFlags fit;
};

bool IsDescriptor(const std::string& path) {
  return path.size() > 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

// `path` is either a CSV (schema from flags) or a JSON dataset descriptor.
Dataset LoadDataset(const std::string& path, jdot_task task, const std::string& labels,
                    int num_classes, bool labels_optional) {
  jdot_dataset* raw = nullptr;
  if (IsDescriptor(path)) {
    Check(jdot_dataset_load_descriptor(path.c_str(), num_classes, labels_optional ? 1 : 0, &raw),
          "loading '" + path + "'");
    Dataset ds(raw);
    if (jdot_dataset_task(ds.get()) != task) {
      throw CliError(kExitData, "'" + path + "' describes a " +
                                    TaskName(jdot_dataset_task(ds.get())) + " dataset, expected " +
                                    TaskName(task));
    }
    return ds;
  }
  if (labels.empty() && !labels_optional) {
    throw CliError(kExitUsage, "--label is required for CSV input '" + path + "'");
  }
  Check(jdot_dataset_load_csv(path.c_str(), task, labels.c_str(), num_classes,
                              labels_optional ? 1 : 0, &raw),
        "loading '" + path + "'");
  return Dataset(raw);
}

struct DomainData {
  Dataset source;
  Dataset target;
  jdot_task task = JDOT_TASK_REGRESSION;
};

// The task comes from --task, else from a source descriptor.
DomainData LoadDomains(const std::string& source_path, const std::string& target_path,
                       const std::string& task_flag, const std::string& labels,
                       int num_classes) {
  DomainData d;
  if (!task_flag.empty()) {
    d.task = ParseTaskFlag(task_flag);
  } else if (IsDescriptor(source_path)) {
    jdot_dataset* raw = nullptr;
    Check(jdot_dataset_load_descriptor(source_path.c_str(), num_classes, 0, &raw),
          "loading '" + source_path + "'");
    d.source.reset(raw);
    d.task = jdot_dataset_task(raw);
  } else {
    throw CliError(kExitUsage, "--task is required unless --source is a dataset descriptor");
  }
  if (!d.source) d.source = LoadDataset(source_path, d.task, labels, num_classes, false);
  const int classes = d.task == JDOT_TASK_CLASSIFICATION && num_classes == 0
                          ? jdot_dataset_num_classes(d.source.get())
                          : num_classes;
  d.target = LoadDataset(target_path, d.task, labels, classes, true);
  return d;
}

int CmdAdapt(const AdaptFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  const std::string alpha = NormalizeAlpha(flags.alpha);
  const double lambda = ParseNumber(flags.lambda, "lambda");
  DomainData domains =
      LoadDomains(flags.source, flags.target, flags.task, flags.label, flags.num_classes);
  const jdot_task task = domains.task;
  Dataset source = std::move(domains.source);
  Dataset target = std::move(domains.target);
  const Json cfg = BuildConfig(task, alpha, lambda, flags.fit);
  if (jdot_dataset_dim(source.get()) != jdot_dataset_dim(target.get())) {
    throw CliError(kExitData, "source and target have different feature counts");
  }

  Json run_cfg = cfg;
  run_cfg["seed"] = flags.seed;
  const std::string text = run_cfg.dump();
  jdot_model* b_raw = nullptr;
  Check(jdot_fit_source_only(source.get(), target.get(), text.c_str(), &b_raw),
        "baseline fit failed");
  Model baseline(b_raw);
  jdot_result* r_raw = nullptr;
  Check(jdot_fit(source.get(), target.get(), text.c_str(), &r_raw), "JDOT fit failed");
  Result result(r_raw);
  jdot_model* m_raw = nullptr;
  Check(jdot_result_model(result.get(), jdot_result_iterations(result.get()), &m_raw),
        "model access failed");
  Model model(m_raw);

  double heuristic = 0.0;
  Check(jdot_heuristic_alpha(source.get(), target.get(), &heuristic), "heuristic alpha");

  if (!flags.model_out.empty()) WriteFile(flags.model_out, ModelJson(model.get()) + "\n");
  if (!flags.baseline_model_out.empty()) {
    WriteFile(flags.baseline_model_out, ModelJson(baseline.get()) + "\n");
  }
  if (!flags.trace_out.empty()) {
    char* raw = nullptr;
    const jdot_status st = jdot_result_trace_jsonl(result.get(), &raw);
    WriteFile(flags.trace_out, TakeString(st, raw, "trace serialization failed"));
  }

  Json report;
  report["command"] = "adapt";
  report["version"] = jdot_version();
  report["seed"] = flags.seed;
  report["config"] = cfg;
  if (flags.fit.within_range >= 0.0) report["within_range_radius"] = flags.fit.within_range;
  report["data"] = {{"source", flags.source},
                    {"target", flags.target},
                    {"n_source", jdot_dataset_rows(source.get())},
                    {"n_target", jdot_dataset_rows(target.get())},
                    {"dim", jdot_dataset_dim(source.get())},
                    {"target_labeled", jdot_dataset_has_labels(target.get()) != 0}};
  report["alpha"] = jdot_result_alpha(result.get());
  report["heuristic_alpha"] = heuristic;
  report["bandwidth"] = jdot_result_bandwidth(result.get());
  report["iterations"] = jdot_result_iterations(result.get());
  report["converged"] = jdot_result_converged(result.get()) != 0;
  report["converged_at"] = jdot_result_converged_at(result.get());
  Json base_doc;
  Json jdot_doc;
  base_doc["model"] = flags.baseline_model_out.empty() ? Json() : Json(flags.baseline_model_out);
  jdot_doc["model"] = flags.model_out.empty() ? Json() : Json(flags.model_out);
  if (jdot_dataset_has_labels(target.get())) {
    base_doc["metrics"] =
        MetricsJson(EvaluateModel(baseline.get(), target.get(), flags.fit.within_range));
    jdot_doc["metrics"] =
        MetricsJson(EvaluateModel(model.get(), target.get(), flags.fit.within_range));
  } else {
    base_doc["metrics"] = nullptr;
    jdot_doc["metrics"] = nullptr;
  }
  report["baseline"] = std::move(base_doc);
  report["jdot"] = std::move(jdot_doc);
  report["trace"] = TraceJson(result.get());
  report["wall_time_seconds"] = Seconds(start);
  EmitReport(report, flags.report);
  return kExitOk;
}

// ---- sweep ------------------------------------------------------------------

struct SweepFlags {
  std::string toy;
  std::string source;
  std::string target;
  std::string task;
  std::string label;
  int num_classes = 0;
  std::string alphas = "heuristic";
  std::string lambdas = "0.01";
  std::string epsilons = "0";
  uint64_t seed = 7;
  int64_t n_per_class = 50;
  double rotation = kPi / 4.0;
  int64_t n = 100;
  double noise = 0.1;
  std::string out;
  int workers = 0;
  FitFlags fit;
};

struct Cell {
  std::string alpha;
  double lambda = 0.0;
  double epsilon = 0.0;
  std::string status = "ok";
  std::string error;
  double alpha_effective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::optional<jdot_metrics> metrics;
  double objective = 0.0;
};

std::string CsvQuote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

const char* StatusName(int exit_code) {
  switch (exit_code) {
    case kExitUsage:
      return "invalid_argument";
    case kExitData:
      return "data_error";
    case kExitSolver:
      return "solver_error";
    default:
      return "internal_error";
  }
}

int CmdSweep(const SweepFlags& flags) {
  Dataset source;
  Dataset target;
  jdot_task task = JDOT_TASK_REGRESSION;
  FitFlags fit = flags.fit;
  if (!flags.toy.empty()) {
    if (!flags.source.empty() || !flags.target.empty()) {
      throw CliError(kExitUsage, "--toy and --source/--target are exclusive");
    }
    jdot_dataset* s_raw = nullptr;
    jdot_dataset* t_raw = nullptr;
    if (flags.toy == "rotated-gaussians") {
      task = JDOT_TASK_CLASSIFICATION;
      Check(jdot_dataset_gen_rotated_gaussians(static_cast<size_t>(std::max<int64_t>(flags.n_per_class, 0)),
                                               flags.rotation, flags.seed, &s_raw, &t_raw),
            "data generation failed");
    } else if (flags.toy == "regression-1d") {
      Check(jdot_dataset_gen_regression_shift(static_cast<size_t>(std::max<int64_t>(flags.n, 0)),
                                              flags.noise, flags.seed, &s_raw, &t_raw),
            "data generation failed");
    } else {
      throw CliError(kExitUsage, "--toy must be 'rotated-gaussians' or 'regression-1d'");
    }
    source.reset(s_raw);
    target.reset(t_raw);
  } else {
    if (flags.source.empty() || flags.target.empty()) {
      throw CliError(kExitUsage, "sweep needs --toy or both --source and --target");
    }
    DomainData domains =
        LoadDomains(flags.source, flags.target, flags.task, flags.label, flags.num_classes);
    task = domains.task;
    source = std::move(domains.source);
    target = std::move(domains.target);
  }

  std::vector<Cell> cells;
  for (const auto& a : SplitList(flags.alphas)) {
    const std::string alpha = NormalizeAlpha(a);
    for (double lambda : ParseNumberList(flags.lambdas, "lambda")) {
      for (double eps : ParseNumberList(flags.epsilons, "epsilon")) {
        if (eps < 0.0) throw CliError(kExitUsage, "epsilon must be >= 0 (0 selects exact OT)");
        Cell c;
        c.alpha = alpha;
        c.lambda = lambda;
        c.epsilon = eps;
        cells.push_back(c);
      }
    }
  }
  // Validate the shared flags once so usage errors abort instead of filling rows.
  BuildConfig(task, "heuristic", 1.0, fit, 0.0);

  const bool labeled = jdot_dataset_has_labels(target.get()) != 0;
  RunPool(cells.size(), WorkerCount(flags.workers), [&](size_t i) {
    Cell& cell = cells[i];
    try {
      Json cfg = BuildConfig(task, cell.alpha, cell.lambda, fit, cell.epsilon);
      cfg["seed"] = flags.seed;
      const std::string text = cfg.dump();
      jdot_result* r_raw = nullptr;
      Check(jdot_fit(source.get(), target.get(), text.c_str(), &r_raw), "JDOT fit failed");
      Result result(r_raw);
      cell.alpha_effective = jdot_result_alpha(result.get());
      cell.iterations = jdot_result_iterations(result.get());
      cell.converged = jdot_result_converged(result.get()) != 0;
      const std::vector<double> obj = FitObjectives(result.get());
      cell.objective = obj.empty() ? 0.0 : obj.back();
      if (labeled) {
        jdot_model* m_raw = nullptr;
        Check(jdot_result_model(result.get(), cell.iterations, &m_raw), "model access failed");
        Model m(m_raw);
        cell.metrics = EvaluateModel(m.get(), target.get(), fit.within_range);
      }
    } catch (const CliError& e) {
      cell.status = StatusName(e.code());
      cell.error = e.what();
    } catch (const std::exception& e) {
      cell.status = StatusName(kExitInternal);
      cell.error = e.what();
    }
  });

  std::string csv =
      "cell,alpha,lambda,epsilon,status,alpha_effective,iterations,converged,accuracy,mse,"
      "within_range,objective,error\n";
  for (size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    const bool ok = c.status == "ok";
    auto opt = [&](bool has, double v) { return ok && has ? FormatDouble(v) : std::string(); };
    const jdot_metrics m = c.metrics.value_or(jdot_metrics{});
    csv += std::to_string(i) + "," + c.alpha + "," + FormatDouble(c.lambda) + "," +
           FormatDouble(c.epsilon) + "," + c.status + "," + opt(true, c.alpha_effective) + "," +
           (ok ? std::to_string(c.iterations) : std::string()) + "," +
           (ok ? (c.converged ? "true" : "false") : "") + "," + opt(m.has_accuracy, m.accuracy) +
           "," + opt(m.has_mse, m.mse) + "," + opt(m.has_within_range, m.within_range) + "," +
           opt(true, c.objective) + "," + CsvQuote(c.error) + "\n";
  }
  if (flags.out.empty() || flags.out == "-") {
    std::cout << csv;
  } else {
    WriteFile(flags.out, csv);
  }
  return kExitOk;
}

// ---- eval -------------------------------------------------------------------

struct EvalFlags {
  std::string model;
  std::string data;
  std::string label;
  int num_classes = 0;
  double within_range = -1.0;
};

int CmdEval(const EvalFlags& flags) {
  const std::string text = ReadFile(flags.model);
  jdot_model* raw = nullptr;
  Check(jdot_model_from_json(text.c_str(), &raw), "loading model '" + flags.model + "'");
  Model model(raw);
  const jdot_task task = jdot_model_task(model.get());
  const int classes = task == JDOT_TASK_CLASSIFICATION && flags.num_classes == 0
                          ? static_cast<int>(jdot_model_output_dim(model.get()))
                          : flags.num_classes;
  Dataset data = LoadDataset(flags.data, task, flags.label, classes, false);
  Json out;
  out["task"] = TaskName(task);
  out["rows"] = jdot_dataset_rows(data.get());
  if (flags.within_range >= 0.0) out["within_range_radius"] = flags.within_range;
  out["metrics"] = MetricsJson(EvaluateModel(model.get(), data.get(), flags.within_range));
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Joint distribution optimal transport for domain adaptation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(jdot_version()));

  ToyFlags toy;
  toy.fit.iters = 15;
  CLI::App* toy_cmd = app.add_subcommand("toy", "run a synthetic reproduction");
  toy_cmd->add_option("kind", toy.kind, "rotated-gaussians | regression-1d")->required();
  toy_cmd->add_option("--alpha", toy.alphas,
                      "comma-separated alpha values (or 'heuristic'); relative to 1/max d for "
                      "rotated-gaussians unless --alpha-absolute");
  toy_cmd->add_flag("--alpha-absolute", toy.alpha_absolute, "use alpha values as given");
  toy_cmd->add_option("--lambda", toy.lambda, "ridge weight")->capture_default_str();
  toy_cmd->add_option("--seed", toy.seed, "generator seed")->capture_default_str();
  toy_cmd->add_option("--n-per-class", toy.n_per_class, "rotated-gaussians sample size per class")
      ->capture_default_str();
  toy_cmd->add_option("--rotation", toy.rotation, "rotated-gaussians target rotation (radians)")
      ->capture_default_str();
  toy_cmd->add_option("--n", toy.n, "regression-1d sample size per domain")->capture_default_str();
  toy_cmd->add_option("--noise", toy.noise, "regression-1d noise std")->capture_default_str();
  toy_cmd->add_option("--out-dir", toy.out_dir, "output directory")->capture_default_str();
  toy_cmd->add_option("--workers", toy.workers, "worker threads");
  AddFitFlags(toy_cmd, &toy.fit);

  AdaptFlags adapt;
  CLI::App* adapt_cmd = app.add_subcommand("adapt", "adapt a model from labeled source CSV to target CSV");
  adapt_cmd->add_option("--source", adapt.source, "labeled source CSV or .json descriptor")->required();
  adapt_cmd->add_option("--target", adapt.target, "target CSV (labels optional)")->required();
  adapt_cmd->add_option("--task", adapt.task, "classification | regression (CSV input)");
  adapt_cmd->add_option("--label", adapt.label, "comma-separated label column names (CSV input)");
  adapt_cmd->add_option("--num-classes", adapt.num_classes, "0 infers from the source");
  adapt_cmd->add_option("--alpha", adapt.alpha, "number or 'heuristic'")->capture_default_str();
  adapt_cmd->add_flag("--alpha-relative", adapt.fit.alpha_relative,
                      "alpha multiplies the heuristic 1/max d");
  adapt_cmd->add_option("--lambda", adapt.lambda, "ridge weight")->capture_default_str();
  adapt_cmd->add_option("--seed", adapt.seed, "seed echoed into the config");
  adapt_cmd->add_option("--report", adapt.report, "report path (default stdout)");
  adapt_cmd->add_option("--model-out", adapt.model_out, "write the adapted predictor here");
  adapt_cmd->add_option("--baseline-model-out", adapt.baseline_model_out,
                        "write the source-only predictor here");
  adapt_cmd->add_option("--trace-out", adapt.trace_out, "write the JSON-lines trace here");
  AddFitFlags(adapt_cmd, &adapt.fit);

  SweepFlags sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid over alpha, lambda and epsilon");
  sweep_cmd->add_option("--toy", sweep.toy, "rotated-gaussians | regression-1d");
  sweep_cmd->add_option("--source", sweep.source, "labeled source CSV");
  sweep_cmd->add_option("--target", sweep.target, "target CSV");
  sweep_cmd->add_option("--task", sweep.task, "classification | regression");
  sweep_cmd->add_option("--label", sweep.label, "label column names");
  sweep_cmd->add_option("--num-classes", sweep.num_classes, "0 infers from the source");
  sweep_cmd->add_option("--alpha", sweep.alphas, "alpha grid")->capture_default_str();
  sweep_cmd->add_flag("--alpha-relative", sweep.fit.alpha_relative,
                      "alpha multiplies the heuristic 1/max d");
  sweep_cmd->add_option("--lambda", sweep.lambdas, "lambda grid")->capture_default_str();
  sweep_cmd->add_option("--epsilon", sweep.epsilons, "epsilon grid, 0 = exact OT")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sweep.seed, "seed")->capture_default_str();
  sweep_cmd->add_option("--n-per-class", sweep.n_per_class, "toy size per class");
  sweep_cmd->add_option("--rotation", sweep.rotation, "toy rotation (radians)");
  sweep_cmd->add_option("--n", sweep.n, "toy regression size");
  sweep_cmd->add_option("--noise", sweep.noise, "toy regression noise");
  sweep_cmd->add_option("--out", sweep.out, "CSV path (default stdout)");
  sweep_cmd->add_option("--workers", sweep.workers, "worker threads");
  AddFitFlags(sweep_cmd, &sweep.fit);

  EvalFlags eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a serialized predictor on a CSV");
  eval_cmd->add_option("--model", eval.model, "predictor JSON")->required();
  eval_cmd->add_option("--data", eval.data, "labeled CSV or .json descriptor")->required();
  eval_cmd->add_option("--label", eval.label, "label column names (CSV input)");
  eval_cmd->add_option("--num-classes", eval.num_classes, "0 uses the model's class count");
  eval_cmd->add_option("--within-range", eval.within_range, "regression within-range radius");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*toy_cmd) return CmdToy(toy);
    if (*adapt_cmd) return CmdAdapt(adapt);
    if (*sweep_cmd) return CmdSweep(sweep);
    if (*eval_cmd) return CmdEval(eval);
  } catch (const CliError& e) {
    std::cerr << "jdot: " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "jdot: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace jdot_cli

int main(int argc, char** argv) { return jdot_cli::Main(argc, argv); }
