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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jdot/jdot.hpp"
#include "oracles.hpp"

namespace {

using namespace jdot;
using Clock = std::chrono::steady_clock;

double Since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

// Every plan produced anywhere in this run is checked against its marginals.
struct FeasibilityLog {
  int exact = 0;
  int entropic = 0;
  double worst_exact = 0.0;
  double worst_entropic_row = 0.0;  // relative to the declared tol
  double worst_entropic_col = 0.0;
  int bad = 0;

  void Exact(const TransportPlan& p) {
    const MarginalError e = MarginalViolation(p);
    const double v = std::max(e.row_err, e.col_err);
    worst_exact = std::max(worst_exact, v);
    if (v > 1e-9 || p.coupling.minCoeff() < 0.0) ++bad;
    ++exact;
  }
  void Entropic(const TransportPlan& p, double tol) {
    const MarginalError e = MarginalViolation(p);
    worst_entropic_row = std::max(worst_entropic_row, e.row_err / tol);
    worst_entropic_col = std::max(worst_entropic_col, e.col_err);
    if (!p.converged || e.row_err > tol || e.col_err > 1e-9 || p.coupling.minCoeff() < 0.0) ++bad;
    ++entropic;
  }
  void Trace(const JdotTrace& t, const JdotConfig& cfg) {
    if (cfg.ot == OtSolver::kExact) {
      Exact(t.final_plan);
      for (const auto& r : t.records) {
        if (r.marginal_violation > 1e-9) ++bad;
      }
    } else {
      Entropic(t.final_plan, cfg.entropic.tol);
    }
  }
};

FeasibilityLog g_feasible;

Outcome Criterion1() {
  std::mt19937_64 rng(1001);
  const auto start = Clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    const Matrix c = oracle::RandomMatrix(rng, n, n);
    const TransportPlan p = SolveExact(CostMatrix(c));
    g_feasible.Exact(p);
    worst = std::max(worst, std::fabs(p.objective - oracle::PermutationMinimum(c)));
  }
  const double secs = Since(start);
  return {worst <= 1e-9 && secs < 5.0,
          "200 instances, max |exact - brute force| = " + Fmt("%.3g", worst) + ", " +
              Fmt("%.3f", secs) + " s"};
}

Outcome Criterion3() {
  const Matrix c = (Matrix(2, 2) << 1.0, 0.0, 0.0, 1.0).finished();
  const TransportPlan exact = SolveExact(CostMatrix(c));
  EntropicOptions opts;
  opts.epsilon = 1e-3;
  const TransportPlan ent = SolveEntropic(CostMatrix(c), opts);
  g_feasible.Exact(exact);
  g_feasible.Entropic(ent, opts.tol);
  const bool ok = std::fabs(ent.objective) <= 1e-2 && ent.objective >= exact.objective;
  return {ok, "entropic objective " + Fmt("%.3g", ent.objective) + ", exact " +
                  Fmt("%.3g", exact.objective)};
}

Outcome Criterion4() {
  std::mt19937_64 rng(1004);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int nt = 5 + trial % 30;
    const int ns = 3 + (trial * 7) % 25;
    const Matrix xt = oracle::RandomMatrix(rng, nt, 2, -3, 3);
    const Matrix ys = oracle::RandomMatrix(rng, ns, 1 + trial % 2, -2, 2);
    const TransportPlan plan = SolveExact(CostMatrix(oracle::RandomMatrix(rng, ns, nt)));
    g_feasible.Exact(plan);
    const Matrix yhat = TransportedTargets(plan.coupling, ys);
    const double lambda = std::pow(10.0, -4.0 + (trial % 5));
    const double bw = 0.1 + 0.2 * (trial % 7);
    Kernel k;
    k.bandwidth = bw;
    const Predictor m = FitKrrWeighted(xt, yhat, k, lambda);
    Matrix sys = oracle::NaiveRbf(xt, xt, bw);
    sys.diagonal().array() += nt * lambda;
    worst = std::max(worst, (sys * m.coefficients - yhat).norm() / yhat.norm());
  }
  return {worst <= 1e-8, "100 fits, max relative residual " + Fmt("%.3g", worst)};
}

Outcome Criterion5() {
  std::mt19937_64 rng(1005);
  const double h = 1e-5;
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const int n = 8 + inst;
    const Matrix x = oracle::RandomMatrix(rng, n, 2, -2, 2);
    const double bw = 0.3 + 0.05 * inst;
    const Matrix k = oracle::NaiveRbf(x, x, bw);
    const Vector p = oracle::RandomMatrix(rng, n, 1).col(0);
    const Vector a = oracle::RandomMatrix(rng, n, 1, -2, 2).col(0);
    const double b = 0.15 * inst - 1.5;
    const double lambda = std::pow(10.0, -3.0 + inst % 3);
    const HingeComponentEval e = EvalHingeComponent(k, p, a, b, lambda);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int c = 0; c < 20; ++c) {
      const int i = pick(rng);
      Vector ap = a, am = a;
      ap(i) += h;
      am(i) -= h;
      const double fd = (oracle::NaiveHingeComponent(k, p, ap, b, lambda) -
                         oracle::NaiveHingeComponent(k, p, am, b, lambda)) /
                        (2 * h);
      const double scale = std::max({std::fabs(fd), std::fabs(e.gradient(i)), 1e-300});
      worst = std::max(worst, std::fabs(fd - e.gradient(i)) / scale);
    }
  }
  return {worst <= 1e-5, "400 coordinates, max relative deviation " + Fmt("%.3g", worst)};
}

Outcome Criterion6() {
  double worst = -1e300;
  int records = 0;
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    const DomainPair d = GenRegressionShift(40, seed);
    JdotConfig cfg;
    cfg.task = Task::kRegression;
    cfg.max_iter = 10;
    cfg.early_stop = false;
    const JdotTrace t = JdotFit(d.source, d.target.X, cfg);
    g_feasible.Trace(t, cfg);
    for (size_t r = 1; r < t.records.size(); ++r) {
      const double prev = t.records[r - 1].objective;
      worst = std::max(worst, (t.records[r].objective - prev) / (1e-8 * (1.0 + std::fabs(prev))));
      ++records;
    }
  }
  return {worst <= 1.0, std::to_string(records) + " half-steps, worst increase " +
                            Fmt("%.3g", worst) + " x 1e-8(1+|obj|)"};
}

struct ToyRun {
  double accuracy = 0.0;
  int converged_at = 0;
};

Outcome Criterion7() {
  const auto start = Clock::now();
  const std::vector<double> alphas = {0.1, 0.5, 1.0, 10.0};
  std::vector<std::vector<ToyRun>> runs(alphas.size());
  std::vector<double> baseline;
  bool margin_ok = true;
  bool conv_ok = true;
  double min_margin = 1e300;
  int max_conv = 0;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const DomainPair d = GenRotatedGaussians(50, std::numbers::pi / 4.0, seed);
    JdotConfig cfg;
    cfg.task = Task::kClassification;
    cfg.alpha_relative = true;
    cfg.max_iter = 15;
    cfg.early_stop = false;
    const Predictor base = FitSourceOnly(d.source, ResolveKernel(cfg, d.target.X), cfg);
    baseline.push_back(*Evaluate(base, d.target).accuracy);
    for (size_t a = 0; a < alphas.size(); ++a) {
      cfg.alpha = alphas[a];
      const JdotTrace t = JdotFit(d.source, d.target.X, cfg);
      g_feasible.Trace(t, cfg);
      ToyRun r{*Evaluate(t.final_model, d.target).accuracy, t.converged_at};
      runs[a].push_back(r);
      if (alphas[a] != 0.1) {
        min_margin = std::min(min_margin, r.accuracy - baseline.back());
        margin_ok = margin_ok && r.accuracy - baseline.back() >= 0.10;
      }
      conv_ok = conv_ok && r.converged_at >= 1 && r.converged_at <= 15;
      max_conv = std::max(max_conv, r.converged_at == 0 ? 99 : r.converged_at);
    }
  }
  auto mean = [](const std::vector<ToyRun>& v) {
    double s = 0.0;
    for (const auto& r : v) s += r.accuracy;
    return s / static_cast<double>(v.size());
  };
  const double m01 = mean(runs[0]);
  bool dominance = true;
  std::string means;
  for (size_t a = 1; a < alphas.size(); ++a) {
    dominance = dominance && mean(runs[a]) >= m01;
    means += Fmt(" %.4g", mean(runs[a]));
  }
  const double secs = Since(start);
  std::string detail = "(a) min gain over baseline " + Fmt("%.3f", min_margin) +
                       "; (b) mean acc alpha=0.1 " + Fmt("%.4g", m01) + " vs 0.5/1/10" + means +
                       "; (c) slowest convergence at iteration " + std::to_string(max_conv) +
                       "; " + Fmt("%.2f", secs) + " s";
  return {margin_ok && dominance && conv_ok && secs < 30.0, detail};
}

Outcome Criterion8() {
  int wins = 0;
  std::string detail;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const DomainPair d = GenRegressionShift(100, seed);
    JdotConfig cfg;
    cfg.task = Task::kRegression;
    cfg.max_iter = 15;
    cfg.early_stop = false;
    const JdotTrace t = JdotFit(d.source, d.target.X, cfg);
    g_feasible.Trace(t, cfg);
    const Predictor base = FitSourceOnly(d.source, t.kernel, cfg);
    const double mj = *Evaluate(t.final_model, d.target).mse;
    const double mb = *Evaluate(base, d.target).mse;
    wins += mj < mb;
    detail += Fmt(" %.3g", mj) + Fmt("<%.3g", mb);
  }
  return {wins == 5, std::to_string(wins) + "/5 seeds, jdot<baseline mse:" + detail};
}

Outcome Criterion9() {
  double worst = 0.0;
  int checked = 0;
  auto check = [&](const LabeledDataset& s, const LabeledDataset& t, Task task) {
    JdotConfig cfg;
    cfg.task = task;
    cfg.max_iter = 1;
    const double got = JdotFit(s, t.X, cfg).alpha;
    const double ref = oracle::NaiveHeuristicAlpha(s.X, t.X);
    worst = std::max(worst, std::fabs(got - ref) / ref);
    ++checked;
  };
  for (uint64_t seed = 1; seed <= 7; ++seed) {
    const DomainPair g = GenRotatedGaussians(50, std::numbers::pi / 4.0, seed);
    check(g.source, g.target, Task::kClassification);
    const DomainPair r = GenRegressionShift(100, seed);
    check(r.source, r.target, Task::kRegression);
  }
  return {worst <= 1e-12, std::to_string(checked) + " toy datasets, max relative deviation " +
                              Fmt("%.3g", worst)};
}

int Exec(const std::string& args) {
  const std::string cmd = std::string(JDOT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// The report with its single timing line removed.
std::string ReportWithoutTiming(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.find("\"wall_time_seconds\"") == std::string::npos) out += line + "\n";
  }
  return out;
}

Outcome Criterion10() {
  namespace fs = std::filesystem;
  const fs::path base = "acceptance_out";
  fs::remove_all(base);
  bool same = true;
  std::string detail;
  for (const char* kind : {"rotated-gaussians", "regression-1d"}) {
    const fs::path a = base / (std::string(kind) + "_a");
    const fs::path b = base / (std::string(kind) + "_b");
    const std::string args = std::string("toy ") + kind + " --seed 7 --iters 15 --out-dir ";
    if (Exec(args + a.string()) != 0 || Exec(args + b.string()) != 0) {
      return {false, std::string("jdot toy ") + kind + " failed"};
    }
    const std::string ra = ReportWithoutTiming(a / "report.json");
    const std::string rb = ReportWithoutTiming(b / "report.json");
    const bool eq = !ra.empty() && ra == rb;
    same = same && eq;
    detail += std::string(kind) + (eq ? " identical (" : " differ (") + std::to_string(ra.size()) +
              " bytes); ";
  }
  return {same, detail};
}

Outcome Criterion2() {
  // Extra entropic instances on top of the plans collected by the other criteria.
  std::mt19937_64 rng(1002);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix c = oracle::RandomMatrix(rng, 3 + trial % 9, 2 + trial % 7);
    for (double eps : {0.05, 0.2, 1.0}) {
      EntropicOptions opts;
      opts.epsilon = eps;
      g_feasible.Entropic(SolveEntropic(CostMatrix(c), opts), opts.tol);
    }
    g_feasible.Exact(SolveExact(CostMatrix(c)));
  }
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    const DomainPair d = GenRegressionShift(40, seed);
    JdotConfig cfg;
    cfg.ot = OtSolver::kEntropic;
    cfg.entropic.epsilon = 0.05;
    cfg.max_iter = 3;
    g_feasible.Trace(JdotFit(d.source, d.target.X, cfg), cfg);
  }
  return {g_feasible.bad == 0,
          std::to_string(g_feasible.exact) + " exact plans (worst " +
              Fmt("%.3g", g_feasible.worst_exact) + "), " + std::to_string(g_feasible.entropic) +
              " entropic plans (worst row/tol " + Fmt("%.3g", g_feasible.worst_entropic_row) +
              ", col " + Fmt("%.3g", g_feasible.worst_entropic_col) + "), " +
              std::to_string(g_feasible.bad) + " violations"};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    std::function<Outcome()> run;
  };
  // Criterion 2 runs last so it sees every plan produced by the others.
  const std::vector<Entry> order = {{1, Criterion1}, {3, Criterion3}, {4, Criterion4},
                                    {5, Criterion5}, {6, Criterion6}, {7, Criterion7},
                                    {8, Criterion8}, {9, Criterion9}, {10, Criterion10},
                                    {2, Criterion2}};
  std::vector<Outcome> results(11);
  for (const auto& e : order) {
    try {
      results[e.id] = e.run();
    } catch (const std::exception& ex) {
      results[e.id] = {false, std::string("exception: ") + ex.what()};
    }
  }
  int failed = 0;
  for (int id = 1; id <= 10; ++id) {
    std::cout << "criterion " << id << ": " << (results[id].pass ? "PASS" : "FAIL") << "  "
              << results[id].detail << "\n";
    failed += results[id].pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << "\n";
  return failed == 0 ? 0 : 1;
}
