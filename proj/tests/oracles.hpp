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

// Slow reference implementations used as test oracles. Nothing here calls
// into the library's numerical code.

#ifndef JDOT_TESTS_ORACLES_HPP_
#define JDOT_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "jdot/types.hpp"

namespace jdot::oracle {

// min over permutations s of (1/N) sum_i C(i, s(i)); square uniform problems.
inline double PermutationMinimum(const Matrix& c) {
  const int n = static_cast<int>(c.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += c(i, perm[i]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / n;
}

// Rectangular uniform problems: duplicate source i lcm/N_s times and target
// j lcm/N_t times; by Birkhoff the optimum is an assignment on the copies.
// Solved by a subset DP, O(L 2^L).
inline double DuplicatedAssignmentMinimum(const Matrix& c) {
  const int ns = static_cast<int>(c.rows());
  const int nt = static_cast<int>(c.cols());
  const int l = std::lcm(ns, nt);
  const int rs = l / ns;
  const int rt = l / nt;
  const size_t states = size_t{1} << l;
  std::vector<double> dp(states, std::numeric_limits<double>::infinity());
  dp[0] = 0.0;
  for (size_t mask = 0; mask < states; ++mask) {
    if (!std::isfinite(dp[mask])) continue;
    const int row = __builtin_popcountll(mask);
    if (row == l) continue;
    const int i = row / rs;
    for (int col = 0; col < l; ++col) {
      if (mask & (size_t{1} << col)) continue;
      const size_t next = mask | (size_t{1} << col);
      dp[next] = std::min(dp[next], dp[mask] + c(i, col / rt));
    }
  }
  return dp[states - 1] / l;
}

inline Matrix NaiveSqDist(const Matrix& a, const Matrix& b) {
  Matrix d(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) {
        const double t = a(i, k) - b(j, k);
        s += t * t;
      }
      d(i, j) = s;
    }
  }
  return d;
}

inline double NaiveHeuristicAlpha(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) s += (a(i, k) - b(j, k)) * (a(i, k) - b(j, k));
      m = std::max(m, s);
    }
  }
  return 1.0 / m;
}

inline Matrix NaiveRbf(const Matrix& a, const Matrix& b, double bw) {
  Matrix k = NaiveSqDist(a, b);
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) k(i, j) = std::exp(-bw * k(i, j));
  }
  return k;
}

inline double Sq(double v) { return v * v; }
inline double Hinge2(double y, double f) { return Sq(std::max(0.0, 1.0 - y * f)); }

// One-vs-all squared hinge objective of one class, written out term by term.
inline double NaiveHingeComponent(const Matrix& k, const Vector& p, const Vector& a, double b,
                                  double lambda) {
  const Eigen::Index n = k.rows();
  double loss = 0.0;
  double reg = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double f = b;
    for (Eigen::Index l = 0; l < n; ++l) f += k(j, l) * a(l);
    loss += p(j) * Hinge2(1.0, f) + (1.0 - p(j)) * Hinge2(-1.0, f);
    for (Eigen::Index l = 0; l < n; ++l) reg += a(j) * k(j, l) * a(l);
  }
  return loss / static_cast<double>(n) + lambda * reg;
}

inline Matrix RandomMatrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double lo = 0.0,
                           double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = u(rng);
  }
  return m;
}

}  // namespace jdot::oracle

#endif  // JDOT_TESTS_ORACLES_HPP_
