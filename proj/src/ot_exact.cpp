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

// Primal network simplex for the uniform-marginal transportation problem.
//
// Supplies are scaled to integers (every source ships N_t units, every
// target receives N_s units) so that flows are exact int64 values and the
// returned coupling is flow / (N_s * N_t). The spanning tree is rooted at an
// artificial node connected to every real node and is kept strongly
// feasible (Cunningham's leaving-arc rule), which rules out cycling on
// degenerate pivots. Entering arcs are chosen by block search starting from
// a fixed arc index.
//
// The tree is rebuilt by a DFS after each pivot instead of maintaining
// LEMON-style thread lists; this costs O(nodes) per pivot, which is small
// next to the pricing pass for the dense bipartite graphs seen here.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "jdot/ot.hpp"

namespace jdot {
namespace {

using Flow = int64_t;
using NodeId = int64_t;
using ArcId = int64_t;

constexpr int8_t kStateTree = 0;
constexpr int8_t kStateLower = 1;
constexpr Flow kInfFlow = std::numeric_limits<Flow>::max();

class TransportationSimplex {
 public:
  explicit TransportationSimplex(const CostMatrix& cost)
      : cost_(cost),
        n_source_(cost.n_source()),
        n_target_(cost.n_target()),
        n_nodes_(n_source_ + n_target_),
        root_(n_nodes_),
        n_arcs_(n_source_ * n_target_) {}

  Matrix Solve() {
    Init();
    InitialPivots();
    const int64_t max_pivots = 50 * n_arcs_ + 100000;
    int64_t pivots = 0;
    while (FindEnteringArc()) {
      if (++pivots > max_pivots) {
        throw SolverError("network simplex exceeded " + std::to_string(max_pivots) + " pivots");
      }
      Pivot();
    }
    for (NodeId u = 0; u < n_nodes_; ++u) {
      if (flow_[n_arcs_ + u] != 0) {
        throw SolverError("network simplex ended with flow on an artificial arc");
      }
    }
    const double scale = 1.0 / (static_cast<double>(n_source_) * static_cast<double>(n_target_));
    Matrix coupling(n_source_, n_target_);
    for (NodeId i = 0; i < n_source_; ++i) {
      for (NodeId j = 0; j < n_target_; ++j) {
        coupling(i, j) = static_cast<double>(flow_[i * n_target_ + j]) * scale;
      }
    }
    return coupling;
  }

 private:
  NodeId Source(ArcId e) const {
    if (e < n_arcs_) return e / n_target_;
    const NodeId u = e - n_arcs_;
    return u < n_source_ ? u : root_;
  }
  NodeId Target(ArcId e) const {
    if (e < n_arcs_) return n_source_ + e % n_target_;
    const NodeId u = e - n_arcs_;
    return u < n_source_ ? root_ : u;
  }
  double Cost(ArcId e) const {
    if (e < n_arcs_) return cost_(e / n_target_, e % n_target_);
    return e - n_arcs_ < n_source_ ? 0.0 : artificial_cost_;
  }
  double ReducedCost(ArcId e) const { return Cost(e) + pi_[Source(e)] - pi_[Target(e)]; }

  void Init() {
    const ArcId all_arcs = n_arcs_ + n_nodes_;
    flow_.assign(all_arcs, 0);
    state_.assign(all_arcs, kStateLower);
    tree_arcs_.resize(n_nodes_);
    slot_of_node_arc_.assign(all_arcs, -1);

    const double max_cost = cost_.values().maxCoeff();
    artificial_cost_ = (max_cost + 1.0) * static_cast<double>(n_nodes_);

    for (NodeId u = 0; u < n_nodes_; ++u) {
      const ArcId e = n_arcs_ + u;
      state_[e] = kStateTree;
      flow_[e] = u < n_source_ ? n_target_ : n_source_;
      tree_arcs_[u] = e;
      slot_of_node_arc_[e] = u;
    }
    block_size_ = std::max<ArcId>(static_cast<ArcId>(std::sqrt(static_cast<double>(n_arcs_))), 10);
    next_arc_ = 0;
    RebuildTree();
  }

  // One pivot per target on its cheapest incoming arc, in target order.
  void InitialPivots() {
    for (NodeId j = 0; j < n_target_; ++j) {
      ArcId best = -1;
      double best_cost = std::numeric_limits<double>::infinity();
      for (NodeId i = 0; i < n_source_; ++i) {
        const double c = cost_(i, j);
        if (c < best_cost) {
          best_cost = c;
          best = i * n_target_ + j;
        }
      }
      if (best < 0 || state_[best] != kStateLower) continue;
      if (ReducedCost(best) >= 0.0) continue;
      in_arc_ = best;
      Pivot();
    }
  }

  double Tolerance(ArcId e) const {
    const double scale = std::max({std::fabs(pi_[Source(e)]), std::fabs(pi_[Target(e)]),
                                   std::fabs(Cost(e))});
    return 1e-13 * std::max(scale, 1.0);
  }

  bool FindEnteringArc() {
    double best = 0.0;
    ArcId best_arc = -1;
    ArcId e = next_arc_;
    ArcId count = block_size_;
    for (ArcId scanned = 0; scanned < n_arcs_; ++scanned, ++e) {
      if (e == n_arcs_) e = 0;
      if (state_[e] == kStateLower) {
        const double rc = ReducedCost(e);
        if (rc < best) {
          best = rc;
          best_arc = e;
        }
      }
      if (--count == 0) {
        if (best_arc >= 0 && best < -Tolerance(best_arc)) {
          in_arc_ = best_arc;
          next_arc_ = e;
          return true;
        }
        count = block_size_;
      }
    }
    if (best_arc >= 0 && best < -Tolerance(best_arc)) {
      in_arc_ = best_arc;
      next_arc_ = e == n_arcs_ ? 0 : e;
      return true;
    }
    return false;
  }

  void Pivot() {
    const NodeId src = Source(in_arc_);
    const NodeId tgt = Target(in_arc_);

    NodeId u = src;
    NodeId v = tgt;
    while (u != v) {
      if (depth_[u] >= depth_[v]) {
        u = parent_[u];
      } else {
        v = parent_[v];
      }
    }
    const NodeId join = u;

    // The entering arc is always at its lower bound (zero flow, unbounded
    // capacity), so flow is pushed from src towards tgt around the cycle.
    Flow delta = kInfFlow;
    NodeId u_out = -1;
    for (NodeId w = src; w != join; w = parent_[w]) {
      const Flow d = forward_[w] ? flow_[pred_[w]] : kInfFlow;
      if (d < delta) {
        delta = d;
        u_out = w;
      }
    }
    for (NodeId w = tgt; w != join; w = parent_[w]) {
      const Flow d = forward_[w] ? kInfFlow : flow_[pred_[w]];
      if (d <= delta) {
        delta = d;
        u_out = w;
      }
    }
    if (u_out < 0 || delta == kInfFlow) {
      throw SolverError("network simplex found an unbounded cycle");
    }

    if (delta > 0) {
      flow_[in_arc_] += delta;
      for (NodeId w = src; w != join; w = parent_[w]) {
        flow_[pred_[w]] += forward_[w] ? -delta : delta;
      }
      for (NodeId w = tgt; w != join; w = parent_[w]) {
        flow_[pred_[w]] += forward_[w] ? delta : -delta;
      }
    }

    const ArcId out_arc = pred_[u_out];
    state_[in_arc_] = kStateTree;
    state_[out_arc] = kStateLower;
    const int64_t slot = slot_of_node_arc_[out_arc];
    slot_of_node_arc_[out_arc] = -1;
    tree_arcs_[slot] = in_arc_;
    slot_of_node_arc_[in_arc_] = slot;
    RebuildTree();
  }

  // Recomputes parent pointers, depths and node potentials from the current
  // set of tree arcs with a DFS from the root.
  void RebuildTree() {
    const NodeId total = n_nodes_ + 1;
    offsets_.assign(total + 1, 0);
    for (ArcId e : tree_arcs_) {
      ++offsets_[Source(e) + 1];
      ++offsets_[Target(e) + 1];
    }
    for (NodeId k = 0; k < total; ++k) offsets_[k + 1] += offsets_[k];
    adjacency_.resize(2 * tree_arcs_.size());
    fill_.assign(offsets_.begin(), offsets_.end() - 1);
    for (ArcId e : tree_arcs_) {
      adjacency_[fill_[Source(e)]++] = e;
      adjacency_[fill_[Target(e)]++] = e;
    }

    parent_.assign(total, -1);
    pred_.assign(total, -1);
    forward_.assign(total, false);
    depth_.assign(total, 0);
    pi_.assign(total, 0.0);
    stack_.clear();
    stack_.push_back(root_);
    while (!stack_.empty()) {
      const NodeId p = stack_.back();
      stack_.pop_back();
      for (int64_t k = offsets_[p]; k < offsets_[p + 1]; ++k) {
        const ArcId e = adjacency_[k];
        if (e == pred_[p]) continue;
        const bool fwd = Target(e) == p;  // arc points child -> parent
        const NodeId child = fwd ? Source(e) : Target(e);
        parent_[child] = p;
        pred_[child] = e;
        forward_[child] = fwd;
        depth_[child] = depth_[p] + 1;
        pi_[child] = fwd ? pi_[p] - Cost(e) : pi_[p] + Cost(e);
        stack_.push_back(child);
      }
    }
  }

  const CostMatrix& cost_;
  const NodeId n_source_;
  const NodeId n_target_;
  const NodeId n_nodes_;
  const NodeId root_;
  const ArcId n_arcs_;

  double artificial_cost_ = 0.0;
  std::vector<Flow> flow_;
  std::vector<int8_t> state_;
  std::vector<ArcId> tree_arcs_;
  std::vector<int64_t> slot_of_node_arc_;

  std::vector<NodeId> parent_;
  std::vector<ArcId> pred_;
  std::vector<bool> forward_;
  std::vector<int64_t> depth_;
  std::vector<double> pi_;

  std::vector<int64_t> offsets_;
  std::vector<int64_t> fill_;
  std::vector<ArcId> adjacency_;
  std::vector<NodeId> stack_;

  ArcId block_size_ = 10;
  ArcId next_arc_ = 0;
  ArcId in_arc_ = -1;
};

}  // namespace

TransportPlan SolveExact(const CostMatrix& cost) {
  TransportationSimplex simplex(cost);
  TransportPlan plan;
  plan.coupling = simplex.Solve();
  plan.objective = plan.coupling.cwiseProduct(cost.values()).sum();
  plan.converged = true;
  const MarginalError err = MarginalViolation(plan.coupling);
  plan.marginal_violation = std::max(err.row_err, err.col_err);
  return plan;
}

}  // namespace jdot
