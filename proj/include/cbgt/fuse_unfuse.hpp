// Copyright 2026 The Authors.
//
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

#pragma once

#include <algorithm>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cbgt/errors.hpp"
#include "cbgt/instance.hpp"
#include "cbgt/rational.hpp"
#include "cbgt/set_system.hpp"
#include "cbgt/stream.hpp"

namespace cbgt {

struct FusionNode {
  ElementId leaf = -1;  // >= 0 for leaves
  int left = -1;
  int right = -1;
  Rational rate;
  int depth = 0;  // height of the subtree
};

/// Binary fusion trees with their playback bits.
class FusionForest {
 public:
  FusionForest() = default;
  FusionForest(std::vector<FusionNode> nodes, std::vector<int> roots)
      : nodes_(std::move(nodes)), roots_(std::move(roots)), sigma_(nodes_.size(), 0) {}

  const std::vector<FusionNode>& nodes() const { return nodes_; }
  const std::vector<int>& roots() const { return roots_; }
  const FusionNode& node(int i) const { return nodes_[i]; }

  int max_depth() const {
    int d = 0;
    for (int r : roots_) d = std::max(d, nodes_[r].depth);
    return d;
  }

  /// One leaf per tree: walk down flipping each bit, left on 0, right on 1.
  ElementSet step() {
    ElementSet cut;
    for (int r : roots_) {
      int v = r;
      while (nodes_[v].leaf < 0) {
        sigma_[v] ^= 1;
        v = sigma_[v] == 0 ? nodes_[v].left : nodes_[v].right;
      }
      cut.push_back(nodes_[v].leaf);
    }
    return make_set(std::move(cut));
  }

  void reset() { std::fill(sigma_.begin(), sigma_.end(), 0); }

  /// Parenthesized tree shapes using the given labels, e.g. "(e,(a,b))".
  std::string describe(int v, const std::vector<std::string>& labels) const {
    const auto& x = nodes_[v];
    if (x.leaf >= 0) return labels[x.leaf];
    return "(" + describe(x.left, labels) + "," + describe(x.right, labels) + ")";
  }

 private:
  std::vector<FusionNode> nodes_;
  std::vector<int> roots_;
  std::vector<char> sigma_;
};

/// Repeatedly fuses the two slowest trees until k remain. Heap order is
/// (rate, sequence) where a leaf's sequence is its element id and fused trees
/// are numbered after all elements in creation order. The first tree taken
/// off the heap becomes the left child. Zero-rate elements are ignored and k
/// is clamped to the number of remaining elements.
inline FusionForest build_forest(const std::vector<Rational>& growth, const ElementSet& elements, int k) {
  std::vector<FusionNode> nodes;
  using Key = std::tuple<Rational, std::size_t, int>;  // rate, sequence, node
  std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
  for (ElementId e : elements) {
    if (growth[e] == 0) continue;
    if (growth[e] < 0) throw DomainError("build_forest: negative rate");
    nodes.push_back({e, -1, -1, growth[e], 0});
    heap.emplace(growth[e], static_cast<std::size_t>(e), static_cast<int>(nodes.size()) - 1);
  }
  if (nodes.empty()) return {};
  if (k < 1) throw DomainError("build_forest: k must be positive");
  std::size_t target = std::min<std::size_t>(static_cast<std::size_t>(k), nodes.size());
  std::size_t seq = growth.size();
  while (heap.size() > target) {
    auto [lr, ls, l] = heap.top();
    heap.pop();
    auto [rr, rs, r] = heap.top();
    heap.pop();
    Rational rate = 2 * std::max(lr, rr);
    nodes.push_back({-1, l, r, rate, 1 + std::max(nodes[l].depth, nodes[r].depth)});
    heap.emplace(rate, seq++, static_cast<int>(nodes.size()) - 1);
  }
  std::vector<std::pair<std::size_t, int>> roots;
  while (!heap.empty()) {
    roots.emplace_back(std::get<1>(heap.top()), std::get<2>(heap.top()));
    heap.pop();
  }
  std::sort(roots.begin(), roots.end());
  std::vector<int> root_ids;
  for (auto& [s, v] : roots) root_ids.push_back(v);
  return FusionForest(std::move(nodes), std::move(root_ids));
}

/// A group of elements scheduled by its own forest, `cap` leaves per day.
struct FunGroup {
  ElementSet elements;
  int cap = 1;
};

/// Fuse-Unfuse over disjoint groups; the daily cut is the union of one
/// forest step per group. Trees must have rate below `rate_limit` (2 for a
/// valid uniform or partition instance).
class FunStream final : public ScheduleStream {
 public:
  FunStream(const std::vector<Rational>& growth, const std::vector<FunGroup>& groups, const Rational& rate_limit) {
    for (const auto& grp : groups) {
      auto f = build_forest(growth, grp.elements, grp.cap);
      for (int r : f.roots()) {
        if (f.node(r).rate >= rate_limit) {
          throw InstanceError("fuse-unfuse: a tree reached rate " + to_string(f.node(r).rate) + " (limit " +
                              to_string(rate_limit) + "); growth exceeds the rank");
        }
      }
      if (!f.roots().empty()) forests_.push_back(std::move(f));
    }
  }

  ElementSet next() override {
    ElementSet cut;
    for (auto& f : forests_) cut = set_union(cut, f.step());
    return cut;
  }

  const std::vector<FusionForest>& forests() const { return forests_; }

  /// The stream is periodic with period 2^(deepest tree).
  int period_log2() const {
    int d = 0;
    for (const auto& f : forests_) d = std::max(d, f.max_depth());
    return d;
  }

  /// One full period from the initial state, as a periodic schedule.
  Schedule one_period(int max_log2 = 22) {
    int d = period_log2();
    if (d > max_log2) throw BudgetError("fuse-unfuse: period 2^" + std::to_string(d) + " too long to materialize");
    for (auto& f : forests_) f.reset();
    Schedule s = take(*this, std::size_t{1} << d);
    s.periodic = true;
    for (auto& f : forests_) f.reset();
    return s;
  }

 private:
  std::vector<FusionForest> forests_;
};

/// Groups for a uniform or partition instance.
inline std::vector<FunGroup> fun_groups(const SetSystem& sys) {
  std::vector<FunGroup> groups;
  if (const auto* u = sys.as<UniformSystem>()) {
    FunGroup g;
    for (std::size_t e = 0; e < sys.size(); ++e) g.elements.push_back(static_cast<ElementId>(e));
    g.cap = u->k;
    if (g.cap > 0) groups.push_back(std::move(g));
  } else if (const auto* p = sys.as<PartitionSystem>()) {
    for (std::size_t b = 0; b < p->blocks.size(); ++b) {
      if (p->caps[b] > 0) groups.push_back({p->blocks[b], p->caps[b]});
    }
  } else {
    throw UnsupportedError("fuse-unfuse: needs a uniform or partition system, got " + sys.kind_name());
  }
  return groups;
}

/// Fuse-Unfuse stream for a uniform or partition instance (height < 2).
inline FunStream fun_schedule(const CbgtInstance& inst) {
  auto groups = fun_groups(inst.system());
  std::vector<char> grouped(inst.size(), 0);
  for (const auto& grp : groups) {
    for (ElementId e : grp.elements) grouped[e] = 1;
  }
  for (std::size_t e = 0; e < inst.size(); ++e) {
    if (!grouped[e] && inst.growth()[e] != 0) throw InstanceError("fuse-unfuse: positive rate on a rank-0 element");
  }
  return FunStream(inst.growth(), groups, Rational(2));
}

/// Partition instances: one forest per block, run in parallel.
inline FunStream fun_schedule_partition(const CbgtInstance& inst) {
  if (!inst.system().as<PartitionSystem>()) throw UnsupportedError("fun_schedule_partition: not a partition system");
  return fun_schedule(inst);
}

}  // namespace cbgt
