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
#include <deque>
#include <span>
#include <vector>

#include "cbgt/errors.hpp"
#include "cbgt/set_system.hpp"
#include "cbgt/sets.hpp"

namespace cbgt {

/// Independence oracle for a matroid on {0, ..., ground_size()-1}.
///
/// Oracles may expose a block decomposition: if the matroid is a direct sum
/// of matroids on the blocks, exchange queries only ever touch one block.
/// The intersection engine relies on this to keep exchange graphs sparse.
class MatroidOracle {
 public:
  virtual ~MatroidOracle() = default;
  virtual std::size_t ground_size() const = 0;
  virtual int block_count() const { return 1; }
  virtual int block_of(ElementId) const { return 0; }
  /// x is sorted and duplicate-free.
  virtual bool independent(std::span<const ElementId> x) const = 0;
};

/// Adapts a matroid SetSystem. Direct sums expose their parts as blocks.
class SetSystemMatroid final : public MatroidOracle {
 public:
  explicit SetSystemMatroid(const SetSystem& sys) : sys_(sys) {
    if (!is_matroid(sys)) throw UnsupportedError("matroid oracle: " + sys.kind_name() + " system is not a matroid");
    if (const auto* d = sys.as<DirectSumSystem>()) {
      parts_ = static_cast<int>(d->parts.size());
      part_of_ = d->part_of;
    }
  }

  std::size_t ground_size() const override { return sys_.size(); }
  int block_count() const override { return std::max(parts_, 1); }
  int block_of(ElementId e) const override { return part_of_.empty() ? 0 : part_of_[e]; }
  bool independent(std::span<const ElementId> x) const override { return is_independent(sys_, x); }

 private:
  const SetSystem& sys_;
  int parts_ = 0;
  std::vector<int> part_of_;
};

/// Maximum-cardinality common independent set of two matroids on the same
/// ground set. Greedy start, then repeated shortest augmenting paths in the
/// exchange graph found by breadth-first search; sources, neighbours and
/// sinks are all scanned in ascending element id, so the result is
/// deterministic.
inline ElementSet matroid_intersection(const MatroidOracle& m1, const MatroidOracle& m2) {
  const std::size_t n = m1.ground_size();
  if (m2.ground_size() != n) throw DomainError("matroid_intersection: ground sets differ");

  std::vector<char> in_s(n, 0);
  std::vector<std::vector<ElementId>> block_all1(m1.block_count()), block_all2(m2.block_count());
  for (std::size_t x = 0; x < n; ++x) {
    block_all1[m1.block_of(static_cast<ElementId>(x))].push_back(static_cast<ElementId>(x));
    block_all2[m2.block_of(static_cast<ElementId>(x))].push_back(static_cast<ElementId>(x));
  }
  // Current members of S per block, sorted.
  std::vector<std::vector<ElementId>> members1(block_all1.size()), members2(block_all2.size());

  std::vector<ElementId> scratch;
  auto exchange_ok = [&](const MatroidOracle& m, const std::vector<ElementId>& members,
                         ElementId add, ElementId drop) {
    scratch.clear();
    for (ElementId v : members) {
      if (v != drop) scratch.push_back(v);
    }
    scratch.insert(std::upper_bound(scratch.begin(), scratch.end(), add), add);
    return m.independent(scratch);
  };
  auto insert_member = [](std::vector<ElementId>& v, ElementId x) {
    v.insert(std::upper_bound(v.begin(), v.end(), x), x);
  };
  auto erase_member = [](std::vector<ElementId>& v, ElementId x) {
    v.erase(std::lower_bound(v.begin(), v.end(), x));
  };
  auto add = [&](ElementId x) {
    in_s[x] = 1;
    insert_member(members1[m1.block_of(x)], x);
    insert_member(members2[m2.block_of(x)], x);
  };
  auto remove = [&](ElementId x) {
    in_s[x] = 0;
    erase_member(members1[m1.block_of(x)], x);
    erase_member(members2[m2.block_of(x)], x);
  };

  for (std::size_t i = 0; i < n; ++i) {
    auto x = static_cast<ElementId>(i);
    if (exchange_ok(m1, members1[m1.block_of(x)], x, -1) &&
        exchange_ok(m2, members2[m2.block_of(x)], x, -1)) {
      add(x);
    }
  }

  std::vector<char> source(n), sink(n);
  std::vector<int> parent(n);
  std::vector<char> visited(n);
  while (true) {
    ElementId direct = -1;
    for (std::size_t i = 0; i < n; ++i) {
      auto x = static_cast<ElementId>(i);
      source[i] = sink[i] = 0;
      if (in_s[i]) continue;
      source[i] = exchange_ok(m1, members1[m1.block_of(x)], x, -1);
      sink[i] = exchange_ok(m2, members2[m2.block_of(x)], x, -1);
      if (source[i] && sink[i] && direct < 0) direct = x;
    }
    if (direct >= 0) {
      add(direct);
      continue;
    }

    std::fill(visited.begin(), visited.end(), 0);
    std::fill(parent.begin(), parent.end(), -1);
    std::deque<ElementId> queue;
    for (std::size_t i = 0; i < n; ++i) {
      if (source[i]) {
        visited[i] = 1;
        queue.push_back(static_cast<ElementId>(i));
      }
    }
    ElementId end = -1;
    while (!queue.empty() && end < 0) {
      ElementId u = queue.front();
      queue.pop_front();
      if (!in_s[u]) {
        if (sink[u]) {
          end = u;
          break;
        }
        // u -> y when S - y + u is independent in m2.
        const auto& members = members2[m2.block_of(u)];
        for (ElementId y : members) {
          if (visited[y]) continue;
          if (exchange_ok(m2, members, u, y)) {
            visited[y] = 1;
            parent[y] = u;
            queue.push_back(y);
          }
        }
      } else {
        // u -> x when S - u + x is independent in m1.
        const auto& members = members1[m1.block_of(u)];
        for (ElementId x : block_all1[m1.block_of(u)]) {
          if (in_s[x] || visited[x]) continue;
          if (exchange_ok(m1, members, x, u)) {
            visited[x] = 1;
            parent[x] = u;
            queue.push_back(x);
          }
        }
      }
    }
    if (end < 0) break;

    std::vector<ElementId> path;
    for (ElementId v = end; v >= 0; v = parent[v]) path.push_back(v);
    // The path alternates outside/inside S, starting and ending outside.
    for (std::size_t i = 1; i < path.size(); i += 2) remove(path[i]);
    for (std::size_t i = 0; i < path.size(); i += 2) add(path[i]);
  }

  ElementSet out;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_s[i]) out.push_back(static_cast<ElementId>(i));
  }
  return out;
}

/// Matroid intersection over two set-system descriptors on the same ground
/// set. Non-matroid variants raise UnsupportedError.
inline ElementSet matroid_intersection(const SetSystem& a, const SetSystem& b) {
  if (a.size() != b.size()) throw DomainError("matroid_intersection: ground sets differ");
  SetSystemMatroid m1(a);
  SetSystemMatroid m2(b);
  return matroid_intersection(m1, m2);
}

}  // namespace cbgt
