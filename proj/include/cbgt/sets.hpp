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
#include <numeric>
#include <span>
#include <vector>

namespace cbgt {

/// Dense element index in [0, n). The id order is the global tie-break
/// order used by every algorithm in the library.
using ElementId = int;

/// A set of elements, kept sorted and duplicate-free.
using ElementSet = std::vector<ElementId>;

inline ElementSet make_set(std::vector<ElementId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

inline bool is_subset(std::span<const ElementId> sub, std::span<const ElementId> super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

inline bool contains(std::span<const ElementId> set, ElementId e) {
  return std::binary_search(set.begin(), set.end(), e);
}

inline ElementSet set_union(std::span<const ElementId> a, std::span<const ElementId> b) {
  ElementSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline ElementSet set_difference(std::span<const ElementId> a, std::span<const ElementId> b) {
  ElementSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline ElementSet set_intersection(std::span<const ElementId> a, std::span<const ElementId> b) {
  ElementSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  /// Returns false when i and j were already connected.
  bool unite(int i, int j) {
    int a = find(i);
    int b = find(j);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

}  // namespace cbgt
