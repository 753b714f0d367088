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
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cbgt/errors.hpp"
#include "cbgt/sets.hpp"

namespace cbgt {

class SetSystem;

struct UniformSystem {
  int k = 0;
};

struct PartitionSystem {
  std::vector<ElementSet> blocks;
  std::vector<int> caps;
  std::vector<int> block_of;  // derived
};

struct GraphicSystem {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;  // element i is edges[i]
};

struct LaminarSystem {
  std::vector<ElementSet> sets;
  std::vector<int> caps;
  std::vector<std::vector<int>> sets_of;  // derived: indices of sets containing e
};

struct TransversalSystem {
  int right = 0;
  std::vector<std::vector<int>> adjacency;  // element -> right vertices
};

/// Downward closure of a list of generators. The stored list is reduced to
/// an antichain on construction.
struct ExplicitSystem {
  std::vector<ElementSet> generators;
  std::vector<std::vector<char>> member;  // derived: member[g][e]
};

struct DirectSumPart {
  std::size_t size = 0;
  std::shared_ptr<const SetSystem> system;
};

/// Parts occupy consecutive element ranges in declaration order.
struct DirectSumSystem {
  std::vector<DirectSumPart> parts;
  std::vector<std::size_t> offsets;  // derived
  std::vector<int> part_of;          // derived
};

/// An immutable independence system on the ground set {0, ..., n-1}.
class SetSystem {
 public:
  using Kind = std::variant<UniformSystem, PartitionSystem, GraphicSystem, LaminarSystem,
                            TransversalSystem, ExplicitSystem, DirectSumSystem>;

  static SetSystem uniform(std::size_t n, int k) {
    if (k < 0) throw DomainError("uniform: k must be nonnegative");
    return SetSystem(n, UniformSystem{k});
  }

  static SetSystem partition(std::size_t n, std::vector<ElementSet> blocks, std::vector<int> caps) {
    if (blocks.size() != caps.size()) throw DomainError("partition: blocks/caps length mismatch");
    PartitionSystem p;
    p.block_of.assign(n, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (caps[b] < 0) throw DomainError("partition: negative cap");
      blocks[b] = make_set(std::move(blocks[b]));
      for (ElementId e : blocks[b]) {
        check_id(e, n, "partition");
        if (p.block_of[e] != -1) throw DomainError("partition: blocks overlap at element " + std::to_string(e));
        p.block_of[e] = static_cast<int>(b);
      }
    }
    for (std::size_t e = 0; e < n; ++e) {
      if (p.block_of[e] == -1) throw DomainError("partition: element " + std::to_string(e) + " in no block");
    }
    p.blocks = std::move(blocks);
    p.caps = std::move(caps);
    return SetSystem(n, std::move(p));
  }

  static SetSystem graphic(int vertices, std::vector<std::pair<int, int>> edges) {
    if (vertices < 0) throw DomainError("graphic: negative vertex count");
    for (const auto& [u, v] : edges) {
      if (u < 0 || v < 0 || u >= vertices || v >= vertices) {
        throw DomainError("graphic: edge endpoint outside vertex range");
      }
    }
    std::size_t n = edges.size();
    return SetSystem(n, GraphicSystem{vertices, std::move(edges)});
  }

  static SetSystem laminar(std::size_t n, std::vector<ElementSet> sets, std::vector<int> caps) {
    if (sets.size() != caps.size()) throw DomainError("laminar: sets/caps length mismatch");
    LaminarSystem l;
    l.sets_of.assign(n, {});
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (caps[i] < 1) throw DomainError("laminar: caps must be positive");
      sets[i] = make_set(std::move(sets[i]));
      for (ElementId e : sets[i]) {
        check_id(e, n, "laminar");
        l.sets_of[e].push_back(static_cast<int>(i));
      }
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (std::size_t j = i + 1; j < sets.size(); ++j) {
        const auto& a = sets[i];
        const auto& b = sets[j];
        if (!is_subset(a, b) && !is_subset(b, a) && !set_intersection(a, b).empty()) {
          throw DomainError("laminar: sets " + std::to_string(i) + " and " + std::to_string(j) +
                            " cross");
        }
      }
    }
    l.sets = std::move(sets);
    l.caps = std::move(caps);
    return SetSystem(n, std::move(l));
  }

  static SetSystem transversal(int right, std::vector<std::vector<int>> adjacency) {
    if (right < 0) throw DomainError("transversal: negative right side");
    for (auto& adj : adjacency) {
      std::sort(adj.begin(), adj.end());
      adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
      for (int r : adj) {
        if (r < 0 || r >= right) throw DomainError("transversal: right vertex out of range");
      }
    }
    std::size_t n = adjacency.size();
    return SetSystem(n, TransversalSystem{right, std::move(adjacency)});
  }

  static SetSystem explicit_system(std::size_t n, std::vector<ElementSet> generators) {
    if (generators.empty()) throw DomainError("explicit: generator list must be nonempty");
    for (auto& g : generators) {
      g = make_set(std::move(g));
      for (ElementId e : g) check_id(e, n, "explicit");
    }
    // Reduce to an antichain: drop duplicates and generators dominated by another.
    std::sort(generators.begin(), generators.end(),
              [](const ElementSet& a, const ElementSet& b) {
                return a.size() != b.size() ? a.size() > b.size() : a < b;
              });
    generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
    std::vector<ElementSet> kept;
    for (auto& g : generators) {
      bool dominated = std::any_of(kept.begin(), kept.end(),
                                   [&](const ElementSet& k) { return is_subset(g, k); });
      if (!dominated) kept.push_back(std::move(g));
    }
    std::sort(kept.begin(), kept.end());
    ExplicitSystem x;
    x.member.assign(kept.size(), std::vector<char>(n, 0));
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (ElementId e : kept[i]) x.member[i][e] = 1;
    }
    x.generators = std::move(kept);
    return SetSystem(n, std::move(x));
  }

  static SetSystem direct_sum(std::vector<DirectSumPart> parts) {
    DirectSumSystem d;
    std::size_t n = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (!parts[i].system) throw DomainError("direct_sum: missing part system");
      if (parts[i].system->size() != parts[i].size) {
        throw DomainError("direct_sum: part size does not match its system");
      }
      d.offsets.push_back(n);
      n += parts[i].size;
      d.part_of.insert(d.part_of.end(), parts[i].size, static_cast<int>(i));
    }
    d.parts = std::move(parts);
    return SetSystem(n, std::move(d));
  }

  std::size_t size() const { return n_; }
  const Kind& kind() const { return kind_; }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }

  std::string kind_name() const {
    static constexpr const char* kNames[] = {"uniform",     "partition", "graphic",   "laminar",
                                             "transversal", "explicit",  "direct_sum"};
    return kNames[kind_.index()];
  }

 private:
  SetSystem(std::size_t n, Kind kind) : n_(n), kind_(std::move(kind)) {}

  static void check_id(ElementId e, std::size_t n, const char* where) {
    if (e < 0 || static_cast<std::size_t>(e) >= n) {
      throw DomainError(std::string(where) + ": element " + std::to_string(e) +
                        " outside ground set");
    }
  }

  std::size_t n_ = 0;
  Kind kind_;
};

// ---------------------------------------------------------------------------
// Incremental independence: grows an independent set one element at a time.
// Graphic keeps a union-find, transversal keeps its current matching, so a
// greedy pass over m candidates costs one augmentation per candidate.

class IndependenceBuilder {
 public:
  virtual ~IndependenceBuilder() = default;
  /// Adds e if the current set plus e stays independent; reports success.
  virtual bool try_add(ElementId e) = 0;
};

namespace detail {

class UniformBuilder final : public IndependenceBuilder {
 public:
  explicit UniformBuilder(const UniformSystem& s) : k_(s.k) {}
  bool try_add(ElementId) override {
    if (count_ >= k_) return false;
    ++count_;
    return true;
  }

 private:
  int k_;
  int count_ = 0;
};

class PartitionBuilder final : public IndependenceBuilder {
 public:
  explicit PartitionBuilder(const PartitionSystem& s) : sys_(s), used_(s.caps.size(), 0) {}
  bool try_add(ElementId e) override {
    int b = sys_.block_of[e];
    if (used_[b] >= sys_.caps[b]) return false;
    ++used_[b];
    return true;
  }

 private:
  const PartitionSystem& sys_;
  std::vector<int> used_;
};

class GraphicBuilder final : public IndependenceBuilder {
 public:
  explicit GraphicBuilder(const GraphicSystem& s) : sys_(s), uf_(s.vertices) {}
  bool try_add(ElementId e) override {
    const auto& [u, v] = sys_.edges[e];
    return uf_.unite(u, v);
  }

 private:
  const GraphicSystem& sys_;
  UnionFind uf_;
};

class LaminarBuilder final : public IndependenceBuilder {
 public:
  explicit LaminarBuilder(const LaminarSystem& s) : sys_(s), used_(s.caps.size(), 0) {}
  bool try_add(ElementId e) override {
    for (int l : sys_.sets_of[e]) {
      if (used_[l] >= sys_.caps[l]) return false;
    }
    for (int l : sys_.sets_of[e]) ++used_[l];
    return true;
  }

 private:
  const LaminarSystem& sys_;
  std::vector<int> used_;
};

class TransversalBuilder final : public IndependenceBuilder {
 public:
  explicit TransversalBuilder(const TransversalSystem& s)
      : sys_(s), match_right_(s.right, -1), seen_(s.right, 0) {}

  bool try_add(ElementId e) override {
    ++stamp_;
    return augment(e);
  }

 private:
  bool augment(ElementId e) {
    for (int r : sys_.adjacency[e]) {
      if (seen_[r] == stamp_) continue;
      seen_[r] = stamp_;
      if (match_right_[r] == -1 || augment(match_right_[r])) {
        match_right_[r] = e;
        return true;
      }
    }
    return false;
  }

  const TransversalSystem& sys_;
  std::vector<int> match_right_;
  std::vector<int> seen_;
  int stamp_ = 0;
};

class ExplicitBuilder final : public IndependenceBuilder {
 public:
  explicit ExplicitBuilder(const ExplicitSystem& s) : sys_(s), alive_(s.generators.size()) {
    std::iota(alive_.begin(), alive_.end(), 0);
  }
  bool try_add(ElementId e) override {
    std::vector<int> next;
    for (int g : alive_) {
      if (sys_.member[g][e]) next.push_back(g);
    }
    if (next.empty()) return false;
    alive_ = std::move(next);
    return true;
  }

 private:
  const ExplicitSystem& sys_;
  std::vector<int> alive_;
};

}  // namespace detail

std::unique_ptr<IndependenceBuilder> make_builder(const SetSystem& sys);

namespace detail {

class DirectSumBuilder final : public IndependenceBuilder {
 public:
  explicit DirectSumBuilder(const DirectSumSystem& s) : sys_(s) {
    for (const auto& part : s.parts) children_.push_back(make_builder(*part.system));
  }
  bool try_add(ElementId e) override {
    int p = sys_.part_of[e];
    return children_[p]->try_add(e - static_cast<ElementId>(sys_.offsets[p]));
  }

 private:
  const DirectSumSystem& sys_;
  std::vector<std::unique_ptr<IndependenceBuilder>> children_;
};

}  // namespace detail

/// The builder references sys; sys must outlive it.
inline std::unique_ptr<IndependenceBuilder> make_builder(const SetSystem& sys) {
  return std::visit(
      [](const auto& s) -> std::unique_ptr<IndependenceBuilder> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformSystem>) return std::make_unique<detail::UniformBuilder>(s);
        if constexpr (std::is_same_v<T, PartitionSystem>) return std::make_unique<detail::PartitionBuilder>(s);
        if constexpr (std::is_same_v<T, GraphicSystem>) return std::make_unique<detail::GraphicBuilder>(s);
        if constexpr (std::is_same_v<T, LaminarSystem>) return std::make_unique<detail::LaminarBuilder>(s);
        if constexpr (std::is_same_v<T, TransversalSystem>) return std::make_unique<detail::TransversalBuilder>(s);
        if constexpr (std::is_same_v<T, ExplicitSystem>) return std::make_unique<detail::ExplicitBuilder>(s);
        if constexpr (std::is_same_v<T, DirectSumSystem>) return std::make_unique<detail::DirectSumBuilder>(s);
      },
      sys.kind());
}

namespace detail {

inline void check_members(const SetSystem& sys, std::span<const ElementId> x) {
  for (ElementId e : x) {
    if (e < 0 || static_cast<std::size_t>(e) >= sys.size()) {
      throw DomainError("element " + std::to_string(e) + " outside ground set of size " +
                        std::to_string(sys.size()));
    }
  }
}

}  // namespace detail

/// True iff x is an independent set of sys. Elements outside the ground set
/// raise DomainError; repeated elements make the set dependent only if the
/// system says so for the multiset, so callers should pass proper sets.
inline bool is_independent(const SetSystem& sys, std::span<const ElementId> x) {
  detail::check_members(sys, x);
  auto builder = make_builder(sys);
  return std::all_of(x.begin(), x.end(), [&](ElementId e) { return builder->try_add(e); });
}

/// Structured variants are matroids by construction. An explicit system is
/// accepted when its generators have equal size and satisfy basis exchange.
inline bool is_matroid(const SetSystem& sys) {
  if (const auto* x = sys.as<ExplicitSystem>()) {
    const auto& gens = x->generators;
    for (const auto& g : gens) {
      if (g.size() != gens.front().size()) return false;
    }
    for (const auto& b1 : gens) {
      for (const auto& b2 : gens) {
        for (ElementId out : set_difference(b1, b2)) {
          bool found = false;
          for (ElementId in : set_difference(b2, b1)) {
            ElementSet swapped = set_difference(b1, ElementSet{out});
            swapped = set_union(swapped, ElementSet{in});
            if (std::binary_search(gens.begin(), gens.end(), swapped)) {
              found = true;
              break;
            }
          }
          if (!found) return false;
        }
      }
    }
    return true;
  }
  if (const auto* d = sys.as<DirectSumSystem>()) {
    return std::all_of(d->parts.begin(), d->parts.end(),
                       [](const DirectSumPart& p) { return is_matroid(*p.system); });
  }
  return true;
}

/// Maximum size of an independent subset of x.
inline int rank(const SetSystem& sys, std::span<const ElementId> x) {
  detail::check_members(sys, x);
  if (const auto* ex = sys.as<ExplicitSystem>()) {
    // Exact for any independence system: every independent subset of x lies
    // in some generator.
    int best = 0;
    for (const auto& row : ex->member) {
      int count = 0;
      for (ElementId e : x) count += row[e];
      best = std::max(best, count);
    }
    return best;
  }
  if (!is_matroid(sys)) throw UnsupportedError("rank: not a matroid");
  auto builder = make_builder(sys);
  int r = 0;
  for (ElementId e : x) r += builder->try_add(e) ? 1 : 0;
  return r;
}

inline int full_rank(const SetSystem& sys) {
  ElementSet all(sys.size());
  std::iota(all.begin(), all.end(), 0);
  return rank(sys, all);
}

/// Independent set maximizing the total weight of its members. Matroids use
/// the greedy algorithm over nonnegative weights in (weight desc, id asc)
/// order, so zero-weight elements are added while they fit; explicit systems
/// scan generators (first best wins) and drop negative-weight members.
template <typename Weight>
ElementSet max_weight_independent(const SetSystem& sys, std::span<const Weight> w) {
  if (w.size() != sys.size()) throw DomainError("max_weight_independent: weight vector size mismatch");
  if (const auto* ex = sys.as<ExplicitSystem>()) {
    std::size_t best = 0;
    Weight best_score{};
    for (std::size_t g = 0; g < ex->generators.size(); ++g) {
      Weight score{};
      for (ElementId e : ex->generators[g]) {
        if (w[e] > Weight{}) score += w[e];
      }
      if (g == 0 || score > best_score) {
        best = g;
        best_score = score;
      }
    }
    ElementSet out;
    for (ElementId e : ex->generators[best]) {
      if (!(w[e] < Weight{})) out.push_back(e);
    }
    return out;
  }
  std::vector<ElementId> order;
  for (std::size_t e = 0; e < sys.size(); ++e) {
    if (!(w[e] < Weight{})) order.push_back(static_cast<ElementId>(e));
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](ElementId a, ElementId b) { return w[a] > w[b]; });
  auto builder = make_builder(sys);
  ElementSet out;
  for (ElementId e : order) {
    if (builder->try_add(e)) out.push_back(e);
  }
  return make_set(std::move(out));
}

template <typename Weight>
ElementSet max_weight_independent(const SetSystem& sys, const std::vector<Weight>& w) {
  return max_weight_independent<Weight>(sys, std::span<const Weight>(w));
}

/// Extends x to a maximal independent set, trying elements in id order.
inline ElementSet complete_to_basis(const SetSystem& sys, std::span<const ElementId> x) {
  auto builder = make_builder(sys);
  for (ElementId e : x) {
    if (!builder->try_add(e)) throw DomainError("complete_to_basis: set is not independent");
  }
  ElementSet out(x.begin(), x.end());
  for (std::size_t e = 0; e < sys.size(); ++e) {
    if (!contains(x, static_cast<ElementId>(e)) && builder->try_add(static_cast<ElementId>(e))) {
      out.push_back(static_cast<ElementId>(e));
    }
  }
  return make_set(std::move(out));
}

/// All inclusion-maximal independent sets. Explicit systems return their
/// generators; other variants enumerate and are guarded by max_elements.
inline std::vector<ElementSet> maximal_independent_sets(const SetSystem& sys,
                                                        std::size_t max_elements = 20) {
  if (const auto* ex = sys.as<ExplicitSystem>()) return ex->generators;
  if (sys.size() > max_elements) {
    throw BudgetError("maximal_independent_sets: ground set of " + std::to_string(sys.size()) +
                      " elements exceeds enumeration guard " + std::to_string(max_elements));
  }
  std::vector<ElementSet> out;
  ElementSet current;
  const std::size_t n = sys.size();
  // Depth-first over include/exclude decisions, pruning dependent prefixes.
  auto rec = [&](auto&& self, std::size_t e) -> void {
    if (e == n) {
      // Maximal iff no excluded element can be added.
      for (std::size_t f = 0; f < n; ++f) {
        if (contains(current, static_cast<ElementId>(f))) continue;
        ElementSet bigger = set_union(current, ElementSet{static_cast<ElementId>(f)});
        if (is_independent(sys, bigger)) return;
      }
      out.push_back(current);
      return;
    }
    current.push_back(static_cast<ElementId>(e));
    if (is_independent(sys, current)) self(self, e + 1);
    current.pop_back();
    self(self, e + 1);
  };
  rec(rec, 0);
  return out;
}

/// Deletes the flagged elements and renumbers the rest in id order.
inline SetSystem delete_elements(const SetSystem& sys, const std::vector<char>& removed) {
  const std::size_t n = sys.size();
  if (removed.size() != n) throw DomainError("delete_elements: mask size mismatch");
  std::vector<int> new_id(n, -1);
  std::size_t kept = 0;
  for (std::size_t e = 0; e < n; ++e) {
    if (!removed[e]) new_id[e] = static_cast<int>(kept++);
  }
  auto remap = [&](const ElementSet& s) {
    ElementSet out;
    for (ElementId e : s) {
      if (new_id[e] >= 0) out.push_back(new_id[e]);
    }
    return out;
  };
  return std::visit(
      [&](const auto& s) -> SetSystem {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformSystem>) {
          return SetSystem::uniform(kept, s.k);
        } else if constexpr (std::is_same_v<T, PartitionSystem>) {
          std::vector<ElementSet> blocks;
          std::vector<int> caps;
          for (std::size_t b = 0; b < s.blocks.size(); ++b) {
            auto mapped = remap(s.blocks[b]);
            if (mapped.empty()) continue;
            blocks.push_back(std::move(mapped));
            caps.push_back(s.caps[b]);
          }
          return SetSystem::partition(kept, std::move(blocks), std::move(caps));
        } else if constexpr (std::is_same_v<T, GraphicSystem>) {
          std::vector<std::pair<int, int>> edges;
          for (std::size_t e = 0; e < n; ++e) {
            if (!removed[e]) edges.push_back(s.edges[e]);
          }
          return SetSystem::graphic(s.vertices, std::move(edges));
        } else if constexpr (std::is_same_v<T, LaminarSystem>) {
          std::vector<ElementSet> sets;
          std::vector<int> caps;
          for (std::size_t i = 0; i < s.sets.size(); ++i) {
            auto mapped = remap(s.sets[i]);
            if (mapped.empty()) continue;
            sets.push_back(std::move(mapped));
            caps.push_back(s.caps[i]);
          }
          return SetSystem::laminar(kept, std::move(sets), std::move(caps));
        } else if constexpr (std::is_same_v<T, TransversalSystem>) {
          std::vector<std::vector<int>> adj;
          for (std::size_t e = 0; e < n; ++e) {
            if (!removed[e]) adj.push_back(s.adjacency[e]);
          }
          return SetSystem::transversal(s.right, std::move(adj));
        } else if constexpr (std::is_same_v<T, ExplicitSystem>) {
          std::vector<ElementSet> gens;
          for (const auto& g : s.generators) gens.push_back(remap(g));
          return SetSystem::explicit_system(kept, std::move(gens));
        } else {
          std::vector<DirectSumPart> parts;
          for (std::size_t p = 0; p < s.parts.size(); ++p) {
            std::vector<char> sub(removed.begin() + static_cast<std::ptrdiff_t>(s.offsets[p]),
                                  removed.begin() + static_cast<std::ptrdiff_t>(s.offsets[p] + s.parts[p].size));
            auto child = std::make_shared<const SetSystem>(delete_elements(*s.parts[p].system, sub));
            parts.push_back({child->size(), child});
          }
          return SetSystem::direct_sum(std::move(parts));
        }
      },
      sys.kind());
}

}  // namespace cbgt
