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
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "cbgt/errors.hpp"
#include "cbgt/instance.hpp"
#include "cbgt/rational.hpp"
#include "cbgt/rng.hpp"
#include "cbgt/set_system.hpp"

namespace cbgt {

/// Elements are the k-subsets of {1..2k} in lexicographic order; the
/// generators are I_i = {S : i in S}, each with weight 1/(2k).
inline CbgtInstance gen_binomial_lb(int k) {
  if (k < 1 || k > 6) throw DomainError("gen_binomial_lb: k must be in [1, 6]");
  const int m = 2 * k;
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) == k) subsets.push_back(mask);
  }
  // Lexicographic order on the sorted member lists.
  auto members = [&](std::uint32_t mask) {
    std::vector<int> v;
    for (int i = 0; i < m; ++i) {
      if (mask >> i & 1) v.push_back(i + 1);
    }
    return v;
  };
  std::sort(subsets.begin(), subsets.end(), [&](auto a, auto b) { return members(a) < members(b); });
  std::vector<std::string> labels;
  for (auto s : subsets) {
    std::string l = "{";
    for (int x : members(s)) l += (l.size() > 1 ? "," : "") + std::to_string(x);
    labels.push_back(l + "}");
  }
  std::vector<ElementSet> gens(m);
  for (std::size_t e = 0; e < subsets.size(); ++e) {
    for (int i = 0; i < m; ++i) {
      if (subsets[e] >> i & 1) gens[i].push_back(static_cast<ElementId>(e));
    }
  }
  ConvexCombination witness;
  for (const auto& g : gens) witness.push_back({g, make_rational(1, m)});
  std::vector<Rational> growth(subsets.size(), make_rational(1, 2));
  return CbgtInstance(SetSystem::explicit_system(subsets.size(), gens), std::move(growth), std::move(witness),
                      std::move(labels));
}

/// Elements are the nonzero vectors of GF(2)^k (as bit masks 1..2^k-1); the
/// generators are the affine hyperplanes H_v = {u : v.u = 1}, uniformly
/// weighted.
inline CbgtInstance gen_hypercube_lb(int k) {
  if (k < 1 || k > 5) throw DomainError("gen_hypercube_lb: k must be in [1, 5]");
  const int n = (1 << k) - 1;
  std::vector<ElementSet> gens;
  for (int v = 1; v <= n; ++v) {
    ElementSet h;
    for (int u = 1; u <= n; ++u) {
      if (std::popcount(static_cast<unsigned>(v & u)) % 2 == 1) h.push_back(u - 1);
    }
    gens.push_back(h);
  }
  std::vector<std::string> labels;
  for (int u = 1; u <= n; ++u) {
    std::string s;
    for (int i = k - 1; i >= 0; --i) s += (u >> i & 1) ? '1' : '0';
    labels.push_back(s);
  }
  ConvexCombination witness;
  for (const auto& g : gens) witness.push_back({g, make_rational(1, n)});
  std::vector<Rational> growth(n, make_rational(1 << (k - 1), n));
  return CbgtInstance(SetSystem::explicit_system(n, gens), std::move(growth), std::move(witness), std::move(labels));
}

/// Vanilla BGT with rates 1 - eps and eps.
inline CbgtInstance gen_tight_pair(const Rational& eps) {
  if (eps <= 0 || eps >= 1) throw DomainError("gen_tight_pair: eps must lie in (0, 1)");
  ConvexCombination witness{{{0}, Rational(1) - eps}, {{1}, eps}};
  return CbgtInstance(SetSystem::uniform(2, 1), {Rational(1) - eps, eps}, std::move(witness), {"a", "b"});
}

enum class RandomKind { kUniform, kPartition, kGraphic, kLaminar, kTransversal, kExplicitMatroid, kExplicit };

inline const std::vector<std::pair<std::string, RandomKind>>& random_kind_names() {
  static const std::vector<std::pair<std::string, RandomKind>> names = {
      {"uniform", RandomKind::kUniform},         {"partition", RandomKind::kPartition},
      {"graphic", RandomKind::kGraphic},         {"laminar", RandomKind::kLaminar},
      {"transversal", RandomKind::kTransversal}, {"explicit_matroid", RandomKind::kExplicitMatroid},
      {"explicit", RandomKind::kExplicit}};
  return names;
}

inline RandomKind parse_random_kind(const std::string& s) {
  for (const auto& [name, kind] : random_kind_names()) {
    if (name == s) return kind;
  }
  throw DomainError("unknown random instance kind '" + s + "'");
}

struct RandomParams {
  int n = 6;            // elements
  int k = 2;            // uniform rank
  int vertices = 0;     // graphic; 0 = random in [3, 6]
  int denominator = 0;  // common denominator of the witness weights; 0 = random in [2, 6]
  int terms = 0;        // witness terms; 0 = random in [1, denominator]
};

namespace detail {

inline std::vector<ElementId> shuffled(Rng& rng, std::size_t n) {
  std::vector<ElementId> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[uniform_index(rng, i)]);
  return p;
}

// Random greedy: scan elements in random order, keep what stays independent.
inline ElementSet random_basis(const SetSystem& sys, Rng& rng) {
  auto builder = make_builder(sys);
  ElementSet out;
  for (ElementId e : shuffled(rng, sys.size())) {
    if (builder->try_add(e)) out.push_back(e);
  }
  return make_set(std::move(out));
}

inline SetSystem random_laminar(Rng& rng, int n) {
  auto order = shuffled(rng, static_cast<std::size_t>(n));
  std::vector<std::pair<int, int>> intervals;  // positions [lo, hi] in `order`
  int attempts = 2 * n;
  for (int a = 0; a < attempts; ++a) {
    int lo = static_cast<int>(uniform_int(rng, 0, n - 1));
    int hi = static_cast<int>(uniform_int(rng, lo, n - 1));
    if (hi == lo) continue;
    bool ok = std::all_of(intervals.begin(), intervals.end(), [&](auto iv) {
      bool disjoint = hi < iv.first || iv.second < lo;
      bool nested = (lo <= iv.first && iv.second <= hi) || (iv.first <= lo && hi <= iv.second);
      bool same = lo == iv.first && hi == iv.second;
      return (disjoint || nested) && !same;
    });
    if (ok) intervals.emplace_back(lo, hi);
  }
  std::vector<ElementSet> sets;
  std::vector<int> caps;
  for (auto [lo, hi] : intervals) {
    ElementSet s(order.begin() + lo, order.begin() + hi + 1);
    sets.push_back(make_set(std::move(s)));
    caps.push_back(static_cast<int>(uniform_int(rng, 1, hi - lo)));
  }
  return SetSystem::laminar(static_cast<std::size_t>(n), std::move(sets), std::move(caps));
}

inline SetSystem random_system(RandomKind kind, const RandomParams& p, Rng& rng) {
  const int n = p.n;
  switch (kind) {
    case RandomKind::kUniform:
      return SetSystem::uniform(static_cast<std::size_t>(n), std::clamp(p.k, 1, n));
    case RandomKind::kPartition: {
      int b = static_cast<int>(uniform_int(rng, 1, std::max(1, n / 2)));
      std::vector<ElementSet> blocks(b);
      auto order = shuffled(rng, static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) blocks[i < b ? i : uniform_index(rng, b)].push_back(order[i]);
      std::vector<int> caps;
      for (auto& bl : blocks) {
        bl = make_set(std::move(bl));
        caps.push_back(static_cast<int>(uniform_int(rng, 1, static_cast<std::int64_t>(bl.size()))));
      }
      return SetSystem::partition(static_cast<std::size_t>(n), std::move(blocks), std::move(caps));
    }
    case RandomKind::kGraphic: {
      int v = p.vertices > 0 ? p.vertices : static_cast<int>(uniform_int(rng, 3, 6));
      std::vector<std::pair<int, int>> edges;
      for (int i = 0; i < n; ++i) {
        int a = static_cast<int>(uniform_int(rng, 0, v - 1));
        int b = static_cast<int>(uniform_int(rng, 0, v - 2));
        if (b >= a) ++b;
        edges.emplace_back(std::min(a, b), std::max(a, b));
      }
      return SetSystem::graphic(v, std::move(edges));
    }
    case RandomKind::kLaminar:
      return random_laminar(rng, n);
    case RandomKind::kTransversal: {
      int right = static_cast<int>(uniform_int(rng, 1, std::max(1, n - 1)));
      std::vector<std::vector<int>> adj(n);
      for (auto& a : adj) {
        for (int r = 0; r < right; ++r) {
          if (uniform_index(rng, 2) == 0) a.push_back(r);
        }
        if (a.empty()) a.push_back(static_cast<int>(uniform_index(rng, right)));
      }
      return SetSystem::transversal(right, std::move(adj));
    }
    case RandomKind::kExplicitMatroid: {
      // Bases of a random graphic or partition matroid, listed explicitly.
      RandomKind base = uniform_index(rng, 2) == 0 ? RandomKind::kGraphic : RandomKind::kPartition;
      auto sys = random_system(base, p, rng);
      return SetSystem::explicit_system(static_cast<std::size_t>(n), maximal_independent_sets(sys));
    }
    case RandomKind::kExplicit: {
      int m = static_cast<int>(uniform_int(rng, 2, std::max(2, n)));
      std::vector<ElementSet> gens;
      for (int i = 0; i < m; ++i) {
        ElementSet g;
        for (int e = 0; e < n; ++e) {
          if (uniform_index(rng, 2) == 0) g.push_back(e);
        }
        gens.push_back(std::move(g));
      }
      // Every element must lie in some generator.
      for (int e = 0; e < n; ++e) {
        bool covered = std::any_of(gens.begin(), gens.end(), [&](const ElementSet& g) { return contains(g, e); });
        if (!covered) gens[uniform_index(rng, static_cast<std::uint64_t>(m))].push_back(e);
      }
      for (auto& g : gens) g = make_set(std::move(g));
      return SetSystem::explicit_system(static_cast<std::size_t>(n), std::move(gens));
    }
  }
  throw DomainError("random_system: unknown kind");
}

}  // namespace detail

/// Random instance whose rates are a convex combination of random maximal
/// independent sets (bases for matroids), so the witness is attached and the
/// matroid instances are already of full rank. All weights share one small
/// denominator, which keeps the period T small.
inline CbgtInstance gen_random_normalized(RandomKind kind, const RandomParams& params, std::uint64_t seed) {
  if (params.n < 1 || params.n > 64) throw DomainError("gen_random_normalized: n must be in [1, 64]");
  Rng rng(seed);
  SetSystem sys = detail::random_system(kind, params, rng);
  const int d = params.denominator > 0 ? params.denominator : static_cast<int>(uniform_int(rng, 2, 6));
  const int terms = std::min(d, params.terms > 0 ? params.terms : static_cast<int>(uniform_int(rng, 1, d)));
  // Composition of d into `terms` positive parts.
  std::vector<int> parts(terms, 1);
  for (int i = terms; i < d; ++i) ++parts[uniform_index(rng, static_cast<std::uint64_t>(terms))];

  std::vector<ElementSet> candidates;
  if (const auto* ex = sys.as<ExplicitSystem>()) candidates = ex->generators;
  std::map<ElementSet, Rational> merged;
  for (int i = 0; i < terms; ++i) {
    ElementSet set = candidates.empty() ? detail::random_basis(sys, rng)
                                        : candidates[uniform_index(rng, candidates.size())];
    merged[set] += make_rational(parts[i], d);
  }
  ConvexCombination witness;
  for (auto& [s, w] : merged) witness.push_back({s, w});
  auto growth = coverage(sys.size(), witness);
  return CbgtInstance(std::move(sys), std::move(growth), std::move(witness));
}

}  // namespace cbgt
