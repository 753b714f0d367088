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

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbgt/errors.hpp"
#include "cbgt/rational.hpp"
#include "cbgt/set_system.hpp"
#include "cbgt/sets.hpp"

namespace cbgt {

struct WeightedSet {
  ElementSet set;
  Rational weight;

  friend bool operator==(const WeightedSet&, const WeightedSet&) = default;
};

/// Nonnegative weights on independent sets. For a growth witness the weights
/// sum to exactly one; density certificates drop that requirement.
using ConvexCombination = std::vector<WeightedSet>;

/// g(e) = sum of the weights of the sets containing e.
inline std::vector<Rational> coverage(std::size_t n, const ConvexCombination& terms) {
  std::vector<Rational> g(n);
  for (const auto& t : terms) {
    for (ElementId e : t.set) {
      if (e < 0 || static_cast<std::size_t>(e) >= n) throw DomainError("coverage: element outside ground set");
      g[e] += t.weight;
    }
  }
  return g;
}

/// A bamboo-garden instance: ground set, set system, growth rates and an
/// optional witness expressing the rates as a convex combination of
/// independent sets.
class CbgtInstance {
 public:
  CbgtInstance(SetSystem system, std::vector<Rational> growth,
               std::optional<ConvexCombination> witness = std::nullopt,
               std::vector<std::string> labels = {})
      : system_(std::move(system)), growth_(std::move(growth)), witness_(std::move(witness)),
        labels_(std::move(labels)) {
    if (growth_.size() != system_.size()) {
      throw DomainError("instance: " + std::to_string(growth_.size()) + " growth rates for " +
                        std::to_string(system_.size()) + " elements");
    }
    if (labels_.empty()) {
      for (std::size_t e = 0; e < growth_.size(); ++e) labels_.push_back("e" + std::to_string(e));
    }
    if (labels_.size() != growth_.size()) throw DomainError("instance: label count mismatch");
    if (witness_) {
      for (auto& t : *witness_) t.set = make_set(std::move(t.set));
    }
  }

  std::size_t size() const { return growth_.size(); }
  const SetSystem& system() const { return system_; }
  const std::vector<Rational>& growth() const { return growth_; }
  const Rational& growth(ElementId e) const { return growth_[e]; }
  const std::optional<ConvexCombination>& witness() const { return witness_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  SetSystem system_;
  std::vector<Rational> growth_;
  std::optional<ConvexCombination> witness_;
  std::vector<std::string> labels_;
};

/// Finite sequence of cut sets, or the infinite repetition of that sequence
/// when periodic. Days are numbered from 1.
struct Schedule {
  std::vector<ElementSet> core;
  bool periodic = false;

  std::size_t length() const { return core.size(); }

  const ElementSet& at(std::size_t day) const {
    if (day == 0 || core.empty()) throw DomainError("schedule: day out of range");
    if (periodic) return core[(day - 1) % core.size()];
    if (day > core.size()) throw DomainError("schedule: day past end of finite schedule");
    return core[day - 1];
  }

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

class HorizonTooLarge : public BudgetError {
 public:
  HorizonTooLarge(const std::string& what, BigInt partial) : BudgetError(what), partial_lcm(std::move(partial)) {}
  BigInt partial_lcm;
};

struct TimeHorizon {
  BigInt period;               // T
  std::vector<BigInt> cuts;    // T * g(e), one per element
};

/// Smallest T with T * g(e) integral for every e. Rates must be nonzero.
inline TimeHorizon lcm_of_denominators(const std::vector<Rational>& growth, unsigned max_bits = 62) {
  const BigInt limit = BigInt(1) << max_bits;
  BigInt t = 1;
  for (std::size_t e = 0; e < growth.size(); ++e) {
    if (growth[e] == 0) throw DomainError("lcm_of_denominators: element " + std::to_string(e) + " has rate 0; strip it first");
    BigInt next = lcm(t, denominator(growth[e]));
    if (next > limit) {
      throw HorizonTooLarge("T too large: lcm exceeds 2^" + std::to_string(max_bits) +
                                " after " + std::to_string(e) + " elements (partial lcm " + t.str() + ")",
                            t);
    }
    t = std::move(next);
  }
  TimeHorizon out{t, {}};
  for (const auto& g : growth) out.cuts.push_back(numerator(g) * (t / denominator(g)));
  return out;
}

struct StrippedInstance {
  CbgtInstance instance;
  std::vector<ElementId> removed;      // original ids, ascending
  std::vector<ElementId> original_id;  // new id -> original id
};

/// Deletes zero-rate elements. The witness is restricted to the survivors.
inline StrippedInstance strip_zero_rate(const CbgtInstance& inst) {
  const std::size_t n = inst.size();
  std::vector<char> removed(n, 0);
  std::vector<int> new_id(n, -1);
  StrippedInstance out{inst, {}, {}};
  std::vector<Rational> growth;
  std::vector<std::string> labels;
  for (std::size_t e = 0; e < n; ++e) {
    if (inst.growth()[e] == 0) {
      removed[e] = 1;
      out.removed.push_back(static_cast<ElementId>(e));
    } else {
      new_id[e] = static_cast<int>(growth.size());
      out.original_id.push_back(static_cast<ElementId>(e));
      growth.push_back(inst.growth()[e]);
      labels.push_back(inst.labels()[e]);
    }
  }
  if (out.removed.empty()) return out;
  std::optional<ConvexCombination> witness;
  if (inst.witness()) {
    witness.emplace();
    for (const auto& t : *inst.witness()) {
      ElementSet s;
      for (ElementId e : t.set) {
        if (new_id[e] >= 0) s.push_back(new_id[e]);
      }
      witness->push_back({std::move(s), t.weight});
    }
  }
  out.instance = CbgtInstance(delete_elements(inst.system(), removed), std::move(growth), std::move(witness),
                              std::move(labels));
  return out;
}

struct GrowthVerdict {
  bool valid = false;
  bool fully_verified = false;
  std::string reason;
  ElementSet violating_set;
};

/// Checks that a witness is a convex combination of independent sets that
/// generates g exactly.
inline GrowthVerdict check_witness(const SetSystem& sys, const std::vector<Rational>& g,
                                   const ConvexCombination& witness) {
  GrowthVerdict v;
  Rational total = 0;
  for (std::size_t i = 0; i < witness.size(); ++i) {
    const auto& t = witness[i];
    if (t.weight < 0) {
      v.reason = "witness term " + std::to_string(i) + " has negative weight";
      v.violating_set = t.set;
      return v;
    }
    for (ElementId e : t.set) {
      if (e < 0 || static_cast<std::size_t>(e) >= sys.size()) {
        v.reason = "witness term " + std::to_string(i) + " leaves the ground set";
        return v;
      }
    }
    if (!is_independent(sys, t.set)) {
      v.reason = "witness term " + std::to_string(i) + " is not independent";
      v.violating_set = t.set;
      return v;
    }
    total += t.weight;
  }
  if (total != 1) {
    v.reason = "witness weights sum to " + to_string(total) + ", not 1";
    return v;
  }
  auto generated = coverage(sys.size(), witness);
  for (std::size_t e = 0; e < g.size(); ++e) {
    if (generated[e] != g[e]) {
      v.reason = "witness generates " + to_string(generated[e]) + " for element " + std::to_string(e) +
                 " but growth is " + to_string(g[e]);
      v.violating_set = {static_cast<ElementId>(e)};
      return v;
    }
  }
  v.valid = true;
  v.fully_verified = true;
  return v;
}

/// Membership of g in the independence polytope. With a witness the check is
/// exact. Without one, matroids with at most full_check_limit elements are
/// checked on every subset; larger ones only on a necessary battery
/// (singletons, family-specific tight sets, the ground set) and the verdict
/// is flagged as not fully verified.
inline GrowthVerdict validate_growth(const CbgtInstance& inst, std::size_t full_check_limit = 20) {
  const auto& sys = inst.system();
  const auto& g = inst.growth();
  if (inst.witness()) return check_witness(sys, g, *inst.witness());

  GrowthVerdict v;
  for (std::size_t e = 0; e < g.size(); ++e) {
    if (g[e] < 0) {
      v.reason = "negative growth rate";
      v.violating_set = {static_cast<ElementId>(e)};
      return v;
    }
  }
  if (sys.as<ExplicitSystem>() || !is_matroid(sys)) {
    v.reason = "explicit systems need a witness";
    return v;
  }
  const std::size_t n = sys.size();
  auto check = [&](const ElementSet& x) {
    Rational sum = 0;
    for (ElementId e : x) sum += g[e];
    if (sum > rank(sys, x)) {
      v.reason = "sum of rates " + to_string(sum) + " exceeds rank " + std::to_string(rank(sys, x));
      v.violating_set = x;
      return false;
    }
    return true;
  };

  if (n <= full_check_limit) {
    // Ground set first so the canonical violation is reported when present.
    ElementSet all(n);
    std::iota(all.begin(), all.end(), 0);
    if (!check(all)) return v;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      ElementSet x;
      for (std::size_t e = 0; e < n; ++e) {
        if (mask >> e & 1) x.push_back(static_cast<ElementId>(e));
      }
      if (!check(x)) return v;
    }
    v.valid = true;
    v.fully_verified = true;
    return v;
  }

  std::vector<ElementSet> battery;
  ElementSet all(n);
  std::iota(all.begin(), all.end(), 0);
  battery.push_back(all);
  for (std::size_t e = 0; e < n; ++e) battery.push_back({static_cast<ElementId>(e)});
  if (const auto* p = sys.as<PartitionSystem>()) {
    for (const auto& b : p->blocks) battery.push_back(b);
  } else if (const auto* l = sys.as<LaminarSystem>()) {
    for (const auto& s : l->sets) battery.push_back(s);
  } else if (const auto* gr = sys.as<GraphicSystem>()) {
    std::vector<ElementSet> stars(gr->vertices);
    for (std::size_t e = 0; e < gr->edges.size(); ++e) {
      stars[gr->edges[e].first].push_back(static_cast<ElementId>(e));
      stars[gr->edges[e].second].push_back(static_cast<ElementId>(e));
    }
    for (auto& s : stars) battery.push_back(make_set(std::move(s)));
  } else if (const auto* tr = sys.as<TransversalSystem>()) {
    std::vector<ElementSet> neighbourhoods(tr->right);
    for (std::size_t e = 0; e < tr->adjacency.size(); ++e) {
      for (int r : tr->adjacency[e]) neighbourhoods[r].push_back(static_cast<ElementId>(e));
    }
    for (auto& s : neighbourhoods) battery.push_back(make_set(std::move(s)));
  }
  for (const auto& x : battery) {
    if (!check(x)) return v;
  }
  v.valid = true;
  v.fully_verified = false;
  v.reason = "necessary conditions only";
  return v;
}

/// Turns nonnegative weights on independent sets with total at most one and
/// coverage at least g into an exact witness of g: excess coverage is removed
/// by dropping elements from sets (splitting a term where needed), and the
/// missing weight goes to the empty set.
inline ConvexCombination exact_witness_from_cover(const SetSystem& sys, const std::vector<Rational>& g,
                                                  ConvexCombination terms) {
  auto cov = coverage(sys.size(), terms);
  Rational total = 0;
  for (const auto& t : terms) total += t.weight;
  if (total > 1) throw InstanceError("exact_witness_from_cover: weights sum above 1");
  for (std::size_t e = 0; e < g.size(); ++e) {
    if (cov[e] < g[e]) throw InstanceError("exact_witness_from_cover: element " + std::to_string(e) + " under-covered");
    Rational excess = cov[e] - g[e];
    for (std::size_t i = 0; i < terms.size() && excess > 0; ++i) {
      if (!contains(terms[i].set, static_cast<ElementId>(e))) continue;
      ElementSet without = set_difference(terms[i].set, ElementSet{static_cast<ElementId>(e)});
      if (terms[i].weight <= excess) {
        excess -= terms[i].weight;
        terms[i].set = std::move(without);
      } else {
        terms[i].weight -= excess;
        terms.push_back({std::move(without), excess});
        excess = 0;
      }
    }
  }
  if (total < 1) terms.push_back({ElementSet{}, Rational(1) - total});
  // Merge identical sets so the witness stays small.
  std::map<ElementSet, Rational> merged;
  for (auto& t : terms) {
    if (t.weight != 0) merged[t.set] += t.weight;
  }
  ConvexCombination out;
  for (auto& [set, w] : merged) out.push_back({set, w});
  return out;
}

}  // namespace cbgt
