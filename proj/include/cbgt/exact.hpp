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
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cbgt/errors.hpp"
#include "cbgt/instance.hpp"
#include "cbgt/matroid_intersection.hpp"
#include "cbgt/rational.hpp"
#include "cbgt/set_system.hpp"
#include "cbgt/simulator.hpp"

namespace cbgt {

/// Days [lo, hi] (1-based, inclusive) during which the i-th cut may fall.
struct CutWindow {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  friend bool operator==(const CutWindow&, const CutWindow&) = default;
};

/// C_i = [floor((i-1)/g) + 1, ceil(i/g)] for i = 1..T g.
inline std::vector<CutWindow> cut_windows(const Rational& g, std::int64_t period) {
  if (g <= 0 || g > 1) throw DomainError("cut_windows: rate must lie in (0, 1]");
  Rational cuts = Rational(period) * g;
  if (!is_integer(cuts)) throw DomainError("cut_windows: T g(e) is not an integer");
  const std::int64_t k = to_int64(numerator(cuts));
  std::vector<CutWindow> w;
  w.reserve(static_cast<std::size_t>(k));
  for (std::int64_t i = 1; i <= k; ++i) {
    w.push_back({to_int64(floor(Rational(i - 1) / g)) + 1, to_int64(ceil(Rational(i) / g))});
  }
  for (std::int64_t i = 1; i < k; ++i) {
    const auto& a = w[i - 1];
    const auto& b = w[i];
    bool exact = is_integer(Rational(i) / g);
    bool ok = exact ? a.hi + 1 == b.lo : (a.lo < a.hi && a.hi == b.lo);
    if (!ok) throw InternalError("cut_windows: windows do not chain");
  }
  if (!w.empty() && (w.front().lo != 1 || w.back().hi != period)) throw InternalError("cut_windows: windows do not span [1, T]");
  return w;
}

/// Whether sorted, distinct days can be matched to distinct windows. Greedy:
/// each day takes the first unused window (after the previous day's) that
/// contains it.
inline bool me_is_independent(std::span<const CutWindow> windows, std::span<const std::int64_t> days) {
  std::size_t next = 0;
  for (std::int64_t t : days) {
    while (next < windows.size() && windows[next].hi < t) ++next;
    if (next == windows.size() || windows[next].lo > t) return false;
    ++next;
  }
  return true;
}

struct FractionalEntry {
  std::int64_t day = 0;
  Rational x;
};

/// The explicit fractional matching between windows and days: x = t g - i + 1
/// at the first day of C_i, i - (t - 1) g at its last day, g in between.
inline std::vector<std::vector<FractionalEntry>> fractional_matching(const Rational& g, std::int64_t period) {
  auto w = cut_windows(g, period);
  std::vector<std::vector<FractionalEntry>> out(w.size());
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    const Rational i(static_cast<std::int64_t>(idx + 1));
    for (std::int64_t t = w[idx].lo; t <= w[idx].hi; ++t) {
      Rational x;
      if (t == w[idx].lo) {
        x = Rational(t) * g - i + 1;
      } else if (t == w[idx].hi) {
        x = i - Rational(t - 1) * g;
      } else {
        x = g;
      }
      out[idx].push_back({t, x});
    }
  }
  return out;
}

/// Per-day sums equal g and per-window sums equal 1, exactly.
inline bool check_fractional_matching(const Rational& g, std::int64_t period) {
  auto x = fractional_matching(g, period);
  std::vector<Rational> per_day(static_cast<std::size_t>(period));
  for (const auto& window : x) {
    Rational sum = 0;
    for (const auto& entry : window) {
      if (entry.x < 0) return false;
      sum += entry.x;
      per_day[entry.day - 1] += entry.x;
    }
    if (sum != 1) return false;
  }
  return std::all_of(per_day.begin(), per_day.end(), [&](const Rational& s) { return s == g; });
}

/// Wrap-around witness for uniform and partition systems: elements are laid
/// end to end on [0, cap) per block and the set at offset x in [0, 1) holds
/// the elements covering x, x + 1, ... Requires sum of rates <= cap per block
/// and rates <= 1.
inline ConvexCombination wraparound_witness(const SetSystem& sys, const std::vector<Rational>& g) {
  std::vector<std::pair<ElementSet, int>> blocks;
  if (const auto* u = sys.as<UniformSystem>()) {
    ElementSet all(sys.size());
    std::iota(all.begin(), all.end(), 0);
    blocks.emplace_back(all, u->k);
  } else if (const auto* p = sys.as<PartitionSystem>()) {
    for (std::size_t b = 0; b < p->blocks.size(); ++b) blocks.emplace_back(p->blocks[b], p->caps[b]);
  } else {
    throw UnsupportedError("wraparound_witness: needs a uniform or partition system");
  }
  // Each element occupies [start, start + g) on the line; record the
  // breakpoints modulo 1.
  std::vector<Rational> start(sys.size());
  std::set<Rational> cuts{Rational(0), Rational(1)};
  for (const auto& [elems, cap] : blocks) {
    Rational pos = 0;
    for (ElementId e : elems) {
      if (g[e] < 0 || g[e] > 1) throw InstanceError("wraparound_witness: rate outside [0, 1]");
      start[e] = pos;
      pos += g[e];
      Rational frac = pos - Rational(floor(pos));
      cuts.insert(frac);
    }
    if (pos > cap) throw InstanceError("wraparound_witness: block rates exceed the cap");
  }
  ConvexCombination out;
  for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
    const Rational& x = *it;
    Rational weight = *std::next(it) - x;
    ElementSet set;
    for (const auto& [elems, cap] : blocks) {
      for (ElementId e : elems) {
        if (g[e] == 0) continue;
        // Is some x + j in [start, start + g)?
        Rational j = ceil(start[e] - x);
        Rational point = x + j;
        if (point < start[e] + g[e]) set.push_back(e);
      }
    }
    out.push_back({make_set(std::move(set)), weight});
  }
  return out;
}

/// Extends every witness term to a basis (completion in ascending id
/// order). The returned instance dominates the input pointwise and has total
/// rate equal to the rank.
inline CbgtInstance normalize_full_rank(const CbgtInstance& inst) {
  if (!inst.witness()) throw InstanceError("normalize_full_rank: a witness is required; supply one in the instance file");
  if (!is_matroid(inst.system())) throw UnsupportedError("normalize_full_rank: not a matroid");
  ConvexCombination terms;
  std::map<ElementSet, Rational> merged;
  for (const auto& t : *inst.witness()) {
    if (t.weight == 0) continue;
    merged[complete_to_basis(inst.system(), t.set)] += t.weight;
  }
  for (auto& [s, w] : merged) terms.push_back({s, w});
  auto g = coverage(inst.size(), terms);
  return CbgtInstance(inst.system(), std::move(g), std::move(terms), inst.labels());
}

/// M_T: one copy of M per day. Ground index of (e, day t) is (t-1) n + e.
class DayCopiesMatroid final : public MatroidOracle {
 public:
  DayCopiesMatroid(const SetSystem& sys, std::int64_t period) : sys_(sys), n_(sys.size()), period_(period) {}
  std::size_t ground_size() const override { return n_ * static_cast<std::size_t>(period_); }
  int block_count() const override { return static_cast<int>(period_); }
  int block_of(ElementId x) const override { return static_cast<int>(static_cast<std::size_t>(x) / n_); }
  bool independent(std::span<const ElementId> x) const override {
    std::size_t i = 0;
    while (i < x.size()) {
      int day = block_of(x[i]);
      scratch_.clear();
      while (i < x.size() && block_of(x[i]) == day) scratch_.push_back(static_cast<ElementId>(x[i++] % n_));
      if (!is_independent(sys_, scratch_)) return false;
    }
    return true;
  }

 private:
  const SetSystem& sys_;
  std::size_t n_;
  std::int64_t period_;
  mutable ElementSet scratch_;
};

/// M_E: direct sum over elements of the window-matching matroids.
class WindowMatroid final : public MatroidOracle {
 public:
  WindowMatroid(std::vector<std::vector<CutWindow>> windows, std::int64_t period)
      : windows_(std::move(windows)), n_(windows_.size()), period_(period) {}
  std::size_t ground_size() const override { return n_ * static_cast<std::size_t>(period_); }
  int block_count() const override { return static_cast<int>(n_); }
  int block_of(ElementId x) const override { return static_cast<int>(static_cast<std::size_t>(x) % n_); }
  bool independent(std::span<const ElementId> x) const override {
    days_.assign(n_, {});
    for (ElementId v : x) days_[block_of(v)].push_back(static_cast<std::int64_t>(static_cast<std::size_t>(v) / n_) + 1);
    for (std::size_t e = 0; e < n_; ++e) {
      if (days_[e].empty()) continue;
      std::sort(days_[e].begin(), days_[e].end());
      if (!me_is_independent(windows_[e], days_[e])) return false;
    }
    return true;
  }

 private:
  std::vector<std::vector<CutWindow>> windows_;
  std::size_t n_;
  std::int64_t period_;
  mutable std::vector<std::vector<std::int64_t>> days_;
};

struct ExactOptions {
  std::int64_t max_product = 1'000'000;  // budget on |E| T
  // A common basis guarantees d < 1, which bounds the height only by 2 + g.
  // Further bases are tried, each with a different element order, until the
  // height is below 2.
  int height_attempts = 64;
};

struct ExactResult {
  Schedule schedule;             // periodic, length T, original element ids
  std::int64_t period = 0;       // T
  CbgtInstance normalized;       // full-rank rates on the original ground set
  SimulationReport normalized_report;  // d < 1 holds here
  SimulationReport report;       // against the input rates, 3T days
  int attempts = 1;              // common bases computed
};

/// Relabels the ground set of another oracle. The intersection engine scans
/// elements in id order, so a relabeling steers it to a different basis.
class PermutedMatroid final : public MatroidOracle {
 public:
  PermutedMatroid(const MatroidOracle& inner, std::vector<ElementId> to_inner)
      : inner_(inner), to_inner_(std::move(to_inner)) {}
  std::size_t ground_size() const override { return inner_.ground_size(); }
  int block_count() const override { return inner_.block_count(); }
  int block_of(ElementId x) const override { return inner_.block_of(to_inner_[x]); }
  bool independent(std::span<const ElementId> x) const override {
    buf_.clear();
    for (ElementId v : x) buf_.push_back(to_inner_[v]);
    std::sort(buf_.begin(), buf_.end());
    return inner_.independent(buf_);
  }

 private:
  const MatroidOracle& inner_;
  std::vector<ElementId> to_inner_;
  mutable std::vector<ElementId> buf_;
};

/// Periodic schedule with discrepancy below 1 for the normalized rates and
/// height below 2 for the input rates, via a common basis of M_T and M_E.
inline ExactResult exact_schedule(const CbgtInstance& inst, const ExactOptions& opt = {}) {
  if (!is_matroid(inst.system())) throw UnsupportedError("exact_schedule: " + inst.system().kind_name() + " system is not a matroid");
  CbgtInstance with_witness = inst;
  if (!inst.witness()) {
    if (inst.system().as<UniformSystem>() || inst.system().as<PartitionSystem>()) {
      with_witness = CbgtInstance(inst.system(), inst.growth(), wraparound_witness(inst.system(), inst.growth()), inst.labels());
    } else {
      throw InstanceError("exact_schedule: a witness is required for " + inst.system().kind_name() + " systems");
    }
  }
  auto check = check_witness(with_witness.system(), with_witness.growth(), *with_witness.witness());
  if (!check.valid) throw InstanceError("exact_schedule: invalid witness: " + check.reason);

  auto stripped = strip_zero_rate(with_witness);
  const CbgtInstance& base = stripped.instance;
  const std::size_t n = base.size();
  CbgtInstance full = n > 0 ? normalize_full_rank(base) : base;
  // Normalization may not zero any rate, so the ground set is unchanged.

  std::int64_t period = 1;
  std::vector<std::vector<CutWindow>> windows;
  if (n > 0) {
    auto horizon = lcm_of_denominators(full.growth());
    if (horizon.period * n > opt.max_product) {
      throw BudgetError("exact_schedule: pseudo-polynomial blowup, T = " + horizon.period.str() +
                        " and |E| T = " + BigInt(horizon.period * n).str() + " exceed the budget " +
                        std::to_string(opt.max_product));
    }
    period = to_int64(horizon.period);
    for (std::size_t e = 0; e < n; ++e) windows.push_back(cut_windows(full.growth()[e], period));
  }

  // Normalized rates on the original ground set (zero for stripped elements).
  std::vector<Rational> g_full(inst.size());
  ConvexCombination witness_full;
  for (std::size_t e = 0; e < n; ++e) g_full[stripped.original_id[e]] = full.growth()[e];
  for (const auto& t : *full.witness()) {
    ElementSet s;
    for (ElementId e : t.set) s.push_back(stripped.original_id[e]);
    witness_full.push_back({make_set(std::move(s)), t.weight});
  }
  CbgtInstance normalized(inst.system(), std::move(g_full), std::move(witness_full), inst.labels());

  const std::size_t ground = n * static_cast<std::size_t>(period);
  std::vector<ElementId> order(ground);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(0x5eed);
  const int attempts = std::max(opt.height_attempts, 1);
  Rational best_height = -1;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) std::shuffle(order.begin(), order.end(), rng);
    Schedule sched;
    sched.periodic = true;
    sched.core.assign(static_cast<std::size_t>(period), {});
    if (n > 0) {
      DayCopiesMatroid mt(full.system(), period);
      WindowMatroid me(windows, period);
      PermutedMatroid pt(mt, order);
      PermutedMatroid pe(me, order);
      ElementSet basis = matroid_intersection(pt, pe);
      const auto r = full_rank(full.system());
      if (static_cast<std::int64_t>(basis.size()) != period * r) {
        throw InternalError("exact_schedule: common independent set of size " + std::to_string(basis.size()) +
                            ", expected T r(M) = " + std::to_string(period * r));
      }
      for (ElementId y : basis) {
        auto x = static_cast<std::size_t>(order[y]);
        sched.core[x / n].push_back(stripped.original_id[x % n]);
      }
      for (auto& s : sched.core) s = make_set(std::move(s));
    }

    // A(pi, e, T) = T g'(e) for every element.
    std::vector<std::int64_t> count(inst.size(), 0);
    for (const auto& s : sched.core) {
      for (ElementId e : s) ++count[e];
    }
    for (std::size_t e = 0; e < inst.size(); ++e) {
      if (Rational(count[e]) != Rational(period) * normalized.growth()[e]) {
        throw InternalError("exact_schedule: element " + std::to_string(e) + " is cut the wrong number of times");
      }
    }

    auto norm_report = simulate(normalized, sched, 3 * period);
    auto report = simulate(inst, sched, 3 * period);
    if (!report.valid || !norm_report.valid) throw InternalError("exact_schedule: decoded schedule is not valid");
    auto d = norm_report.max_discrepancy();
    if (!d || *d >= 1) throw InternalError("exact_schedule: discrepancy not below 1");
    if (report.max_height < 2 && report.trajectory_max_height < 2) {
      return {std::move(sched), period, std::move(normalized), std::move(norm_report), std::move(report), attempt};
    }
    if (best_height < 0 || report.max_height < best_height) best_height = report.max_height;
  }
  throw InternalError("exact_schedule: " + std::to_string(attempts) +
                      " common bases all reach height >= 2 (lowest " + to_string(best_height) + ")");
}

}  // namespace cbgt
