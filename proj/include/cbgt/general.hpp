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
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cbgt/errors.hpp"
#include "cbgt/instance.hpp"
#include "cbgt/rational.hpp"
#include "cbgt/rng.hpp"
#include "cbgt/set_system.hpp"
#include "cbgt/stream.hpp"

namespace cbgt {

inline constexpr double kDefaultSpeedC = 6.0;

struct SpeedSplit {
  double c = kDefaultSpeedC;
  double tau = 0;  // c ln n / n
  ElementSet slow;
  ElementSet fast;  // g(e) > tau
};

inline SpeedSplit split_by_speed(const CbgtInstance& inst, double c = kDefaultSpeedC) {
  if (!(c > 2)) throw DomainError("split_by_speed: c must exceed 2");
  SpeedSplit s;
  s.c = c;
  const double n = static_cast<double>(inst.size());
  s.tau = inst.size() > 0 ? c * std::log(n) / n : 0.0;
  for (std::size_t e = 0; e < inst.size(); ++e) {
    (to_double(inst.growth()[e]) > s.tau ? s.fast : s.slow).push_back(static_cast<ElementId>(e));
  }
  return s;
}

/// One oracle call per element (maximize x_e) gives a set containing it;
/// cycling through them cuts every element once per n days.
inline Schedule round_robin_slow(const CbgtInstance& inst) {
  const std::size_t n = inst.size();
  if (n == 0) throw DomainError("round_robin_slow: empty instance");
  Schedule s;
  s.periodic = true;
  std::vector<double> w(n, 0.0);
  for (std::size_t e = 0; e < n; ++e) {
    w[e] = 1.0;
    ElementSet set = max_weight_independent(inst.system(), w);
    w[e] = 0.0;
    if (!contains(set, static_cast<ElementId>(e)) && inst.growth()[e] != 0) {
      throw InstanceError("round_robin_slow: element " + std::to_string(e) + " has positive rate but is in no independent set");
    }
    s.core.push_back(std::move(set));
  }
  return s;
}

/// Heights of Greedy Potential. Cut elements restart at g(e), others grow by
/// g(e); only fast elements are tracked.
struct PotentialState {
  std::vector<double> h;
  std::int64_t step = 0;
  bool saturated = false;
};

namespace detail {
inline double capped_exp(double x, bool& saturated) {
  if (x > 700.0) {
    saturated = true;
    x = 700.0;
  }
  return std::exp(x);
}
}  // namespace detail

/// Phi(h) = sum over fast e of exp(h(e)).
inline double potential(const SpeedSplit& split, const std::vector<double>& h) {
  bool sat = false;
  double phi = 0;
  for (ElementId e : split.fast) phi += detail::capped_exp(h[e], sat);
  return phi;
}

/// Phi(h, I): potential after cutting I.
inline double potential_after(const CbgtInstance& inst, const SpeedSplit& split, const std::vector<double>& h,
                              const ElementSet& cut) {
  bool sat = false;
  double phi = 0;
  for (ElementId e : split.fast) {
    double g = to_double(inst.growth()[e]);
    phi += contains(cut, e) ? detail::capped_exp(g, sat) : detail::capped_exp(h[e] + g, sat);
  }
  return phi;
}

/// Oracle weights whose maximization minimizes Phi(h, I).
inline std::vector<double> potential_weights(const CbgtInstance& inst, const SpeedSplit& split,
                                             const std::vector<double>& h, bool& saturated) {
  std::vector<double> w(inst.size(), 0.0);
  for (ElementId e : split.fast) {
    double g = to_double(inst.growth()[e]);
    w[e] = detail::capped_exp(h[e] + g, saturated) - detail::capped_exp(g, saturated);
  }
  return w;
}

inline PotentialState initial_potential_state(const CbgtInstance& inst) {
  return PotentialState{std::vector<double>(inst.size(), 0.0), 0, false};
}

/// One step of Greedy Potential: cut the set minimizing Phi(h, I), then update.
inline ElementSet greedy_potential_step(const CbgtInstance& inst, const SpeedSplit& split, PotentialState& state) {
  auto w = potential_weights(inst, split, state.h, state.saturated);
  ElementSet cut = max_weight_independent(inst.system(), w);
  for (ElementId e : split.fast) {
    double g = to_double(inst.growth()[e]);
    state.h[e] = contains(cut, e) ? g : state.h[e] + g;
  }
  ++state.step;
  return cut;
}

struct PotentialTraceStep {
  ElementSet cut;
  double phi_before = 0;
  double phi_after = 0;
  std::optional<double> expected;  // E over the witness of Phi(h, I)
  double max_fast_height = 0;
};

/// Runs Greedy Potential for `steps` steps from zero heights and records the
/// potential before and after each step.
inline std::vector<PotentialTraceStep> greedy_potential_trace(const CbgtInstance& inst, const SpeedSplit& split,
                                                              std::int64_t steps) {
  auto state = initial_potential_state(inst);
  std::vector<PotentialTraceStep> trace;
  for (std::int64_t t = 0; t < steps; ++t) {
    PotentialTraceStep s;
    s.phi_before = potential(split, state.h);
    if (inst.witness()) {
      double ex = 0;
      for (const auto& term : *inst.witness()) ex += to_double(term.weight) * potential_after(inst, split, state.h, term.set);
      s.expected = ex;
    }
    s.cut = greedy_potential_step(inst, split, state);
    s.phi_after = potential(split, state.h);
    for (ElementId e : split.fast) s.max_fast_height = std::max(s.max_fast_height, state.h[e]);
    trace.push_back(std::move(s));
  }
  return trace;
}

/// Samples indices of witness terms proportionally to their weights.
class WitnessSampler {
 public:
  explicit WitnessSampler(const ConvexCombination& witness) {
    double acc = 0;
    for (const auto& t : witness) {
      acc += to_double(t.weight);
      cumulative_.push_back(acc);
    }
    if (cumulative_.empty() || acc <= 0) throw InstanceError("witness sampler: empty witness");
  }
  std::size_t draw(Rng& rng) const {
    double x = uniform_unit(rng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

struct FastBlock {
  std::vector<ElementSet> cuts;   // n sets
  Rational max_fast_height;       // within one pass of the block
  int draws = 0;                  // attempts until acceptance
};

/// n independent draws from the witness, accepted when no fast element
/// exceeds c ln n within the block (grow-then-cut from zero).
inline FastBlock randomized_fast_block(const CbgtInstance& inst, const SpeedSplit& split, std::uint64_t seed,
                                       int max_draws = 64) {
  if (!inst.witness()) throw InstanceError("randomized_fast_block: a witness is required");
  const std::size_t n = inst.size();
  const double bound = split.c * std::log(static_cast<double>(n));
  WitnessSampler sampler(*inst.witness());
  Rng rng(seed);
  for (int attempt = 1; attempt <= max_draws; ++attempt) {
    FastBlock b;
    b.draws = attempt;
    for (std::size_t i = 0; i < n; ++i) b.cuts.push_back((*inst.witness())[sampler.draw(rng)].set);
    std::vector<Rational> h(n);
    for (const auto& cut : b.cuts) {
      for (ElementId e : split.fast) {
        h[e] += inst.growth()[e];
        b.max_fast_height = std::max(b.max_fast_height, h[e]);
        if (contains(cut, e)) h[e] = 0;
      }
    }
    if (n == 1 || to_double(b.max_fast_height) <= bound) return b;
  }
  throw BudgetError("randomized_fast_block: all " + std::to_string(max_draws) +
                    " draws exceeded c ln n; c is too small or the witness is defective");
}

enum class InterleaveMode { kEfficient, kExistential };

/// Efficient mode alternates Greedy Potential (odd days) with the slow round
/// robin (even days); the greedy weights use the true heights. Existential
/// mode runs two days of a repeated random fast block, then one slow day.
/// With fewer than three elements both modes are the round robin alone.
class InterleavedStream final : public ScheduleStream {
 public:
  InterleavedStream(const CbgtInstance& inst, InterleaveMode mode, double c = kDefaultSpeedC, std::uint64_t seed = 0)
      : inst_(inst), mode_(mode), split_(split_by_speed(inst, c)), slow_(round_robin_slow(inst)),
        h_(inst.size(), 0.0), last_cut_(inst.size(), 0) {
    if (mode_ == InterleaveMode::kExistential && inst.size() >= 3) fast_ = randomized_fast_block(inst, split_, seed);
  }

  ElementSet next() override {
    ++day_;
    ElementSet cut;
    if (inst_.size() < 3) {
      cut = next_round_robin();
    } else if (mode_ == InterleaveMode::kEfficient) {
      if (day_ % 2 == 1) {
        auto w = heights_weights();
        cut = max_weight_independent(inst_.system(), w);
      } else {
        cut = next_slow();
      }
    } else {
      if (day_ % 3 != 0) {
        cut = fast_.cuts[fast_pos_];
        fast_pos_ = (fast_pos_ + 1) % fast_.cuts.size();
      } else {
        cut = next_slow();
      }
    }
    for (std::size_t e = 0; e < h_.size(); ++e) {
      if (contains(cut, static_cast<ElementId>(e))) {
        h_[e] = 0.0;
        last_cut_[e] = day_;
      } else {
        h_[e] += to_double(inst_.growth()[e]);
      }
    }
    return cut;
  }

  const SpeedSplit& split() const { return split_; }
  const FastBlock& fast_block() const { return fast_; }
  bool saturated() const { return saturated_; }

 private:
  ElementSet next_round_robin() {
    ElementSet cut = slow_.core[slow_pos_];
    slow_pos_ = (slow_pos_ + 1) % slow_.core.size();
    return cut;
  }

  // Oldest slow element first, then as much total waiting time as fits. Each
  // slow element waits at most |E_slow| slow steps, as in round robin, but
  // elements already cut on fast days are not revisited.
  ElementSet next_slow() {
    const std::size_t n = inst_.size();
    std::vector<double> w(n, 0.0);
    ElementId oldest = -1;
    double total = 0;
    for (ElementId e : split_.slow) {
      if (inst_.growth()[e] == 0) continue;
      w[e] = static_cast<double>(day_ - last_cut_[e]);
      total += w[e];
      if (oldest < 0 || w[e] > w[oldest]) oldest = e;
    }
    if (oldest < 0) return next_round_robin();
    w[oldest] = total + 1;
    ElementSet cut = max_weight_independent(inst_.system(), w);
    if (!contains(cut, oldest)) return next_round_robin();
    return cut;
  }

  std::vector<double> heights_weights() { return potential_weights(inst_, split_, h_, saturated_); }

  CbgtInstance inst_;
  InterleaveMode mode_;
  SpeedSplit split_;
  Schedule slow_;
  FastBlock fast_;
  std::vector<double> h_;  // true heights after the last cut
  std::vector<std::int64_t> last_cut_;
  std::size_t slow_pos_ = 0;
  std::size_t fast_pos_ = 0;
  std::int64_t day_ = 0;
  bool saturated_ = false;
};

/// Reduce-Max: cut the independent set of largest total height, computed on
/// exact heights after growth. Experimental; no guarantee is known.
class ReduceMaxStream final : public ScheduleStream {
 public:
  explicit ReduceMaxStream(const CbgtInstance& inst) : inst_(inst), h_(inst.size()) {}

  ElementSet next() override {
    for (std::size_t e = 0; e < h_.size(); ++e) h_[e] += inst_.growth()[e];
    ElementSet cut = max_weight_independent(inst_.system(), h_);
    for (ElementId e : cut) h_[e] = 0;
    return cut;
  }

 private:
  CbgtInstance inst_;
  std::vector<Rational> h_;
};

inline ReduceMaxStream reduce_max_greedy(const CbgtInstance& inst) { return ReduceMaxStream(inst); }

inline InterleavedStream interleaved_schedule(const CbgtInstance& inst, InterleaveMode mode,
                                              double c = kDefaultSpeedC, std::uint64_t seed = 0) {
  return InterleavedStream(inst, mode, c, seed);
}

}  // namespace cbgt
