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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbgt/errors.hpp"
#include "cbgt/instance.hpp"
#include "cbgt/rational.hpp"
#include "cbgt/set_system.hpp"
#include "cbgt/simplex.hpp"

namespace cbgt {

/// Every element e must be served at least once in every a(e) consecutive
/// days.
class CpsInstance {
 public:
  CpsInstance(SetSystem system, std::vector<std::int64_t> periods,
              std::optional<ConvexCombination> certificate = std::nullopt, std::vector<std::string> labels = {})
      : system_(std::move(system)), periods_(std::move(periods)), certificate_(std::move(certificate)),
        labels_(std::move(labels)) {
    if (periods_.size() != system_.size()) throw DomainError("cps: period count does not match the ground set");
    for (auto a : periods_) {
      if (a < 1) throw DomainError("cps: periods must be at least 1");
    }
    if (labels_.empty()) {
      for (std::size_t e = 0; e < periods_.size(); ++e) labels_.push_back("e" + std::to_string(e));
    }
    if (labels_.size() != periods_.size()) throw DomainError("cps: label count mismatch");
  }

  std::size_t size() const { return periods_.size(); }
  const SetSystem& system() const { return system_; }
  const std::vector<std::int64_t>& periods() const { return periods_; }
  const std::optional<ConvexCombination>& certificate() const { return certificate_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  SetSystem system_;
  std::vector<std::int64_t> periods_;
  std::optional<ConvexCombination> certificate_;
  std::vector<std::string> labels_;
};

/// a(e) = floor(c / g(e)).
inline CpsInstance cps_from_cbgt(const CbgtInstance& inst, const Rational& c) {
  if (c <= 0) throw DomainError("cps_from_cbgt: target height must be positive");
  std::vector<std::int64_t> a;
  for (std::size_t e = 0; e < inst.size(); ++e) {
    const Rational& g = inst.growth()[e];
    if (g <= 0) throw DomainError("cps_from_cbgt: element " + std::to_string(e) + " has rate 0; strip it first");
    BigInt p = floor(c / g);
    if (p == 0) throw DomainError("cps_from_cbgt: target height below growth rate for element " + std::to_string(e));
    a.push_back(to_int64(p));
  }
  return CpsInstance(inst.system(), std::move(a), std::nullopt, inst.labels());
}

struct PinwheelVerdict {
  bool ok = true;
  ElementId element = -1;          // first failing element
  std::int64_t window_start = 0;   // first day of an uncovered window
  std::string reason;
};

/// Checks every window of a(e) consecutive days. For a periodic schedule the
/// windows wrap around the core, which covers the infinite repetition; a
/// finite schedule is checked on the windows inside its first `horizon` days.
inline PinwheelVerdict verify_pinwheel(const CpsInstance& cps, const Schedule& sched, std::int64_t horizon = 0) {
  PinwheelVerdict v;
  const std::size_t n = cps.size();
  const auto len = static_cast<std::int64_t>(sched.length());
  if (len == 0) throw DomainError("verify_pinwheel: empty schedule");
  std::vector<std::vector<std::int64_t>> days(n);
  for (std::int64_t t = 1; t <= len; ++t) {
    const auto& cut = sched.core[t - 1];
    if (!is_independent(cps.system(), cut)) {
      v.ok = false;
      v.window_start = t;
      v.reason = "day " + std::to_string(t) + " is not independent";
      return v;
    }
    for (ElementId e : cut) days[e].push_back(t);
  }
  for (std::size_t e = 0; e < n; ++e) {
    const std::int64_t a = cps.periods()[e];
    const auto& d = days[e];
    auto fail = [&](std::int64_t start) {
      v.ok = false;
      v.element = static_cast<ElementId>(e);
      v.window_start = start;
      v.reason = "element " + cps.labels()[e] + " is not served in the " + std::to_string(a) +
                 " days starting at day " + std::to_string(start);
    };
    if (sched.periodic) {
      if (d.empty()) {
        fail(1);
        return v;
      }
      // Largest cyclic gap between consecutive services.
      for (std::size_t i = 0; i < d.size(); ++i) {
        std::int64_t prev = i == 0 ? d.back() - len : d[i - 1];
        if (d[i] - prev > a) {
          fail(prev + 1 > 0 ? prev + 1 : prev + 1 + len);
          return v;
        }
      }
    } else {
      const std::int64_t h = horizon > 0 ? std::min(horizon, len) : len;
      std::int64_t prev = 0;
      for (std::int64_t t : d) {
        if (t > h) break;
        if (t - prev > a) {
          fail(prev + 1);
          return v;
        }
        prev = t;
      }
      if (h - prev >= a) {
        fail(prev + 1);
        return v;
      }
    }
  }
  return v;
}

struct Decision {
  bool schedulable = false;
  Schedule witness;  // periodic, valid from the all-fresh start
  std::uint64_t states_explored = 0;
};

/// Exhaustive search over "days since last service" vectors. Transitions are
/// the maximal independent sets; a cycle among reachable states gives a
/// periodic schedule. Because serving earlier never hurts, that cycle is also
/// valid when started from the initial state, so the witness is the cycle
/// itself.
inline Decision decide_schedulable(const CpsInstance& cps, std::uint64_t max_states = 10'000'000) {
  const std::size_t n = cps.size();
  Decision out;
  if (n == 0) {
    out.schedulable = true;
    out.witness.core = {ElementSet{}};
    out.witness.periodic = true;
    return out;
  }
  std::uint64_t total = 1;
  std::vector<std::uint64_t> stride(n);
  for (std::size_t e = 0; e < n; ++e) {
    stride[e] = total;
    auto a = static_cast<std::uint64_t>(cps.periods()[e]);
    if (total > max_states / a) {
      throw BudgetError("decide_schedulable: state space too large (product of periods exceeds " +
                        std::to_string(max_states) + ")");
    }
    total *= a;
  }
  const auto moves = maximal_independent_sets(cps.system());
  std::vector<std::vector<char>> in_move(moves.size(), std::vector<char>(n, 0));
  for (std::size_t m = 0; m < moves.size(); ++m) {
    for (ElementId e : moves[m]) in_move[m][e] = 1;
  }
  // Successor of a state under a move, or nullopt if some element overruns.
  auto step = [&](std::uint64_t s, std::size_t m) -> std::optional<std::uint64_t> {
    std::uint64_t next = 0;
    for (std::size_t e = 0; e < n; ++e) {
      auto a = static_cast<std::uint64_t>(cps.periods()[e]);
      std::uint64_t since = (s / stride[e]) % a;
      std::uint64_t nxt = in_move[m][e] ? 0 : since + 1;
      if (nxt >= a) return std::nullopt;
      next += nxt * stride[e];
    }
    return next;
  };

  // Iterative depth-first search for a cycle. 0 = new, 1 = on stack, 2 = done.
  std::vector<char> color(total, 0);
  struct Frame {
    std::uint64_t state;
    std::size_t move;
  };
  std::vector<Frame> stack{{0, 0}};
  color[0] = 1;
  out.states_explored = 1;
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.move == moves.size()) {
      color[f.state] = 2;
      stack.pop_back();
      continue;
    }
    std::size_t m = f.move++;
    auto next = step(f.state, m);
    if (!next) continue;
    if (color[*next] == 1) {
      auto it = std::find_if(stack.begin(), stack.end(), [&](const Frame& x) { return x.state == *next; });
      out.schedulable = true;
      out.witness.periodic = true;
      for (; it != stack.end(); ++it) out.witness.core.push_back(moves[it->move - 1]);
      return out;
    }
    if (color[*next] == 0) {
      color[*next] = 1;
      ++out.states_explored;
      stack.push_back({*next, 0});
    }
  }
  return out;
}

struct DensityResult {
  Rational rho;
  ConvexCombination certificate;  // covering weights, sum = rho
  bool solved = false;            // false: only a supplied certificate was checked
};

/// Sum of certificate weights if it covers every 1/a(e) with independent
/// sets; throws otherwise.
inline Rational check_density_certificate(const CpsInstance& cps, const ConvexCombination& cert) {
  std::vector<Rational> cover(cps.size());
  Rational rho = 0;
  for (const auto& t : cert) {
    if (t.weight < 0) throw InstanceError("density certificate: negative weight");
    if (!is_independent(cps.system(), t.set)) throw InstanceError("density certificate: dependent set");
    for (ElementId e : t.set) cover[e] += t.weight;
    rho += t.weight;
  }
  for (std::size_t e = 0; e < cps.size(); ++e) {
    if (cover[e] < make_rational(1, cps.periods()[e])) {
      throw InstanceError("density certificate: element " + cps.labels()[e] + " is under-covered");
    }
  }
  return rho;
}

struct DensityOptions {
  bool force_lp = false;
  std::size_t max_columns = 4096;
};

/// min sum(lambda) s.t. every e is covered by weight >= 1/a(e). Solved as the
/// dual packing LP over the maximal independent sets; lambda is read off the
/// final reduced costs. 1-uniform systems use the closed form sum 1/a(e).
inline DensityResult density(const CpsInstance& cps, const DensityOptions& opt = {}) {
  const std::size_t n = cps.size();
  DensityResult out;
  const auto* u = cps.system().as<UniformSystem>();
  if (u && u->k == 1 && !opt.force_lp) {
    for (std::size_t e = 0; e < n; ++e) {
      Rational w = make_rational(1, cps.periods()[e]);
      out.rho += w;
      out.certificate.push_back({{static_cast<ElementId>(e)}, w});
    }
    out.solved = true;
    return out;
  }
  std::vector<ElementSet> columns;
  bool enumerable = true;
  try {
    columns = maximal_independent_sets(cps.system());
  } catch (const BudgetError&) {
    enumerable = false;
  }
  if (!enumerable || columns.size() > opt.max_columns) {
    if (!cps.certificate()) throw BudgetError("density: too many independent sets to solve and no certificate given");
    out.certificate = *cps.certificate();
    out.rho = check_density_certificate(cps, out.certificate);
    return out;
  }
  std::vector<std::vector<Rational>> a(columns.size(), std::vector<Rational>(n));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (ElementId e : columns[i]) a[i][e] = 1;
  }
  std::vector<char> covered(n, 0);
  for (const auto& col : columns) {
    for (ElementId e : col) covered[e] = 1;
  }
  for (std::size_t e = 0; e < n; ++e) {
    if (!covered[e]) throw InstanceError("density: element " + cps.labels()[e] + " lies in no independent set");
  }
  std::vector<Rational> b(columns.size(), Rational(1));
  std::vector<Rational> c(n);
  for (std::size_t e = 0; e < n; ++e) c[e] = make_rational(1, cps.periods()[e]);
  auto lp = simplex_max(a, b, c);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (lp.dual[i] != 0) out.certificate.push_back({columns[i], lp.dual[i]});
  }
  out.rho = check_density_certificate(cps, out.certificate);
  if (out.rho != lp.objective) throw InternalError("density: primal and dual objectives differ");
  out.solved = true;
  return out;
}

}  // namespace cbgt
