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

namespace cbgt {

struct ElementReport {
  Rational max_height;
  /// Longest gap between consecutive cuts (time 0 counts as a cut).
  /// Empty when the element is never cut by a periodic schedule.
  std::optional<std::int64_t> recurrence;
  /// sup_t |t g(e) - A(t)|. Empty when unbounded (periodic drift).
  std::optional<Rational> discrepancy;
  std::int64_t cuts = 0;  // A(pi, e, horizon)
  std::vector<std::pair<std::int64_t, std::int64_t>> samples;  // (t, A(pi, e, t))
};

struct SimulationReport {
  std::int64_t horizon = 0;
  bool valid = true;
  std::optional<std::int64_t> first_invalid_step;
  /// True when recurrence, discrepancy and heights describe the infinite
  /// periodic schedule rather than the first `horizon` days.
  bool exact = false;
  Rational max_height;
  /// Maximum height seen in the replayed trajectory of `horizon` days.
  Rational trajectory_max_height;
  std::vector<ElementReport> per_element;

  std::optional<Rational> max_discrepancy() const {
    Rational d = 0;
    for (const auto& r : per_element) {
      if (!r.discrepancy) return std::nullopt;
      d = std::max(d, *r.discrepancy);
    }
    return d;
  }
};

namespace detail {

struct Replay {
  std::vector<Rational> max_height;
  std::vector<std::int64_t> max_gap;
  std::vector<std::int64_t> last_cut;
  std::vector<Rational> max_disc;
  std::vector<std::int64_t> count;
  Rational overall;
  bool valid = true;
  std::optional<std::int64_t> first_invalid;
};

inline void check_cut(const SetSystem& sys, const ElementSet& cut, std::int64_t t) {
  for (std::size_t i = 0; i < cut.size(); ++i) {
    if (cut[i] < 0 || static_cast<std::size_t>(cut[i]) >= sys.size()) {
      throw DomainError("simulate: day " + std::to_string(t) + " cuts element " + std::to_string(cut[i]) +
                        " outside the ground set");
    }
    if (i > 0 && cut[i] <= cut[i - 1]) throw DomainError("simulate: day " + std::to_string(t) + " cut set is not sorted and unique");
  }
}

// Dense grow-then-cut replay. Heights are computed twice (incrementally and
// from the last cut time) and must agree.
template <typename Samples>
Replay replay(const CbgtInstance& inst, const Schedule& sched, std::int64_t days, const Samples& on_step) {
  const std::size_t n = inst.size();
  const auto& g = inst.growth();
  Replay r;
  r.max_height.assign(n, Rational(0));
  r.max_gap.assign(n, 0);
  r.last_cut.assign(n, 0);
  r.max_disc.assign(n, Rational(0));
  r.count.assign(n, 0);
  std::vector<Rational> h(n);
  std::vector<char> in_cut(n, 0);
  for (std::int64_t t = 1; t <= days; ++t) {
    const ElementSet& cut = sched.at(static_cast<std::size_t>(t));
    check_cut(inst.system(), cut, t);
    if (!is_independent(inst.system(), cut)) {
      if (r.valid) r.first_invalid = t;
      r.valid = false;
    }
    for (ElementId e : cut) in_cut[e] = 1;
    for (std::size_t e = 0; e < n; ++e) {
      h[e] += g[e];
      if (h[e] != Rational(t - r.last_cut[e]) * g[e]) {
        throw InternalError("simulate: height recurrence mismatch for element " + std::to_string(e));
      }
      if (h[e] > r.max_height[e]) r.max_height[e] = h[e];
      if (in_cut[e]) {
        r.max_gap[e] = std::max(r.max_gap[e], t - r.last_cut[e]);
        r.last_cut[e] = t;
        h[e] = 0;
        ++r.count[e];
      }
      Rational fluid = Rational(t) * g[e];
      Rational dev = abs(fluid - Rational(r.count[e]));
      bool within = floor(fluid) <= r.count[e] && r.count[e] <= ceil(fluid);
      if ((dev < 1) != within) throw InternalError("simulate: discrepancy rounding check failed");
      if (dev > r.max_disc[e]) r.max_disc[e] = dev;
    }
    for (ElementId e : cut) in_cut[e] = 0;
    on_step(t, r.count);
  }
  for (const auto& m : r.max_height) r.overall = std::max(r.overall, m);
  return r;
}

}  // namespace detail

/// Replays `sched` for `horizon` days. For periodic schedules whose core
/// contains every positive-rate element, the per-element figures are exact
/// for the infinite schedule (two periods determine the gaps; the
/// discrepancy is periodic once the per-period drift is zero).
inline SimulationReport simulate(const CbgtInstance& inst, const Schedule& sched, std::int64_t horizon,
                                 const std::vector<std::int64_t>& sample_times = {}) {
  if (horizon < 1) throw DomainError("simulate: horizon must be at least 1");
  if (sched.core.empty()) throw DomainError("simulate: empty schedule");
  if (!sched.periodic && static_cast<std::size_t>(horizon) > sched.length()) {
    throw DomainError("simulate: horizon exceeds finite schedule length");
  }
  const std::size_t n = inst.size();
  SimulationReport report;
  report.horizon = horizon;
  report.per_element.resize(n);

  std::vector<std::int64_t> wanted = sample_times;
  std::sort(wanted.begin(), wanted.end());
  auto trajectory = detail::replay(inst, sched, horizon, [&](std::int64_t t, const std::vector<std::int64_t>& count) {
    if (!std::binary_search(wanted.begin(), wanted.end(), t)) return;
    for (std::size_t e = 0; e < n; ++e) report.per_element[e].samples.emplace_back(t, count[e]);
  });
  report.valid = trajectory.valid;
  report.first_invalid_step = trajectory.first_invalid;
  report.trajectory_max_height = trajectory.overall;

  bool covered = sched.periodic;
  if (covered) {
    std::vector<char> seen(n, 0);
    for (const auto& s : sched.core) {
      for (ElementId e : s) seen[e] = 1;
    }
    for (std::size_t e = 0; e < n; ++e) {
      if (!seen[e] && inst.growth()[e] != 0) covered = false;
    }
  }

  if (!covered) {
    for (std::size_t e = 0; e < n; ++e) {
      auto& r = report.per_element[e];
      r.max_height = trajectory.max_height[e];
      r.cuts = trajectory.count[e];
      // Truncated: the open gap at the end is a lower bound on the true gap.
      std::int64_t gap = std::max(trajectory.max_gap[e], horizon - trajectory.last_cut[e]);
      bool never = sched.periodic && inst.growth()[e] != 0 &&
                   std::none_of(sched.core.begin(), sched.core.end(),
                                [&](const ElementSet& s) { return contains(s, static_cast<ElementId>(e)); });
      if (!never) r.recurrence = gap;
      Rational drift = 0;
      if (sched.periodic) drift = Rational(static_cast<std::int64_t>(sched.length())) * inst.growth()[e];
      if (!never || drift == 0) r.discrepancy = trajectory.max_disc[e];
    }
    report.max_height = trajectory.overall;
    return report;
  }

  report.exact = true;
  const auto period = static_cast<std::int64_t>(sched.length());
  auto two = detail::replay(inst, sched, 2 * period, [](std::int64_t, const std::vector<std::int64_t>&) {});
  std::vector<std::int64_t> per_period(n, 0);
  for (const auto& s : sched.core) {
    for (ElementId e : s) ++per_period[e];
  }
  for (std::size_t e = 0; e < n; ++e) {
    auto& r = report.per_element[e];
    r.cuts = trajectory.count[e];
    const Rational& g = inst.growth()[e];
    if (g == 0) {
      r.max_height = 0;
      r.recurrence = per_period[e] > 0 ? std::optional<std::int64_t>(two.max_gap[e]) : std::nullopt;
    } else {
      r.recurrence = two.max_gap[e];
      r.max_height = Rational(*r.recurrence) * g;
      if (r.max_height != two.max_height[e]) throw InternalError("simulate: gap and trajectory heights disagree");
    }
    if (Rational(period) * g == Rational(per_period[e])) r.discrepancy = two.max_disc[e];
    report.max_height = std::max(report.max_height, r.max_height);
  }
  return report;
}

struct DiscrepancyResult {
  std::vector<std::optional<Rational>> per_element;  // empty entry = unbounded
  std::optional<Rational> max;
  bool exact = false;
};

inline DiscrepancyResult discrepancy(const CbgtInstance& inst, const Schedule& sched, std::int64_t horizon) {
  auto report = simulate(inst, sched, horizon);
  DiscrepancyResult out;
  out.exact = report.exact;
  for (const auto& r : report.per_element) out.per_element.push_back(r.discrepancy);
  out.max = report.max_discrepancy();
  return out;
}

struct ImplicationVerdict {
  bool holds = true;
  bool antecedent = false;  // d < 1
  std::optional<Rational> discrepancy;
  Rational height;
};

/// (d < 1) implies (h < 2).
inline ImplicationVerdict check_disc_height_implication(const SimulationReport& report) {
  ImplicationVerdict v;
  v.discrepancy = report.max_discrepancy();
  v.height = report.max_height;
  v.antecedent = v.discrepancy && *v.discrepancy < 1;
  v.holds = !v.antecedent || v.height < 2;
  return v;
}

}  // namespace cbgt
