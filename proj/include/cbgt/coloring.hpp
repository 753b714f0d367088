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
#include <string>
#include <tuple>
#include <vector>

#include "cbgt/errors.hpp"
#include "cbgt/fuse_unfuse.hpp"
#include "cbgt/instance.hpp"
#include "cbgt/rational.hpp"
#include "cbgt/set_system.hpp"

namespace cbgt {

/// Partition of the ground set into color classes. Classes are numbered
/// in creation order and are never empty.
struct Coloring {
  std::vector<int> color;                // per element
  std::vector<ElementSet> classes;       // per color
  std::vector<Rational> class_growth;    // per color
  std::vector<int> elimination_vertex;   // graphic only: star centre per color
};

/// Vertex elimination: repeatedly remove the vertex of least incident growth
/// in the remaining graph (ties by vertex id) and give its remaining edges a
/// fresh color. Each class is a star in the residual graph.
inline Coloring graphic_coloring(const CbgtInstance& inst) {
  const auto* gr = inst.system().as<GraphicSystem>();
  if (!gr) throw UnsupportedError("graphic_coloring: not a graphic system");
  const auto& g = inst.growth();
  const int nv = gr->vertices;
  std::vector<std::vector<ElementId>> incident(nv);
  for (std::size_t e = 0; e < gr->edges.size(); ++e) {
    incident[gr->edges[e].first].push_back(static_cast<ElementId>(e));
    if (gr->edges[e].second != gr->edges[e].first) incident[gr->edges[e].second].push_back(static_cast<ElementId>(e));
  }
  Coloring c;
  c.color.assign(inst.size(), -1);
  std::vector<char> removed(nv, 0);
  std::vector<Rational> vertex_growth(nv);
  for (std::size_t e = 0; e < gr->edges.size(); ++e) {
    vertex_growth[gr->edges[e].first] += g[e];
    if (gr->edges[e].second != gr->edges[e].first) vertex_growth[gr->edges[e].second] += g[e];
  }
  for (int step = 0; step + 1 < nv; ++step) {
    int best = -1;
    for (int v = 0; v < nv; ++v) {
      if (!removed[v] && (best < 0 || vertex_growth[v] < vertex_growth[best])) best = v;
    }
    removed[best] = 1;
    ElementSet star;
    for (ElementId e : incident[best]) {
      if (c.color[e] >= 0) continue;
      star.push_back(e);
      int other = gr->edges[e].first == best ? gr->edges[e].second : gr->edges[e].first;
      vertex_growth[other] -= g[e];
    }
    if (star.empty()) continue;
    const int col = static_cast<int>(c.classes.size());
    Rational sum = 0;
    for (ElementId e : star) {
      c.color[e] = col;
      sum += g[e];
    }
    c.classes.push_back(make_set(std::move(star)));
    c.class_growth.push_back(sum);
    c.elimination_vertex.push_back(best);
  }
  // Only loops at the last vertex can remain.
  for (std::size_t e = 0; e < inst.size(); ++e) {
    if (c.color[e] < 0) {
      c.color[e] = static_cast<int>(c.classes.size());
      c.classes.push_back({static_cast<ElementId>(e)});
      c.class_growth.push_back(g[e]);
      c.elimination_vertex.push_back(gr->edges[e].first);
    }
  }
  return c;
}

/// Set-fusion coloring. Sets are processed smallest first (so every set is
/// handled after the sets it contains); while a set holds more fused
/// elements than its cap, its two cheapest members (by rate, then creation
/// order) are merged with rate equal to the sum. Every final fused element
/// is one color class.
inline Coloring laminar_coloring(const CbgtInstance& inst) {
  const auto* lam = inst.system().as<LaminarSystem>();
  if (!lam) throw UnsupportedError("laminar_coloring: not a laminar system");
  const std::size_t n = inst.size();
  const auto& g = inst.growth();

  // Fused elements; element e starts as fused element e.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<Rational> rate(g.begin(), g.end());
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  std::vector<std::size_t> order(lam->sets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lam->sets[a].size() < lam->sets[b].size(); });
  for (std::size_t li : order) {
    const int cap = lam->caps[li];
    while (true) {
      std::vector<int> members;
      for (ElementId e : lam->sets[li]) members.push_back(find(e));
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      if (static_cast<int>(members.size()) <= cap) break;
      if (members.size() < 2) throw InstanceError("laminar_coloring: cap below 1");
      // Fused elements are keyed by the id of their root, which is the
      // creation order of the fusion.
      std::sort(members.begin(), members.end(), [&](int a, int b) { return std::tie(rate[a], a) < std::tie(rate[b], b); });
      int s1 = members[0];
      int s2 = members[1];
      parent.push_back(static_cast<int>(parent.size()));
      rate.push_back(rate[s1] + rate[s2]);
      parent[s1] = parent[s2] = static_cast<int>(parent.size()) - 1;
    }
  }

  Coloring c;
  c.color.assign(n, -1);
  std::vector<int> color_of_root(parent.size(), -1);
  for (std::size_t e = 0; e < n; ++e) {
    int r = find(static_cast<int>(e));
    if (color_of_root[r] < 0) {
      color_of_root[r] = static_cast<int>(c.classes.size());
      c.classes.emplace_back();
      c.class_growth.emplace_back(0);
    }
    int col = color_of_root[r];
    c.color[e] = col;
    c.classes[col].push_back(static_cast<ElementId>(e));
    c.class_growth[col] += g[e];
  }
  return c;
}

/// Colored Fuse-Unfuse stream: one single-leaf forest per class; every
/// emitted cut is checked against the independence oracle.
class ColoredStream final : public ScheduleStream {
 public:
  ColoredStream(const CbgtInstance& inst, const Coloring& coloring)
      : sys_(inst.system()), fun_(inst.growth(), groups(coloring), Rational(4)) {}

  ElementSet next() override {
    ElementSet cut = fun_.next();
    if (!is_independent(sys_, cut)) throw InternalError("colored schedule: emitted a dependent set");
    return cut;
  }

  FunStream& fun() { return fun_; }

  Schedule one_period(int max_log2 = 22) { return fun_.one_period(max_log2); }

 private:
  static std::vector<FunGroup> groups(const Coloring& coloring) {
    std::vector<FunGroup> out;
    for (std::size_t i = 0; i < coloring.classes.size(); ++i) {
      if (coloring.class_growth[i] > 2) {
        throw InstanceError("colored schedule: class " + std::to_string(i) + " has growth " +
                            to_string(coloring.class_growth[i]) + " above 2");
      }
      out.push_back({coloring.classes[i], 1});
    }
    return out;
  }

  SetSystem sys_;
  FunStream fun_;
};

inline ColoredStream colored_schedule(const CbgtInstance& inst, const Coloring& coloring) {
  return ColoredStream(inst, coloring);
}

/// Coloring for graphic or laminar instances.
inline Coloring color_instance(const CbgtInstance& inst) {
  if (inst.system().as<GraphicSystem>()) return graphic_coloring(inst);
  if (inst.system().as<LaminarSystem>()) return laminar_coloring(inst);
  throw UnsupportedError("coloring: needs a graphic or laminar system, got " + inst.system().kind_name());
}

}  // namespace cbgt
