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


#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <cstdint>

#include "cbgt/cbgt.hpp"

namespace cbgt {
namespace {

Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

CbgtInstance example1() {
  return CbgtInstance(SetSystem::uniform(5, 2), {q(1, 10), q(1, 5), q(1, 2), q(1, 2), q(3, 10)}, std::nullopt,
                      {"a", "b", "c", "d", "e"});
}

CbgtInstance fig3(const Rational& g) {
  return CbgtInstance(SetSystem::graphic(6, {{0, 1}, {0, 5}, {5, 1}, {5, 2}, {5, 4}, {4, 1}, {4, 3}, {1, 2}, {1, 3}, {2, 3}}),
                      std::vector<Rational>(10, g));
}

template <class S>
Schedule take_from(S stream, std::size_t days) {
  return take(stream, days);
}

// Gaps between consecutive cuts of e over one period, cyclically.
std::vector<std::int64_t> gaps(const Schedule& s, ElementId e) {
  std::vector<std::int64_t> days;
  for (std::size_t t = 0; t < s.length(); ++t) {
    if (contains(s.core[t], e)) days.push_back(static_cast<std::int64_t>(t + 1));
  }
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < days.size(); ++i) {
    out.push_back(i == 0 ? days[0] + static_cast<std::int64_t>(s.length()) - days.back() : days[i] - days[i - 1]);
  }
  return out;
}

// Fuse-Unfuse

TEST(FuseUnfuse, ExampleOneTrees) {
  auto inst = example1();
  auto stream = fun_schedule(inst);
  ASSERT_EQ(stream.forests().size(), 1u);
  const auto& f = stream.forests()[0];
  std::vector<std::string> shapes;
  for (int r : f.roots()) shapes.push_back(f.describe(r, inst.labels()) + ":" + to_string(f.node(r).rate));
  std::sort(shapes.begin(), shapes.end());
  EXPECT_EQ(shapes, (std::vector<std::string>{"(c,d):1", "(e,(a,b)):4/5"}));
}

TEST(FuseUnfuse, ExampleOneSchedule) {
  auto inst = example1();
  auto stream = fun_schedule(inst);
  auto s = take(stream, 8);
  std::vector<ElementSet> first(s.core.begin(), s.core.begin() + 4);
  EXPECT_EQ(first, (std::vector<ElementSet>{{1, 3}, {2, 4}, {0, 3}, {2, 4}}));
  EXPECT_EQ(std::vector<ElementSet>(s.core.begin() + 4, s.core.end()), first);
  EXPECT_EQ(simulate(inst, fun_schedule(inst).one_period(), 8).max_height, 1);
}

TEST(FuseUnfuse, NoFusionWhenKCoversEverything) {
  auto f = build_forest({q(1, 2), q(1, 3), q(1, 5)}, {0, 1, 2}, 3);
  EXPECT_EQ(f.roots().size(), 3u);
  EXPECT_EQ(f.max_depth(), 0);
  EXPECT_EQ(f.step(), (ElementSet{0, 1, 2}));
}

TEST(FuseUnfuse, SingleFusionDoublesTheFasterRate) {
  auto f = build_forest({q(1, 3), q(2, 3)}, {0, 1}, 1);
  ASSERT_EQ(f.roots().size(), 1u);
  EXPECT_EQ(f.node(f.roots()[0]).rate, q(4, 3));
}

TEST(FuseUnfuse, PairAlternatesRightChildFirst) {
  auto f = build_forest({q(1, 2), q(1, 2)}, {0, 1}, 1);
  std::vector<ElementSet> days;
  for (int i = 0; i < 4; ++i) days.push_back(f.step());
  EXPECT_EQ(days, (std::vector<ElementSet>{{1}, {0}, {1}, {0}}));
}

TEST(FuseUnfuse, PartitionBlocksRunInParallel) {
  CbgtInstance inst(SetSystem::partition(3, {{0, 1}, {2}}, {1, 1}), {q(1, 2), q(1, 2), q(1)});
  auto s = take_from(fun_schedule_partition(inst), 4);
  EXPECT_EQ(s.core, (std::vector<ElementSet>{{1, 2}, {0, 2}, {1, 2}, {0, 2}}));
  CbgtInstance singles(SetSystem::partition(2, {{0}, {1}}, {1, 1}), {q(1, 3), q(1, 2)});
  auto t = take_from(fun_schedule(singles), 3);
  for (const auto& cut : t.core) EXPECT_EQ(cut, (ElementSet{0, 1}));
}

TEST(FuseUnfuse, OneBlockPartitionMatchesUniform) {
  auto inst = example1();
  CbgtInstance part(SetSystem::partition(5, {{0, 1, 2, 3, 4}}, {2}), inst.growth());
  EXPECT_EQ(fun_schedule(part).one_period(), fun_schedule(inst).one_period());
}

TEST(FuseUnfuse, RejectsGrowthAboveRank) {
  CbgtInstance over(SetSystem::uniform(3, 1), {q(9, 10), q(9, 10), q(9, 10)});
  EXPECT_THROW(fun_schedule(over), InstanceError);
}

TEST(FuseUnfuse, HeightBelowTwoOnRandomUniformAndPartition) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    Rng rng(seed);
    RandomParams p;
    p.n = static_cast<int>(uniform_int(rng, 1, 9));
    p.k = static_cast<int>(uniform_int(rng, 1, p.n));
    auto inst = gen_random_normalized(seed % 2 ? RandomKind::kUniform : RandomKind::kPartition, p, rng());
    auto s = fun_schedule(inst).one_period();
    auto rep = simulate(inst, s, 2 * static_cast<std::int64_t>(s.length()));
    EXPECT_TRUE(rep.valid);
    EXPECT_LT(rep.max_height, 2) << instance_to_json(inst).dump();
  }
}

// Colorings

TEST(Coloring, Fig3ClassesAreStarsWithinTheBound) {
  auto inst = fig3(q(1, 2));
  auto c = graphic_coloring(inst);
  EXPECT_EQ(c.classes.size(), 5u);
  for (const auto& g : c.class_growth) EXPECT_LE(g, 2 - q(2, 6));
  // Vertex elimination with ties broken by id.
  EXPECT_EQ(c.classes, (std::vector<ElementSet>{{0, 1}, {3, 7, 9}, {6, 8}, {2, 5}, {4}}));
}

TEST(Coloring, Fig3ScheduleHasPaperGapProfile) {
  // The published coloring, fed to the colored scheduler: the singleton class
  // is cut daily, two-element classes alternate, and the three-element class
  // visits one edge every 2 days and the other two every 4 days.
  auto inst = fig3(q(1, 2));
  Coloring paper;
  paper.classes = {{0, 1}, {2, 3, 4}, {5, 6}, {7, 8}, {9}};
  paper.color.assign(10, 0);
  for (std::size_t k = 0; k < paper.classes.size(); ++k) {
    Rational sum = 0;
    for (ElementId e : paper.classes[k]) {
      paper.color[e] = static_cast<int>(k);
      sum += inst.growth()[e];
    }
    paper.class_growth.push_back(sum);
  }
  auto s = colored_schedule(inst, paper).one_period();
  EXPECT_EQ(s.length(), 4u);
  EXPECT_EQ(gaps(s, 9), (std::vector<std::int64_t>{1, 1, 1, 1}));
  for (ElementId e : {0, 1, 5, 6, 7, 8}) EXPECT_EQ(gaps(s, e), (std::vector<std::int64_t>{2, 2}));
  std::vector<std::size_t> visits;
  for (ElementId e : {2, 3, 4}) visits.push_back(gaps(s, e).size());
  std::sort(visits.begin(), visits.end());
  EXPECT_EQ(visits, (std::vector<std::size_t>{1, 1, 2}));
  auto rep = simulate(inst, s, 8);
  EXPECT_TRUE(rep.valid);
  EXPECT_EQ(rep.max_height, 2);
}

TEST(Coloring, SingleEdgeAndTriangle) {
  CbgtInstance edge(SetSystem::graphic(2, {{0, 1}}), {q(1)});
  EXPECT_EQ(graphic_coloring(edge).classes.size(), 1u);
  CbgtInstance tri(SetSystem::graphic(3, {{0, 1}, {1, 2}, {0, 2}}), {q(2, 3), q(2, 3), q(2, 3)});
  auto c = graphic_coloring(tri);
  ASSERT_EQ(c.classes.size(), 2u);
  EXPECT_EQ(c.classes[0].size(), 2u);
  EXPECT_EQ(c.class_growth[0], q(4, 3));
  EXPECT_LE(c.class_growth[0], 2 - q(2, 3));
  auto s = take_from(colored_schedule(tri, c), 8);
  auto rep = simulate(tri, s, 8);
  EXPECT_TRUE(rep.valid);
  EXPECT_LT(rep.max_height, 4);
}

TEST(Coloring, LaminarFusesWithinCaps) {
  CbgtInstance none(SetSystem::laminar(3, {}, {}), {q(1, 2), q(1, 2), q(1, 2)});
  EXPECT_EQ(laminar_coloring(none).classes.size(), 3u);
  CbgtInstance one(SetSystem::laminar(3, {{0, 1, 2}}, {1}), {q(1, 2), q(1, 2), q(1, 2)});
  auto c = laminar_coloring(one);
  ASSERT_EQ(c.classes.size(), 1u);
  EXPECT_EQ(c.class_growth[0], q(3, 2));
  CbgtInstance nested(SetSystem::laminar(4, {{0, 1}, {0, 1, 2, 3}}, {1, 2}), std::vector<Rational>(4, q(1, 2)));
  auto d = laminar_coloring(nested);
  EXPECT_EQ(d.color[0], d.color[1]);
  EXPECT_EQ(d.classes.size(), 2u);
  for (const auto& g : d.class_growth) EXPECT_LE(g, 2);
}

TEST(Coloring, RejectsClassesAboveTwo) {
  CbgtInstance bad(SetSystem::laminar(3, {{0, 1, 2}}, {1}), {q(1), q(1), q(1, 2)});
  auto c = laminar_coloring(bad);
  EXPECT_THROW(colored_schedule(bad, c), InstanceError);
}

// Exact scheduler

TEST(Exact, WindowExamples) {
  EXPECT_EQ(cut_windows(q(1), 3), (std::vector<CutWindow>{{1, 1}, {2, 2}, {3, 3}}));
  EXPECT_EQ(cut_windows(q(1, 2), 4), (std::vector<CutWindow>{{1, 2}, {3, 4}}));
  auto w = cut_windows(q(4, 11), 22);
  EXPECT_FALSE(me_is_independent(w, std::vector<std::int64_t>{1, 2}));
  EXPECT_TRUE(me_is_independent(w, std::vector<std::int64_t>{}));
  std::vector<std::int64_t> mins;
  for (const auto& x : w) mins.push_back(x.lo);
  EXPECT_TRUE(me_is_independent(w, mins));
}

TEST(Exact, FractionalMatchingOnFigureOne) {
  EXPECT_TRUE(check_fractional_matching(q(4, 11), 22));
  auto x = fractional_matching(q(4, 11), 22);
  EXPECT_EQ(x[0].front().x, q(4, 11));
  EXPECT_EQ(x[0].back().x, q(3, 11));
}

TEST(Exact, TwoHalves) {
  CbgtInstance inst(SetSystem::uniform(2, 1), {q(1, 2), q(1, 2)});
  auto res = exact_schedule(inst);
  EXPECT_EQ(res.period, 2);
  EXPECT_EQ(res.report.max_height, 1);
  EXPECT_TRUE(res.schedule.core == (std::vector<ElementSet>{{0}, {1}}) ||
              res.schedule.core == (std::vector<ElementSet>{{1}, {0}}));
}

TEST(Exact, TwoThirdsOneThird) {
  CbgtInstance inst(SetSystem::uniform(2, 1), {q(2, 3), q(1, 3)});
  auto res = exact_schedule(inst);
  EXPECT_EQ(res.period, 3);
  EXPECT_LT(*res.normalized_report.max_discrepancy(), 1);
  EXPECT_LT(res.report.max_height, 2);
}

TEST(Exact, ExampleOne) {
  auto res = exact_schedule(example1());
  EXPECT_EQ(res.period, 10);
  EXPECT_LT(*res.normalized_report.max_discrepancy(), 1);
  EXPECT_LT(res.report.max_height, 2);
  Rational total = 0;
  for (const auto& g : res.normalized.growth()) total += g;
  EXPECT_EQ(total, 2);
}

TEST(Exact, NormalizationCompletesTermsInIdOrder) {
  CbgtInstance one(SetSystem::uniform(2, 1), {q(1, 2), q(0)}, ConvexCombination{{{0}, q(1, 2)}, {{}, q(1, 2)}});
  EXPECT_EQ(normalize_full_rank(one).growth(), (std::vector<Rational>{q(1), q(0)}));
  CbgtInstance two(SetSystem::uniform(3, 2), {q(1), q(0), q(0)}, ConvexCombination{{{0}, q(1)}});
  EXPECT_EQ(normalize_full_rank(two).growth(), (std::vector<Rational>{q(1), q(1), q(0)}));
}

TEST(Exact, DiscrepancyBelowOneAllowsHeightTwo) {
  // Cuts of a on days 1, 2, 5, 6 keep A(t) within {floor, ceil} of 2t/3,
  // yet a waits three days from day 2 to day 5.
  CbgtInstance inst(SetSystem::uniform(2, 1), {q(2, 3), q(1, 3)});
  Schedule s{{{0}, {0}, {1}, {1}, {0}, {0}}, true};
  auto rep = simulate(inst, s, 12);
  ASSERT_TRUE(rep.max_discrepancy().has_value());
  EXPECT_LT(*rep.max_discrepancy(), 1);
  EXPECT_EQ(rep.max_height, 2);
  EXPECT_FALSE(check_disc_height_implication(rep).holds);
}

TEST(Exact, RespectsBudgetAndMatroidRequirement) {
  std::vector<Rational> g = {q(1, 101), q(1, 103), q(1, 107)};
  CbgtInstance big(SetSystem::uniform(3, 1), g);
  EXPECT_THROW(exact_schedule(big, ExactOptions{1000}), BudgetError);
  EXPECT_THROW(exact_schedule(gen_binomial_lb(2)), UnsupportedError);
  CbgtInstance graphic_no_witness(SetSystem::graphic(2, {{0, 1}}), {q(1, 2)});
  EXPECT_THROW(exact_schedule(graphic_no_witness), InstanceError);
}

TEST(Exact, ZeroRateElementsAreNeverCut) {
  CbgtInstance inst(SetSystem::uniform(3, 1), {q(1, 2), q(0), q(1, 2)});
  auto res = exact_schedule(inst);
  for (const auto& cut : res.schedule.core) EXPECT_FALSE(contains(cut, 1));
  EXPECT_LT(res.report.max_height, 2);
}

// General set systems

TEST(General, RoundRobinOnOneUniformIsIdentity) {
  CbgtInstance inst(SetSystem::uniform(4, 1), std::vector<Rational>(4, q(1, 4)));
  auto s = round_robin_slow(inst);
  EXPECT_EQ(s.core, (std::vector<ElementSet>{{0}, {1}, {2}, {3}}));
}

TEST(General, RoundRobinCoversEveryElementOfTheBinomialSystem) {
  auto inst = gen_binomial_lb(2);
  auto s = round_robin_slow(inst);
  for (std::size_t e = 0; e < inst.size(); ++e) EXPECT_TRUE(contains(s.core[e], static_cast<ElementId>(e)));
}

TEST(General, SpeedSplitRequiresCAboveTwo) {
  EXPECT_THROW(split_by_speed(gen_binomial_lb(2), 2.0), DomainError);
  auto split = split_by_speed(gen_binomial_lb(3), 2.5);
  EXPECT_NEAR(split.tau, 2.5 * std::log(20.0) / 20, 1e-12);
  EXPECT_EQ(split.fast.size(), 20u);
}

TEST(General, GreedyAlternatesOnTwoEqualFastElements) {
  std::vector<Rational> g(10, q(0));
  g[0] = g[1] = q(1, 2);
  CbgtInstance inst(SetSystem::uniform(10, 1), g);
  auto split = split_by_speed(inst, 2.1);
  ASSERT_EQ(split.fast, (ElementSet{0, 1}));
  auto state = initial_potential_state(inst);
  std::vector<ElementSet> cuts;
  for (int i = 0; i < 6; ++i) cuts.push_back(greedy_potential_step(inst, split, state));
  // From zero heights, cutting an element only resets it to g, so the first
  // two steps tie and pick the lowest id; after that the two alternate.
  EXPECT_EQ(cuts, (std::vector<ElementSet>{{0}, {0}, {1}, {0}, {1}, {0}}));
}

TEST(General, WeightsMinimizeThePotential) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    RandomParams p;
    p.n = static_cast<int>(uniform_int(rng, 3, 9));
    auto inst = gen_random_normalized(RandomKind::kExplicit, p, rng());
    const auto& gens = inst.system().as<ExplicitSystem>()->generators;
    if (gens.size() > 10) continue;
    auto split = split_by_speed(inst, 2.1);
    std::vector<double> h(inst.size());
    for (auto& x : h) x = uniform_unit(rng) * 3;
    bool sat = false;
    auto cut = max_weight_independent(inst.system(), potential_weights(inst, split, h, sat));
    double best = potential_after(inst, split, h, cut);
    for (const auto& g : gens) EXPECT_LE(best, potential_after(inst, split, h, g) + 1e-9);
  }
}

TEST(General, FastHeightsStayBelowFourLogN) {
  auto inst = gen_binomial_lb(2);
  auto split = split_by_speed(inst, 2.1);
  auto trace = greedy_potential_trace(inst, split, 6);
  for (const auto& s : trace) EXPECT_LE(s.max_fast_height, 4 * std::log(6.0));
}

TEST(General, TinyInstancesUseRoundRobin) {
  CbgtInstance one(SetSystem::uniform(1, 1), {q(1, 3)});
  auto s1 = take_from(interleaved_schedule(one, InterleaveMode::kEfficient), 6);
  EXPECT_EQ(simulate(one, s1, 6).max_height, q(1, 3));
  CbgtInstance two(SetSystem::uniform(2, 1), {q(1, 2), q(1, 2)});
  auto s2 = take_from(interleaved_schedule(two, InterleaveMode::kEfficient), 10);
  EXPECT_LE(simulate(two, s2, 10).max_height, 2);
}

TEST(General, InterleavedModesStayValidAndLogarithmic) {
  for (auto mode : {InterleaveMode::kEfficient, InterleaveMode::kExistential}) {
    for (int k : {2, 3}) {
      auto inst = gen_binomial_lb(k);
      const auto n = static_cast<std::int64_t>(inst.size());
      auto stream = interleaved_schedule(inst, mode, 6.0, 3);
      auto s = take(stream, static_cast<std::size_t>(20 * n));
      auto rep = simulate(inst, s, 20 * n);
      EXPECT_TRUE(rep.valid);
      EXPECT_LE(to_double(rep.max_height), 8 * std::log(static_cast<double>(n)));
    }
  }
}

TEST(General, FastBlockAcceptance) {
  auto inst = gen_binomial_lb(2);
  auto split = split_by_speed(inst, 6.0);
  int first_try = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    if (randomized_fast_block(inst, split, seed).draws == 1) ++first_try;
  }
  EXPECT_GE(first_try, 90);
  CbgtInstance single(SetSystem::uniform(3, 3), {q(1), q(1), q(1)}, ConvexCombination{{{0, 1, 2}, q(1)}});
  auto b = randomized_fast_block(single, split_by_speed(single, 2.5), 9);
  for (const auto& cut : b.cuts) EXPECT_EQ(cut, (ElementSet{0, 1, 2}));
}

TEST(General, ReduceMaxExamples) {
  CbgtInstance bgt(SetSystem::uniform(2, 1), {q(9, 10), q(1, 10)});
  auto stream = reduce_max_greedy(bgt);
  auto s = take(stream, 100);
  auto rep = simulate(bgt, s, 100);
  EXPECT_TRUE(rep.valid);
  EXPECT_LT(rep.max_height, 2);
  CbgtInstance single(SetSystem::uniform(1, 1), {q(2, 5)});
  auto t = take_from(reduce_max_greedy(single), 5);
  EXPECT_EQ(simulate(single, t, 5).max_height, q(2, 5));
}

TEST(General, StreamsAreDeterministic) {
  auto inst = gen_binomial_lb(3);
  auto a = interleaved_schedule(inst, InterleaveMode::kExistential, 6.0, 42);
  auto b = interleaved_schedule(inst, InterleaveMode::kExistential, 6.0, 42);
  EXPECT_EQ(take(a, 60), take(b, 60));
}

}  // namespace
}  // namespace cbgt
