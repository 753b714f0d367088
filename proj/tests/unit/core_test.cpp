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

#include <algorithm>
#include <cstdint>

#include "cbgt/bench.hpp"
#include "cbgt/cbgt.hpp"

namespace cbgt {
namespace {

Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

ElementSet mask_set(std::uint32_t mask, std::size_t n) {
  ElementSet s;
  for (std::size_t e = 0; e < n; ++e) {
    if (mask >> e & 1) s.push_back(static_cast<ElementId>(e));
  }
  return s;
}

int brute_rank(const SetSystem& sys, const ElementSet& x) {
  int best = 0;
  for (std::uint32_t m = 0; m < (1u << x.size()); ++m) {
    ElementSet s;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (m >> i & 1) s.push_back(x[i]);
    }
    if (static_cast<int>(s.size()) > best && is_independent(sys, s)) best = static_cast<int>(s.size());
  }
  return best;
}

const std::vector<std::pair<int, int>> kFig3Edges = {{0, 1}, {0, 5}, {5, 1}, {5, 2}, {5, 4},
                                                      {4, 1}, {4, 3}, {1, 2}, {1, 3}, {2, 3}};

// Rationals

TEST(Rational, ParsesFractionsDecimalsAndIntegers) {
  EXPECT_EQ(parse_rational("3/10"), q(3, 10));
  EXPECT_EQ(parse_rational("0.3"), q(3, 10));
  EXPECT_EQ(parse_rational("-2/4"), q(-1, 2));
  EXPECT_EQ(parse_rational("7"), q(7));
  EXPECT_THROW(parse_rational("1/0"), DomainError);
  EXPECT_THROW(parse_rational("abc"), DomainError);
}

TEST(Rational, FloorCeilMatchIntegerDivision) {
  for (int a = -20; a <= 20; ++a) {
    for (int b = 1; b <= 7; ++b) {
      Rational x = q(a, b);
      BigInt f = floor(x);
      BigInt c = ceil(x);
      EXPECT_LE(Rational(f), x);
      EXPECT_GT(Rational(f + 1), x);
      EXPECT_GE(Rational(c), x);
      EXPECT_LT(Rational(c - 1), x);
    }
  }
}

TEST(Rational, StringRoundTrip) {
  for (int a = -30; a <= 30; a += 7) {
    for (int b = 1; b <= 9; ++b) EXPECT_EQ(parse_rational(to_string(q(a, b))), q(a, b));
  }
}

// Set systems

TEST(SetSystem, UniformCardinality) {
  auto u = SetSystem::uniform(5, 2);
  EXPECT_FALSE(is_independent(u, ElementSet{0, 1, 2}));
  EXPECT_TRUE(is_independent(u, ElementSet{0, 4}));
  EXPECT_EQ(rank(u, ElementSet{0, 1, 2, 3}), 2);
  EXPECT_TRUE(is_matroid(u));
}

TEST(SetSystem, GraphicForestsAndRank) {
  auto fig3 = SetSystem::graphic(6, kFig3Edges);
  // e1, e3, e6, e8, e10 form a spanning tree.
  EXPECT_TRUE(is_independent(fig3, ElementSet{0, 2, 5, 7, 9}));
  EXPECT_EQ(full_rank(fig3), 5);
  auto triangle = SetSystem::graphic(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_EQ(rank(triangle, ElementSet{0, 1, 2}), 2);
  EXPECT_FALSE(is_independent(triangle, ElementSet{0, 1, 2}));
}

TEST(SetSystem, LaminarCaps) {
  auto lam = SetSystem::laminar(3, {{0, 1}}, {1});
  EXPECT_FALSE(is_independent(lam, ElementSet{0, 1}));
  EXPECT_TRUE(is_independent(lam, ElementSet{0, 2}));
  EXPECT_THROW(SetSystem::laminar(3, {{0, 1}, {1, 2}}, {1, 1}), DomainError);
}

TEST(SetSystem, PartitionAndTransversal) {
  auto p = SetSystem::partition(4, {{0, 1}, {2, 3}}, {1, 2});
  EXPECT_TRUE(is_independent(p, ElementSet{0, 2, 3}));
  EXPECT_FALSE(is_independent(p, ElementSet{0, 1}));
  // Left 0 and 1 both only reach right vertex 0.
  auto t = SetSystem::transversal(2, {{0}, {0}, {0, 1}});
  EXPECT_FALSE(is_independent(t, ElementSet{0, 1}));
  EXPECT_TRUE(is_independent(t, ElementSet{0, 2}));
}

TEST(SetSystem, ExplicitSystemsAndMatroidDetection) {
  auto ex = SetSystem::explicit_system(3, {{}, {0}, {1}, {1, 2}});
  EXPECT_TRUE(is_independent(ex, ElementSet{2}));
  EXPECT_FALSE(is_independent(ex, ElementSet{0, 1}));
  EXPECT_FALSE(is_matroid(ex));
  std::vector<std::int64_t> w = {5, 1, 1};
  EXPECT_EQ(max_weight_independent(ex, w), (ElementSet{0}));
  auto m = SetSystem::explicit_system(3, {{0, 1}, {0, 2}, {1, 2}});
  EXPECT_TRUE(is_matroid(m));
}

TEST(SetSystem, RankMatchesBruteForceAndIsSubmodular) {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    RandomParams p;
    p.n = static_cast<int>(uniform_int(rng, 2, 8));
    p.k = static_cast<int>(uniform_int(rng, 1, p.n));
    auto kind = random_kind_names()[uniform_index(rng, 6)].second;  // matroid kinds
    auto inst = gen_random_normalized(kind, p, rng());
    const auto& sys = inst.system();
    const std::size_t n = sys.size();
    for (int i = 0; i < 20; ++i) {
      auto a = mask_set(static_cast<std::uint32_t>(uniform_index(rng, 1u << n)), n);
      auto b = mask_set(static_cast<std::uint32_t>(uniform_index(rng, 1u << n)), n);
      ASSERT_EQ(rank(sys, a), brute_rank(sys, a));
      EXPECT_LE(rank(sys, set_union(a, b)) + rank(sys, set_intersection(a, b)), rank(sys, a) + rank(sys, b));
    }
  }
}

TEST(SetSystem, DirectSumCombinesParts) {
  auto d = SetSystem::direct_sum({{2, std::make_shared<const SetSystem>(SetSystem::uniform(2, 1))},
                                  {3, std::make_shared<const SetSystem>(SetSystem::uniform(3, 2))}});
  EXPECT_EQ(d.size(), 5u);
  EXPECT_TRUE(is_independent(d, ElementSet{0, 2, 3}));
  EXPECT_FALSE(is_independent(d, ElementSet{0, 1}));
  EXPECT_EQ(full_rank(d), 3);
}

TEST(SetSystem, BinomialOracleFindsSetContainingTarget) {
  auto inst = gen_binomial_lb(2);
  for (std::size_t e = 0; e < inst.size(); ++e) {
    std::vector<int> w(inst.size(), 0);
    w[e] = 1;
    auto s = max_weight_independent(inst.system(), w);
    EXPECT_TRUE(contains(s, static_cast<ElementId>(e)));
    EXPECT_TRUE(is_independent(inst.system(), s));
  }
}

TEST(SetSystem, CompleteToBasis) {
  auto u = SetSystem::uniform(3, 2);
  EXPECT_EQ(complete_to_basis(u, ElementSet{2}), (ElementSet{0, 2}));
  EXPECT_THROW(complete_to_basis(u, ElementSet{0, 1, 2}), DomainError);
}

// Matroid intersection

TEST(MatroidIntersection, SmallCases) {
  EXPECT_EQ(matroid_intersection(SetSystem::uniform(5, 3), SetSystem::uniform(5, 3)).size(), 3u);
  auto tri = SetSystem::graphic(3, {{0, 1}, {1, 2}, {0, 2}});
  auto part = SetSystem::partition(3, {{0}, {1, 2}}, {1, 1});
  auto common = matroid_intersection(tri, part);
  EXPECT_EQ(common.size(), 2u);
  EXPECT_TRUE(is_independent(tri, common));
  EXPECT_TRUE(is_independent(part, common));
  EXPECT_THROW(matroid_intersection(SetSystem::explicit_system(3, {{0}, {1, 2}}), SetSystem::uniform(3, 1)),
               UnsupportedError);
}

// Instances

TEST(Instance, HorizonIsLcmOfDenominators) {
  EXPECT_EQ(lcm_of_denominators({q(4, 11)}).period, 11);
  EXPECT_EQ(lcm_of_denominators({q(1, 10), q(1, 5), q(1, 2), q(1, 2), q(3, 10)}).period, 10);
  EXPECT_EQ(lcm_of_denominators({q(4, 11), q(1, 2)}).period, 22);
  EXPECT_THROW(lcm_of_denominators({q(0)}), DomainError);
  std::vector<Rational> primes;
  for (int p : {101, 103, 107, 109, 113, 127, 131, 137, 139, 149}) primes.push_back(q(1, p));
  EXPECT_THROW(lcm_of_denominators(primes), HorizonTooLarge);
}

TEST(Instance, StripZeroRate) {
  CbgtInstance inst(SetSystem::uniform(2, 1), {q(0), q(1, 2)});
  auto s = strip_zero_rate(inst);
  EXPECT_EQ(s.instance.size(), 1u);
  EXPECT_EQ(s.removed, (std::vector<ElementId>{0}));
  EXPECT_EQ(s.original_id, (std::vector<ElementId>{1}));
  auto again = strip_zero_rate(s.instance);
  EXPECT_TRUE(again.removed.empty());
  EXPECT_EQ(again.instance.growth(), s.instance.growth());

  CbgtInstance g(SetSystem::graphic(3, {{0, 1}, {1, 2}, {0, 2}}), {q(1, 2), q(0), q(1, 2)});
  auto sg = strip_zero_rate(g);
  EXPECT_EQ(full_rank(sg.instance.system()), 2);
  EXPECT_TRUE(is_independent(sg.instance.system(), ElementSet{0, 1}));
}

TEST(Instance, ValidateGrowth) {
  CbgtInstance ex1(SetSystem::uniform(5, 2), {q(1, 10), q(1, 5), q(1, 2), q(1, 2), q(3, 10)});
  auto v = validate_growth(ex1);
  EXPECT_TRUE(v.valid);
  EXPECT_TRUE(v.fully_verified);
  CbgtInstance bad(SetSystem::uniform(2, 1), {q(3, 5), q(3, 5)});
  auto b = validate_growth(bad);
  EXPECT_FALSE(b.valid);
  EXPECT_EQ(b.violating_set, (ElementSet{0, 1}));
  EXPECT_TRUE(validate_growth(gen_binomial_lb(2)).valid);
  // Explicit systems need a witness.
  CbgtInstance no_witness(SetSystem::explicit_system(2, {{0, 1}}), {q(1, 2), q(1, 2)});
  EXPECT_FALSE(validate_growth(no_witness).valid);
}

TEST(Instance, WitnessFromCoverIsExact) {
  auto sys = SetSystem::uniform(3, 1);
  std::vector<Rational> g = {q(1, 3), q(1, 4), q(1, 6)};
  ConvexCombination cover = {{{0}, q(1, 2)}, {{1}, q(1, 4)}, {{2}, q(1, 4)}};
  auto w = exact_witness_from_cover(sys, g, cover);
  EXPECT_TRUE(check_witness(sys, g, w).valid);
}

// Simulator

Schedule periodic(std::vector<ElementSet> core) { return Schedule{std::move(core), true}; }

TEST(Simulator, AlternatingScheduleHeightAndDrift) {
  CbgtInstance inst(SetSystem::uniform(2, 1), {q(9, 10), q(1, 10)});
  auto s = periodic({{0}, {1}});
  auto rep = simulate(inst, s, 20, {10});
  EXPECT_EQ(rep.max_height, q(9, 5));
  EXPECT_FALSE(rep.max_discrepancy().has_value());
  // A(b, 10) = 5 against 10 * 1/10 = 1.
  EXPECT_EQ(rep.per_element[1].samples.front(), std::make_pair(std::int64_t{10}, std::int64_t{5}));
  auto v = check_disc_height_implication(rep);
  EXPECT_FALSE(v.antecedent);
  EXPECT_TRUE(v.holds);
}

TEST(Simulator, ExampleOneSchedule) {
  CbgtInstance inst(SetSystem::uniform(5, 2), {q(1, 10), q(1, 5), q(1, 2), q(1, 2), q(3, 10)});
  auto rep = simulate(inst, periodic({{1, 3}, {2, 4}, {0, 3}, {2, 4}}), 8);
  EXPECT_TRUE(rep.valid);
  EXPECT_TRUE(rep.exact);
  EXPECT_EQ(rep.max_height, 1);
  EXPECT_EQ(*rep.per_element[2].recurrence, 2);
}

TEST(Simulator, SingleElementEveryDay) {
  CbgtInstance inst(SetSystem::uniform(1, 1), {q(1)});
  auto rep = simulate(inst, periodic({{0}}), 5);
  EXPECT_EQ(rep.max_height, 1);
  EXPECT_EQ(*rep.max_discrepancy(), 0);
}

TEST(Simulator, FlagsInvalidCuts) {
  CbgtInstance inst(SetSystem::uniform(2, 1), {q(1, 2), q(1, 2)});
  auto rep = simulate(inst, periodic({{0}, {0, 1}}), 4);
  EXPECT_FALSE(rep.valid);
  EXPECT_EQ(*rep.first_invalid_step, 2);
}

TEST(Simulator, HeightAgreesWithPlainReplay) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    RandomParams p;
    p.n = static_cast<int>(uniform_int(rng, 1, 6));
    p.k = static_cast<int>(uniform_int(rng, 1, p.n));
    auto inst = gen_random_normalized(RandomKind::kUniform, p, rng());
    Schedule s;
    s.periodic = uniform_index(rng, 2) == 1;
    auto len = uniform_int(rng, 1, 8);
    for (std::int64_t t = 0; t < len; ++t) {
      auto x = mask_set(static_cast<std::uint32_t>(uniform_index(rng, 1u << inst.size())), inst.size());
      s.core.push_back(x);
    }
    const std::int64_t horizon = s.periodic ? 3 * len : len;
    auto rep = simulate(inst, s, horizon);
    auto brute = bench::oracle::replay(inst, s, horizon);
    EXPECT_EQ(rep.valid, brute.valid);
    EXPECT_EQ(rep.trajectory_max_height, brute.max_height);
    if (!rep.exact) continue;
    // Discrepancy below 1 only bounds the gap between cuts by 2/g + 1 days.
    for (std::size_t e = 0; e < inst.size(); ++e) {
      const auto& r = rep.per_element[e];
      if (r.discrepancy && *r.discrepancy < 1) {
        EXPECT_LT(r.max_height, 2 + inst.growth()[e]);
      }
    }
  }
}

// JSON

TEST(Json, InstanceRoundTripForEveryKind) {
  for (const auto& [name, kind] : random_kind_names()) {
    RandomParams p;
    p.n = 5;
    auto inst = gen_random_normalized(kind, p, 3);
    auto j = instance_to_json(inst);
    auto back = instance_from_json(parse_json(j.dump()));
    EXPECT_EQ(instance_to_json(back), j) << name;
  }
  auto d = SetSystem::direct_sum({{2, std::make_shared<const SetSystem>(SetSystem::uniform(2, 1))},
                                  {1, std::make_shared<const SetSystem>(SetSystem::uniform(1, 1))}});
  CbgtInstance inst(d, {q(1, 2), q(1, 2), q(1)});
  EXPECT_EQ(instance_to_json(instance_from_json(instance_to_json(inst))), instance_to_json(inst));
}

TEST(Json, ParseErrorsCarryLocation) {
  try {
    parse_json("{\"elements\": [1, 2", "x.json");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("x.json"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
  EXPECT_THROW(instance_from_json(parse_json(R"({"elements": 2, "system": {"uniform": {"k": 1}}})")), ParseError);
  EXPECT_THROW(rational_from_json(parse_json(R"("x/2")")), ParseError);
}

TEST(Json, AcceptsCountsAndStringRates) {
  auto inst = instance_from_json(parse_json(R"({"elements": 2, "system": {"uniform": {"k": 1}}, "growth": ["1/2", 0]})"));
  EXPECT_EQ(inst.labels(), (std::vector<std::string>{"e0", "e1"}));
  EXPECT_EQ(inst.growth()[0], q(1, 2));
  Schedule s{{{0}, {}}, true};
  EXPECT_EQ(schedule_from_json(schedule_to_json(s)), s);
}

}  // namespace
}  // namespace cbgt
