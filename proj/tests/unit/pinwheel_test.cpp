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

#include <cstdint>
#include <functional>
#include <map>

#include "cbgt/cbgt.hpp"

namespace cbgt {
namespace {

Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

CpsInstance one_uniform(std::vector<std::int64_t> a) {
  const std::size_t n = a.size();
  return CpsInstance(SetSystem::uniform(n, 1), std::move(a));
}

// Brute force for 1-uniform pinwheel: depth-first over "days since service"
// states, each capped by its period; schedulable iff some reachable state
// lies on a cycle.
bool brute_schedulable(const std::vector<std::int64_t>& a) {
  const std::size_t n = a.size();
  std::map<std::vector<std::int64_t>, int> color;  // 1 on stack, 2 done
  std::function<bool(const std::vector<std::int64_t>&)> dfs = [&](const std::vector<std::int64_t>& s) {
    color[s] = 1;
    for (std::size_t pick = 0; pick < n; ++pick) {
      std::vector<std::int64_t> t(n);
      bool ok = true;
      for (std::size_t e = 0; e < n; ++e) {
        t[e] = e == pick ? 0 : s[e] + 1;
        if (t[e] >= a[e]) ok = false;
      }
      if (!ok) continue;
      auto it = color.find(t);
      if (it != color.end() && it->second == 1) return true;
      if (it == color.end() && dfs(t)) return true;
    }
    color[s] = 2;
    return false;
  };
  return dfs(std::vector<std::int64_t>(n, 0));
}

TEST(Reduction, PeriodsFromRates) {
  CbgtInstance halves(SetSystem::uniform(2, 1), {q(1, 2), q(1, 2)});
  EXPECT_EQ(cps_from_cbgt(halves, q(2)).periods(), (std::vector<std::int64_t>{4, 4}));
  CbgtInstance mixed(SetSystem::uniform(3, 2), {q(1), q(2, 3), q(1, 3)});
  EXPECT_EQ(cps_from_cbgt(mixed, q(2)).periods(), (std::vector<std::int64_t>{2, 3, 6}));
  CbgtInstance zero(SetSystem::uniform(2, 1), {q(1), q(0)});
  EXPECT_THROW(cps_from_cbgt(zero, q(2)), DomainError);
}

TEST(Verify, AlternationAndViolations) {
  auto cps = one_uniform({2, 2});
  EXPECT_TRUE(verify_pinwheel(cps, Schedule{{{0}, {1}}, true}).ok);
  auto bad = verify_pinwheel(cps, Schedule{{{0}, {0}, {1}}, true});
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.element, 1);
  EXPECT_FALSE(verify_pinwheel(cps, Schedule{{{0, 1}}, true}).ok);
  // The wrap from the end of the core back to day 1 counts.
  Schedule wrap{{{0}, {0}, {1}, {1}, {0}, {0}}, true};
  auto w = verify_pinwheel(one_uniform({3, 3}), wrap);
  EXPECT_FALSE(w.ok);
  EXPECT_EQ(w.element, 1);
}

TEST(Decide, KnownCases) {
  for (std::int64_t x = 6; x <= 10; ++x) EXPECT_FALSE(decide_schedulable(one_uniform({2, 3, x})).schedulable) << x;
  EXPECT_FALSE(decide_schedulable(one_uniform({2, 3, 5})).schedulable);
  for (auto a : {std::vector<std::int64_t>{2, 2}, {2, 4, 4}, {3, 3, 3}, {2, 4, 8, 8}}) {
    auto cps = one_uniform(a);
    auto d = decide_schedulable(cps);
    ASSERT_TRUE(d.schedulable);
    EXPECT_TRUE(verify_pinwheel(cps, d.witness).ok);
  }
}

TEST(Decide, MatchesBruteForce) {
  Rng rng(7);
  for (int trial = 0; trial < 120; ++trial) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 4));
    std::vector<std::int64_t> a(n);
    for (auto& x : a) x = uniform_int(rng, 1, 7);
    auto d = decide_schedulable(one_uniform(a));
    EXPECT_EQ(d.schedulable, brute_schedulable(a));
    if (d.schedulable) {
      EXPECT_TRUE(verify_pinwheel(one_uniform(a), d.witness).ok);
    }
  }
}

TEST(Decide, GeneralSystems) {
  // Two disjoint pairs, one cut per pair per day.
  CpsInstance part(SetSystem::partition(4, {{0, 1}, {2, 3}}, {1, 1}), {2, 2, 2, 2});
  EXPECT_TRUE(decide_schedulable(part).schedulable);
  CpsInstance tight(SetSystem::partition(4, {{0, 1}, {2, 3}}, {1, 1}), {1, 2, 2, 2});
  EXPECT_FALSE(decide_schedulable(tight).schedulable);
  EXPECT_THROW(decide_schedulable(one_uniform({2, 3, 7, 9, 11, 13, 17, 19}), 100), BudgetError);
}

TEST(Density, ClosedFormAndLp) {
  auto cps = one_uniform({2, 3, 6});
  EXPECT_EQ(density(cps).rho, 1);
  auto lp = density(cps, DensityOptions{true});
  EXPECT_EQ(lp.rho, 1);
  EXPECT_EQ(check_density_certificate(cps, lp.certificate), 1);
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 6));
    std::vector<std::int64_t> a(n);
    Rational closed = 0;
    for (auto& x : a) {
      x = uniform_int(rng, 1, 12);
      closed += q(1, x);
    }
    auto r = density(one_uniform(a), DensityOptions{true});
    EXPECT_EQ(r.rho, closed);
    EXPECT_EQ(check_density_certificate(one_uniform(a), r.certificate), closed);
  }
}

TEST(Density, GraphicTriangle) {
  // Three edges, forests of size 2, every edge needs 1/2: rho = 3/4.
  CpsInstance tri(SetSystem::graphic(3, {{0, 1}, {1, 2}, {0, 2}}), {2, 2, 2});
  auto r = density(tri);
  EXPECT_EQ(r.rho, q(3, 4));
  EXPECT_EQ(check_density_certificate(tri, r.certificate), q(3, 4));
  EXPECT_THROW(check_density_certificate(tri, {{{0, 1, 2}, q(1)}}), InstanceError);
  EXPECT_THROW(check_density_certificate(tri, {{{0, 1}, q(1, 2)}}), InstanceError);
}

TEST(Generators, BinomialSizes) {
  auto one = gen_binomial_lb(1);
  EXPECT_EQ(one.size(), 2u);
  auto two = gen_binomial_lb(2);
  EXPECT_EQ(two.size(), 6u);
  for (const auto& g : two.growth()) EXPECT_EQ(g, q(1, 2));
  EXPECT_TRUE(validate_growth(two).valid);
  EXPECT_THROW(gen_binomial_lb(0), DomainError);
}

TEST(Generators, Hypercube) {
  auto one = gen_hypercube_lb(1);
  EXPECT_EQ(one.size(), 1u);
  EXPECT_EQ(one.growth()[0], q(1));
  auto two = gen_hypercube_lb(2);
  EXPECT_EQ(two.size(), 3u);
  for (const auto& g : two.growth()) EXPECT_EQ(g, q(2, 3));
  EXPECT_TRUE(validate_growth(two).valid);
  EXPECT_EQ(two.labels(), (std::vector<std::string>{"01", "10", "11"}));
}

TEST(Generators, TightPair) {
  auto p = gen_tight_pair(q(1, 4));
  EXPECT_EQ(p.growth(), (std::vector<Rational>{q(3, 4), q(1, 4)}));
  EXPECT_THROW(gen_tight_pair(q(0)), DomainError);
  EXPECT_THROW(gen_tight_pair(q(1)), DomainError);
}

TEST(Generators, RandomInstancesAreValidAndReproducible) {
  for (const auto& [name, kind] : random_kind_names()) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      RandomParams p;
      p.n = 3 + static_cast<int>(seed % 5);
      auto a = gen_random_normalized(kind, p, seed);
      auto b = gen_random_normalized(kind, p, seed);
      EXPECT_EQ(instance_to_json(a).dump(), instance_to_json(b).dump()) << name;
      EXPECT_TRUE(validate_growth(a).valid) << name << " seed " << seed;
      EXPECT_EQ(parse_random_kind(name), kind);
    }
  }
  EXPECT_THROW(parse_random_kind("nope"), DomainError);
}

}  // namespace
}  // namespace cbgt
