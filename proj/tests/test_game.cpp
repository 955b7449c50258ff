// Copyright 2026 The lw-lab Authors.
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

#include <random>

#include "lwlab/game.hpp"

namespace lwlab {
namespace {

GameInstance two_by_two() {
  GameInstance g;
  g.num_items = 2;
  g.bidders = {{Valuation::additive({10, 0}), 9.9}, {Valuation::additive({10, 10}), 10}};
  return g;
}

TEST(Valuation, AdditiveSingleItem) {
  EXPECT_DOUBLE_EQ(eval_valuation(Valuation::additive({10, 0}), ShareBundle{{1, 0}}, 1), 10.0);
}

TEST(Valuation, EmptyBundleIsZero) {
  EXPECT_DOUBLE_EQ(eval_valuation(Valuation::additive({3, 4}), ShareBundle::empty(2), 2), 0.0);
  EXPECT_DOUBLE_EQ(eval_valuation(Valuation::xos({{3, 0}, {0, 4}}), ShareBundle::empty(2), 2),
                   0.0);
}

TEST(Valuation, XosTakesBestClause) {
  EXPECT_DOUBLE_EQ(eval_valuation(Valuation::xos({{3, 0}, {0, 4}}), ShareBundle{{2, 1}}, 2),
                   3.0);
}

TEST(Valuation, MaximizingClause) {
  EXPECT_EQ(maximizing_clause(Valuation::xos({{3, 0}, {0, 4}}), ShareBundle{{2, 0}}, 2), 0);
  EXPECT_EQ(maximizing_clause(Valuation::xos({{1, 1}}), ShareBundle{{1, 1}}, 1), 0);
  EXPECT_EQ(maximizing_clause(Valuation::xos({{2, 2}, {2, 2}}), ShareBundle{{1, 1}}, 1), 0);
  EXPECT_EQ(maximizing_clause(Valuation::xos({{3, 0}, {0, 4}}), ShareBundle{{0, 2}}, 2), 1);
}

TEST(Valuation, MaximizingClauseRejectsAdditive) {
  EXPECT_THROW(maximizing_clause(Valuation::additive({1, 1}), ShareBundle{{1, 1}}, 1),
               ModelError);
}

TEST(Valuation, ItemValuesRejectsXos) {
  EXPECT_THROW(Valuation::xos({{1, 2}}).item_values(), ModelError);
}

TEST(Valuation, MaxItemValue) {
  auto v = Valuation::xos({{3, 0}, {1, 4}});
  EXPECT_DOUBLE_EQ(v.max_item_value(0), 3.0);
  EXPECT_DOUBLE_EQ(v.max_item_value(1), 4.0);
}

TEST(ValuationProperty, MonotoneInBundles) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<double>> clauses(1 + trial % 3, std::vector<double>(3));
    for (auto& c : clauses) {
      for (auto& x : c) x = u(rng);
    }
    auto v = Valuation::xos(clauses);
    ShareBundle a{{static_cast<int>(rng() % 3), static_cast<int>(rng() % 3),
                   static_cast<int>(rng() % 3)}};
    ShareBundle b = a;
    for (auto& c : b.counts) c += static_cast<int>(rng() % 2);
    EXPECT_LE(eval_valuation(v, a, 3), eval_valuation(v, b, 3) + 1e-12);
  }
}

TEST(ValuationProperty, AdditiveFullBundleIsSum) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(4);
    for (auto& x : v) x = u(rng);
    const int h = 1 + trial % 4;
    double sum = v[0] + v[1] + v[2] + v[3];
    EXPECT_NEAR(eval_valuation(Valuation::additive(v), ShareBundle{{h, h, h, h}}, h), sum,
                1e-12);
  }
}

TEST(ValuationProperty, SingleClauseXosEqualsAdditive) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(3);
    for (auto& x : v) x = u(rng);
    ShareBundle b{{static_cast<int>(rng() % 4), static_cast<int>(rng() % 4),
                   static_cast<int>(rng() % 4)}};
    EXPECT_DOUBLE_EQ(eval_valuation(Valuation::additive(v), b, 3),
                     eval_valuation(Valuation::xos({v}), b, 3));
  }
}

TEST(Validate, WellFormedInstanceHasNoViolations) {
  EXPECT_TRUE(validate_instance(two_by_two()).empty());
  EXPECT_NO_THROW(require_valid(two_by_two()));
}

TEST(Validate, NegativeBudgetNamesBidderAndField) {
  auto g = two_by_two();
  g.bidders[1].budget = -1;
  auto r = validate_instance(g);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].bidder, 1);
  EXPECT_EQ(r[0].field, "budget");
  EXPECT_THROW(require_valid(g), ModelError);
}

TEST(Validate, WrongLengthValuationNamesBidder) {
  auto g = two_by_two();
  g.bidders[0].valuation = Valuation::additive({1, 2, 3});
  auto r = validate_instance(g);
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r[0].bidder, 0);
  EXPECT_EQ(r[0].field, "valuation");
}

TEST(Validate, RejectsBadGlobalFields) {
  GameInstance g = two_by_two();
  g.shares_per_item = 0;
  g.bid_grid_step = 0;
  EXPECT_GE(validate_instance(g).size(), 2u);
}

TEST(Grid, UnitsAndValues) {
  EXPECT_EQ(grid_units(9.95, 0.05), 199);
  EXPECT_EQ(grid_units(0.07, 0.05), -1);
  EXPECT_EQ(grid_units(-0.05, 0.05), -1);
  EXPECT_DOUBLE_EQ(grid_value(199, 0.05), 9.95);
  EXPECT_DOUBLE_EQ(grid_value(3, 0.1), 0.3);
}

}  // namespace
}  // namespace lwlab
