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

#include <algorithm>
#include <numeric>
#include <random>

#include "lwlab/instances.hpp"
#include "lwlab/mechanisms.hpp"

namespace lwlab {
namespace {

GameInstance single_item(int n, int h = 1, double budget = 10.0) {
  GameInstance g;
  g.num_items = 1;
  g.shares_per_item = h;
  for (int i = 0; i < n; ++i) g.bidders.push_back({Valuation::additive({10}), budget});
  return g;
}

const BidProfile kTightSecond = {{{0}, {0}}, {{9.95}, {0.05}}};

TEST(FirstPrice, TightnessProfile) {
  auto g = gen_tightness(0.1).game;
  auto o = run_first_price(g, kTightSecond, TieBreakRule::lexicographic());
  EXPECT_EQ(o.winner[0][0], 1);
  EXPECT_EQ(o.winner[1][0], 1);
  EXPECT_NEAR(o.payment[1], 10.0, 1e-12);
  EXPECT_EQ(o.payment[0], 0.0);
}

TEST(FirstPrice, AllZeroBidsAllocateNothing) {
  auto g = gen_tightness(0.1).game;
  auto o = run_first_price(g, zero_profile(g), TieBreakRule::lexicographic());
  for (const auto& item : o.winner) {
    for (int w : item) EXPECT_EQ(w, kNoWinner);
  }
  EXPECT_EQ(o.payment, std::vector<double>(2, 0.0));
}

TEST(FirstPrice, LexicographicTie) {
  auto g = single_item(2);
  auto o = run_first_price(g, {{{1.0}}, {{1.0}}}, TieBreakRule::lexicographic());
  EXPECT_EQ(o.winner[0][0], 0);
  EXPECT_DOUBLE_EQ(o.payment[0], 1.0);
  auto o2 = run_first_price(g, {{{1.0}}, {{1.0}}}, TieBreakRule::lexicographic({1, 0}));
  EXPECT_EQ(o2.winner[0][0], 1);
}

TEST(SecondPrice, TightnessProfile) {
  auto g = gen_tightness(0.1).game;
  auto o = run_second_price(g, kTightSecond, TieBreakRule::lexicographic());
  EXPECT_EQ(o.winner[0][0], 1);
  EXPECT_EQ(o.winner[1][0], 1);
  EXPECT_EQ(o.payment[1], 0.0);
  EXPECT_DOUBLE_EQ(utility(g, 1, o), 20.0);
}

TEST(SecondPrice, SingleBidderPaysZero) {
  auto g = single_item(1);
  auto o = run_second_price(g, {{{3.0}}}, TieBreakRule::lexicographic());
  EXPECT_EQ(o.winner[0][0], 0);
  EXPECT_EQ(o.payment[0], 0.0);
}

TEST(SecondPrice, PaysSecondHighest) {
  auto g = single_item(2);
  auto o = run_second_price(g, {{{5.0}}, {{2.0}}}, TieBreakRule::lexicographic());
  EXPECT_EQ(o.winner[0][0], 0);
  EXPECT_DOUBLE_EQ(o.payment[0], 2.0);
}

TEST(HouseClearing, ServesInPriceOrder) {
  auto g = single_item(2, 10);
  HouseDemand d = {{{6, 1.0}}, {{6, 0.9}}};
  auto o = run_house_clearing(g, d, TieBreakRule::lexicographic());
  EXPECT_EQ(o.bundles[0].counts[0], 6);
  EXPECT_EQ(o.bundles[1].counts[0], 4);
  EXPECT_NEAR(o.payment[0], 6.0, 1e-12);
  EXPECT_NEAR(o.payment[1], 3.6, 1e-12);
}

TEST(HouseClearing, SingleDemand) {
  auto g = single_item(1, 10);
  auto o = run_house_clearing(g, {{{4, 0.5}}}, TieBreakRule::lexicographic());
  EXPECT_EQ(o.bundles[0].counts[0], 4);
  EXPECT_DOUBLE_EQ(o.payment[0], 2.0);
}

TEST(HouseClearing, EqualPricesFollowLexicographicOrder) {
  auto g = single_item(2, 2);
  HouseDemand d = {{{2, 1.0}}, {{2, 1.0}}};
  auto a = run_house_clearing(g, d, TieBreakRule::lexicographic());
  EXPECT_EQ(a.bundles[0].counts[0], 2);
  auto b = run_house_clearing(g, d, TieBreakRule::lexicographic({1, 0}));
  EXPECT_EQ(b.bundles[1].counts[0], 2);
}

TEST(HouseClearing, ProfileRowsMatchDemands) {
  auto g = single_item(2, 10);
  BidProfile b(2, BidRow(1, std::vector<double>(10, 0.0)));
  for (int l = 0; l < 6; ++l) b[0][0][l] = 1.0;
  for (int l = 0; l < 6; ++l) b[1][0][l] = 0.9;
  auto o = run_mechanism(g, Mechanism::kHouseClearing, b, TieBreakRule::lexicographic());
  EXPECT_EQ(o.bundles[1].counts[0], 4);
  EXPECT_EQ(demand_from_row(b[0])[0], (ShareDemand{6, 1.0}));
  EXPECT_EQ(row_from_demand(demand_from_row(b[0]), 10), b[0]);
  BidRow mixed_prices = {{1.0, 0.5}};
  EXPECT_THROW(demand_from_row(mixed_prices), InputError);
}

TEST(Utility, Cases) {
  auto g = single_item(1, 1, 1.0);
  Outcome none{{{kNoWinner}}, {0.0}, {ShareBundle{{0}}}};
  EXPECT_EQ(utility(g, 0, none), 0.0);
  Outcome over{{{0}}, {1.5}, {ShareBundle{{1}}}};
  EXPECT_EQ(utility(g, 0, over), kNegInfinity);
  Outcome within{{{0}}, {1.0 + 1e-10}, {ShareBundle{{1}}}};
  EXPECT_NEAR(utility(g, 0, within), 9.0, 1e-9);
}

TEST(Assumptions, NoOverbidding) {
  GameInstance g = single_item(1);
  EXPECT_TRUE(check_no_overbidding(g, 0, {{{10.0}}}));
  EXPECT_FALSE(check_no_overbidding(g, 0, {{{10.05}}}));
  g.bidders[0].valuation = Valuation::additive({0});
  EXPECT_FALSE(check_no_overbidding(g, 0, {{{0.05}}}));
}

TEST(Assumptions, NoOverbiddingXosUsesBundles) {
  GameInstance g;
  g.num_items = 2;
  g.bidders = {{Valuation::xos({{3, 0}, {0, 3}}), 10}};
  EXPECT_TRUE(row_no_overbidding(g, 0, {{3.0}, {0.0}}));
  // Each bid is within a clause value, but the pair exceeds the value of the
  // bundle of both items.
  EXPECT_FALSE(row_no_overbidding(g, 0, {{2.0}, {2.0}}));
}

TEST(Assumptions, NoOverbudget) {
  GameInstance g;
  g.num_items = 2;
  g.bidders = {{Valuation::additive({1, 1}), 1.0}};
  EXPECT_TRUE(check_no_overbudget(g, 0, {{{0.5}, {0.5}}}));
  EXPECT_FALSE(check_no_overbudget(g, 0, {{{0.55}, {0.5}}}));
  EXPECT_TRUE(check_no_overbudget(g, 0, {{{0.0}, {0.0}}}));
}

TEST(TieBreak, ParseAndPrint) {
  EXPECT_EQ(TieBreakRule::parse("lex").to_string(), "lex");
  EXPECT_EQ(TieBreakRule::parse("lex:2,0,1").to_string(), "lex:2,0,1");
  EXPECT_EQ(TieBreakRule::parse("uniform:7").to_string(), "uniform:7");
  EXPECT_THROW(TieBreakRule::parse("coin"), InputError);
  EXPECT_THROW(TieBreakRule::lexicographic({0, 0}).validate(2), InputError);
}

TEST(Validation, RejectsBadProfiles) {
  auto g = single_item(2);
  EXPECT_THROW(run_first_price(g, {{{1.0}}}, TieBreakRule::lexicographic()), InputError);
  EXPECT_THROW(run_first_price(g, {{{-1.0}}, {{0.0}}}, TieBreakRule::lexicographic()),
               InputError);
}

class MechanismProperty : public ::testing::Test {
 protected:
  GameInstance random_game(std::mt19937_64& rng) {
    GameInstance g;
    g.num_items = 1 + static_cast<int>(rng() % 3);
    g.shares_per_item = 1 + static_cast<int>(rng() % 3);
    g.bid_grid_step = 0.25;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
      g.bidders.push_back({Valuation::additive(std::vector<double>(g.num_items, 2.0)), 3.0});
    }
    return g;
  }
  BidProfile random_profile(const GameInstance& g, std::mt19937_64& rng) {
    BidProfile b = zero_profile(g);
    for (auto& row : b) {
      for (auto& item : row) {
        for (auto& x : item) x = 0.25 * static_cast<double>(rng() % 5);
      }
    }
    return b;
  }
};

TEST_F(MechanismProperty, FeasibilityPaymentsAndDeterminism) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = random_game(rng);
    auto b = random_profile(g, rng);
    auto t = trial % 2 ? TieBreakRule::uniform(trial) : TieBreakRule::lexicographic();
    auto fp = run_first_price(g, b, t);
    auto sp = run_second_price(g, b, t);
    EXPECT_EQ(fp.winner, run_first_price(g, b, t).winner);
    std::vector<double> won(g.num_bidders(), 0.0);
    for (int j = 0; j < g.num_items; ++j) {
      for (int l = 0; l < g.shares_per_item; ++l) {
        int w = fp.winner[j][l];
        if (w != kNoWinner) won[w] += b[w][j][l];
        EXPECT_EQ(w, sp.winner[j][l]);
      }
    }
    for (int i = 0; i < g.num_bidders(); ++i) {
      EXPECT_NEAR(fp.payment[i], won[i], 1e-12);
      EXPECT_GE(sp.payment[i], 0.0);
      EXPECT_LE(sp.payment[i], fp.payment[i] + 1e-12);
      int held = 0;
      for (int c : fp.bundles[i].counts) held += c;
      int listed = 0;
      for (const auto& item : fp.winner) listed += std::count(item.begin(), item.end(), i);
      EXPECT_EQ(held, listed);
    }
  }
}

TEST_F(MechanismProperty, HouseWithDistinctPricesIgnoresTies) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_game(rng);
    HouseDemand d(g.num_bidders(), DemandRow(g.num_items));
    for (int j = 0; j < g.num_items; ++j) {
      std::vector<int> prices(g.num_bidders());
      for (int i = 0; i < g.num_bidders(); ++i) prices[i] = i + 1;
      std::shuffle(prices.begin(), prices.end(), rng);
      for (int i = 0; i < g.num_bidders(); ++i) {
        d[i][j] = {static_cast<int>(rng() % (g.shares_per_item + 1)), 0.25 * prices[i]};
      }
    }
    auto a = run_house_clearing(g, d, TieBreakRule::lexicographic());
    auto b = run_house_clearing(g, d, TieBreakRule::uniform(trial));
    auto c = run_house_clearing(g, d, TieBreakRule::lexicographic(
                                          [&] {
                                            std::vector<int> o(g.num_bidders());
                                            std::iota(o.rbegin(), o.rend(), 0);
                                            return o;
                                          }()));
    EXPECT_EQ(a.winner, b.winner);
    EXPECT_EQ(a.winner, c.winner);
    EXPECT_EQ(a.payment, b.payment);
  }
}

}  // namespace
}  // namespace lwlab
