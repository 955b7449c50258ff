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

// Exact evaluation of one bidder's outcome lottery against fixed opponents.
//
// Given the other bidders' pure rows, the shares a focal bidder wins are
// independent across shares (share auctions) or across items (house
// clearing), so per-item count distributions describe everything the
// equilibrium and audit code needs.

#ifndef LWLAB_SRC_ENGINE_HPP_
#define LWLAB_SRC_ENGINE_HPP_

#include <functional>
#include <vector>

#include "lwlab/equilibrium.hpp"
#include "lwlab/game.hpp"
#include "lwlab/mechanisms.hpp"

namespace lwlab::detail {

using ShareChooser =
    std::function<int(int item, int share, const std::vector<int>& tied)>;
using GroupOrderer =
    std::function<std::vector<int>(int item, const std::vector<int>& group)>;

// Mechanism cores with an explicit tie resolution.
Outcome run_share_auction(const GameInstance& g, const BidProfile& b,
                          bool first_price, const ShareChooser& choose);
Outcome run_house(const GameInstance& g, const HouseDemand& d,
                  const GroupOrderer& order);

struct Chance {
  double win = 0.0;
  double pay = 0.0;  // payment if won
};

// count_prob[c] = P(c shares of the item are won).
using ItemDist = std::vector<double>;

class OpponentField {
 public:
  // Bids of `focal` in `profile` are ignored.
  OpponentField(const GameInstance& g, Mechanism mech, const TieBreakRule& ties,
                int focal, const BidProfile& profile);

  Chance share_chance(int item, int share, double bid) const;
  // Distribution of shares received when demanding k shares at price p.
  ItemDist house_lottery(int item, int k, double p) const;

  // Distribution of shares won on one item by the focal row.
  ItemDist item_dist(int item, const std::vector<double>& bids) const;
  // Expected payment on one item.
  double item_expected_payment(int item, const std::vector<double>& bids) const;
  // Largest payment on one item that has positive probability.
  double item_max_payment(int item, const std::vector<double>& bids) const;

 private:
  struct ShareTop {
    double top = 0.0;
    int tied = 0;
    int best_rank = 0;
  };
  struct OtherDemand {
    int shares;
    double price;
    int rank;
  };

  const GameInstance* g_;
  Mechanism mech_;
  bool uniform_;
  int focal_rank_;
  std::vector<std::vector<ShareTop>> tops_;          // [j][l]
  std::vector<std::vector<OtherDemand>> demands_;    // [j]
};

// Aggregated view of a focal bidder's lottery.
struct FocalSummary {
  double expected_value = 0.0;     // E[v(x)]
  double expected_payment = 0.0;
  double expected_capped = 0.0;    // E[min(v(x), B)]
  double prob_at_budget = 0.0;     // P(v(x) >= B - tol)
  double max_payment = 0.0;
  std::vector<double> expected_counts;  // per item
  double utility() const;          // needs budget check by caller
};

std::vector<ItemDist> row_dists(const OpponentField& f, const GameInstance& g,
                                const BidRow& row);

// Full summary; the bundle product is capped at 1e6 atoms (SizeError).
FocalSummary summarize(const OpponentField& f, const GameInstance& g,
                       const Valuation& v, double budget, const BidRow& row);

// Expected utility, kNegInfinity when an over-budget payment has positive
// probability.
double focal_utility(const OpponentField& f, const GameInstance& g,
                     const Valuation& v, double budget, const BidRow& row);

// E[v(x)] for a product of per-item count distributions.
double expected_value_of(const Valuation& v, int h,
                         const std::vector<ItemDist>& dists);

// Per-share prices summed over shares of each item (highest bid on each
// share; for house clearing the price paid on each allocated share).
std::vector<double> item_price_sums(const GameInstance& g, Mechanism mech,
                                    const BidProfile& b);

inline constexpr double kJointLimit = 1e6;

// Calls visit(rows, prob) for every joint realization of the listed bidders'
// strategies with positive probability; other rows stay at zero.
template <typename Visit>
void for_each_joint(const GameInstance& g, const MixedProfile& s,
                    const std::vector<int>& who, Visit visit) {
  double size = 1.0;
  for (int i : who) size *= static_cast<double>(s[i].size());
  if (size > kJointLimit) throw SizeError("joint support exceeds 1e6 profiles");
  BidProfile rows(g.num_bidders(), zero_row(g));
  std::vector<size_t> idx(who.size(), 0);
  while (true) {
    double p = 1.0;
    for (size_t k = 0; k < who.size(); ++k) {
      const auto& w = s[who[k]][idx[k]];
      rows[who[k]] = w.bids;
      p *= w.prob;
    }
    if (p > 0.0) visit(static_cast<const BidProfile&>(rows), p);
    size_t k = 0;
    while (k < who.size() && ++idx[k] == s[who[k]].size()) idx[k++] = 0;
    if (k == who.size()) break;
  }
}

}  // namespace lwlab::detail

#endif  // LWLAB_SRC_ENGINE_HPP_
