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

#ifndef LWLAB_MECHANISMS_HPP_
#define LWLAB_MECHANISMS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "lwlab/game.hpp"

namespace lwlab {

enum class Mechanism { kFirstPrice, kSecondPrice, kHouseClearing };

// "first", "second", "house".
std::string to_string(Mechanism m);
Mechanism parse_mechanism(const std::string& s);

// bids[j][l]: one bidder's per-share bids.
using BidRow = std::vector<std::vector<double>>;
// bids[i][j][l].
using BidProfile = std::vector<BidRow>;

struct ShareDemand {
  int shares = 0;
  double price_per_share = 0.0;
  bool operator==(const ShareDemand&) const = default;
};
using DemandRow = std::vector<ShareDemand>;   // per item
using HouseDemand = std::vector<DemandRow>;   // per bidder

class TieBreakRule {
 public:
  enum class Kind { kLexicographic, kUniform };

  // Identity order: bidder 0 is preferred over bidder 1, and so on.
  static TieBreakRule lexicographic();
  // order[0] is the most preferred bidder.
  static TieBreakRule lexicographic(std::vector<int> order);
  static TieBreakRule uniform(std::uint64_t seed);
  // "lex", "lex:2,0,1" or "uniform:SEED".
  static TieBreakRule parse(const std::string& s);

  Kind kind() const { return kind_; }
  bool is_uniform() const { return kind_ == Kind::kUniform; }
  const std::vector<int>& order() const { return order_; }
  std::uint64_t seed() const { return seed_; }

  // Position of the bidder in the preference order; lower wins ties.
  int rank(int bidder) const;
  // Throws InputError unless the order is empty or a permutation of [0, n).
  void validate(int n) const;
  std::string to_string() const;

 private:
  Kind kind_ = Kind::kLexicographic;
  std::vector<int> order_;
  std::vector<int> rank_;
  std::uint64_t seed_ = 0;
};

inline constexpr int kNoWinner = -1;

struct Outcome {
  std::vector<std::vector<int>> winner;  // [j][l], kNoWinner when unsold
  std::vector<double> payment;           // per bidder
  std::vector<ShareBundle> bundles;      // per bidder
};

// Throws InputError when the profile shape does not match the instance or a
// bid is negative.
void validate_profile(const GameInstance& g, const BidProfile& b);
// True when every bid is a nonnegative multiple of the grid step.
bool on_grid(const GameInstance& g, const BidRow& row);

Outcome run_first_price(const GameInstance& g, const BidProfile& b,
                        const TieBreakRule& t);
Outcome run_second_price(const GameInstance& g, const BidProfile& b,
                         const TieBreakRule& t);
Outcome run_house_clearing(const GameInstance& g, const HouseDemand& d,
                           const TieBreakRule& t);
// House clearing reads the profile through demand_from_row.
Outcome run_mechanism(const GameInstance& g, Mechanism m, const BidProfile& b,
                      const TieBreakRule& t);

// Value minus payment, or kNegInfinity when the payment exceeds the budget.
double utility(const GameInstance& g, int i, const Outcome& o);

bool check_no_overbidding(const GameInstance& g, int i, const BidProfile& b);
bool row_no_overbidding(const GameInstance& g, int i, const BidRow& row);
bool check_no_overbudget(const GameInstance& g, int i, const BidProfile& b);
double row_total(const BidRow& row);

// A house row bids one common price on the first k shares of an item.
DemandRow demand_from_row(const BidRow& row);
BidRow row_from_demand(const DemandRow& d, int h);
HouseDemand demand_from_profile(const BidProfile& b);
BidProfile zero_profile(const GameInstance& g);
BidRow zero_row(const GameInstance& g);

}  // namespace lwlab

#endif  // LWLAB_MECHANISMS_HPP_
