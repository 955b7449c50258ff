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


#ifndef LWLAB_INSTANCES_HPP_
#define LWLAB_INSTANCES_HPP_

#include <string>

#include "lwlab/equilibrium.hpp"
#include "lwlab/game.hpp"
#include "lwlab/mechanisms.hpp"

namespace lwlab {

// A game with a candidate equilibrium and the welfare values it is known to
// attain.
struct CertifiedInstance {
  std::string id;
  GameInstance game;
  Mechanism mechanism = Mechanism::kFirstPrice;
  TieBreakRule ties;
  MixedProfile profile;
  double claimed_opt = 0.0;
  double claimed_eq_lw = 0.0;
  std::string source;
};

// Two bidders, two items: B1 = 10 - eps, v1 = (10, 0); B2 = 10, v2 = (10, 10).
// Second price: b = ((0, 0), (10 - eps/2, eps/2)). First price:
// b = ((10 - eps, 0), (10 - eps + grid, grid)). Throws InputError unless eps is
// in (0, 10) and the bids fall on the grid.
CertifiedInstance gen_tightness(double eps, Mechanism mech = Mechanism::kSecondPrice,
                                double grid = 0.05);

// n bidders and items, item 0 worth n^4 and the rest 1, budgets 1; everyone
// bids 1 on item 0 under uniform ties. First price.
CertifiedInstance gen_rand_tiebreak_lb(int n);

// 5 <= n <= 8. Items 0 and 1 worth 2^(2n) to everyone, the others worth 1 to
// bidders 0..n-3; budgets 1. Bidders n-1, n-3 bid 1 on item 0, bidders n-2,
// n-4 bid 1 on item 1, the rest mix evenly between the two. First price,
// lexicographic ties.
CertifiedInstance gen_mixed_lb(int n);

// Share version of gen_rand_tiebreak_lb under house clearing: every bidder
// demands one share of item 0 at price 1, uniform ties. 1 <= h <= n.
CertifiedInstance gen_rand_tiebreak_shares_lb(int n, int h);

// Share version of gen_mixed_lb under house clearing: h + 1 bidders demand
// one share of each high item at price 1, the first n - 2h - 2 mix evenly.
// Requires 2h + 3 <= n <= 8.
CertifiedInstance gen_mixed_shares_lb(int n, int h);

// Two bidders, m identical items, h = 1: v1 = 1 per item with B1 = 1 and
// v2 = 1.1 per item with B2 = 1.1.
GameInstance gen_no_pure_ne(int m = 3, double grid = 0.05);

}  // namespace lwlab

#endif  // LWLAB_INSTANCES_HPP_
