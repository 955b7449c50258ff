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


#include "lwlab/instances.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace lwlab {
namespace {

void require_on_grid(double x, double grid, const char* what) {
  if (grid_units(x, grid) < 0) {
    throw InputError(std::string(what) + " is not on the bid grid");
  }
}

BidRow single_bid(int m, int h, int item, int shares, double price) {
  BidRow row(m, std::vector<double>(h, 0.0));
  for (int l = 0; l < shares; ++l) row[item][l] = price;
  return row;
}

// Values shared by the mixed constructions.
GameInstance mixed_values(int n, int h) {
  GameInstance g;
  g.num_items = n;
  g.shares_per_item = h;
  g.bid_grid_step = 0.05;
  const double high = std::ldexp(1.0, 2 * n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> v(n, i < n - 2 ? 1.0 : 0.0);
    v[0] = v[1] = high;
    g.bidders.push_back(Bidder{Valuation::additive(std::move(v)), 1.0});
  }
  return g;
}

GameInstance rand_tiebreak_values(int n, int h) {
  GameInstance g;
  g.num_items = n;
  g.shares_per_item = h;
  g.bid_grid_step = 0.05;
  for (int i = 0; i < n; ++i) {
    std::vector<double> v(n, 1.0);
    v[0] = std::pow(static_cast<double>(n), 4);
    g.bidders.push_back(Bidder{Valuation::additive(std::move(v)), 1.0});
  }
  return g;
}

// Bidders 0..n-2h-3 mix; bidders n-1, n-3, ... (h + 1 of them) take item 0
// and n-2, n-4, ... take item 1.
MixedProfile mixed_profile(int n, int h) {
  const int mixers = n - 2 * h - 2;
  const BidRow on0 = single_bid(n, h, 0, 1, 1.0);
  const BidRow on1 = single_bid(n, h, 1, 1, 1.0);
  MixedProfile s(n);
  for (int i = 0; i < n; ++i) {
    if (i < mixers) {
      s[i] = {WeightedRow{on0, 0.5}, WeightedRow{on1, 0.5}};
    } else {
      s[i] = {WeightedRow{(n - 1 - i) % 2 == 0 ? on0 : on1, 1.0}};
    }
  }
  return s;
}

}  // namespace

CertifiedInstance gen_tightness(double eps, Mechanism mech, double grid) {
  if (!(eps > 0.0 && eps < 10.0)) throw InputError("eps must lie in (0, 10)");
  if (!(grid > 0.0)) throw InputError("grid step must be positive");
  if (mech == Mechanism::kHouseClearing) {
    throw InputError("tightness instance is defined for first or second price");
  }
  CertifiedInstance c;
  c.game.num_items = 2;
  c.game.shares_per_item = 1;
  c.game.bid_grid_step = grid;
  c.game.bidders.push_back(Bidder{Valuation::additive({10.0, 0.0}), 10.0 - eps});
  c.game.bidders.push_back(Bidder{Valuation::additive({10.0, 10.0}), 10.0});
  c.mechanism = mech;
  c.ties = TieBreakRule::lexicographic();
  BidProfile b(2, BidRow(2, std::vector<double>(1, 0.0)));
  if (mech == Mechanism::kSecondPrice) {
    require_on_grid(eps / 2.0, grid, "eps/2");
    require_on_grid(10.0, grid, "10");
    const long long half = grid_units(eps / 2.0, grid);
    b[1][0][0] = grid_value(grid_units(10.0, grid) - half, grid);
    b[1][1][0] = grid_value(half, grid);
  } else {
    require_on_grid(eps, grid, "eps");
    require_on_grid(10.0, grid, "10");
    const long long top = grid_units(10.0, grid) - grid_units(eps, grid);
    b[0][0][0] = grid_value(top, grid);
    b[1][0][0] = grid_value(top + 1, grid);
    b[1][1][0] = grid_value(1, grid);
  }
  c.profile = point_mass(b);
  c.claimed_opt = 20.0 - eps;
  c.claimed_eq_lw = 10.0;
  std::ostringstream id;
  id << "tightness(" << eps << "," << to_string(mech) << ")";
  c.id = id.str();
  c.source = "two-bidder tightness construction for the factor-2 pure bound";
  return c;
}

CertifiedInstance gen_rand_tiebreak_lb(int n) {
  if (n < 2 || n > 64) throw InputError("n must lie in [2, 64]");
  CertifiedInstance c;
  c.game = rand_tiebreak_values(n, 1);
  c.mechanism = Mechanism::kFirstPrice;
  c.ties = TieBreakRule::uniform(0);
  BidProfile b(n, single_bid(n, 1, 0, 1, 1.0));
  c.profile = point_mass(b);
  c.claimed_opt = n;
  c.claimed_eq_lw = 1.0;
  c.id = "rand-tiebreak(" + std::to_string(n) + ")";
  c.source = "uniform tie-breaking lower bound, everyone bids on the valuable item";
  return c;
}

CertifiedInstance gen_mixed_lb(int n) {
  if (n < 5 || n > 8) throw InputError("n must lie in [5, 8]");
  CertifiedInstance c;
  c.game = mixed_values(n, 1);
  c.mechanism = Mechanism::kFirstPrice;
  c.ties = TieBreakRule::lexicographic();
  c.profile = mixed_profile(n, 1);
  c.claimed_opt = n;
  c.claimed_eq_lw = 2.0;
  c.id = "mixed(" + std::to_string(n) + ")";
  c.source = "mixed-equilibrium lower bound with two contested items";
  return c;
}

CertifiedInstance gen_rand_tiebreak_shares_lb(int n, int h) {
  if (n < 2 || n > 64) throw InputError("n must lie in [2, 64]");
  if (h < 1 || h >= n) throw InputError("h must lie in [1, n - 1]");
  CertifiedInstance c;
  c.game = rand_tiebreak_values(n, h);
  c.mechanism = Mechanism::kHouseClearing;
  c.ties = TieBreakRule::uniform(0);
  BidProfile b(n, single_bid(n, h, 0, 1, 1.0));
  c.profile = point_mass(b);
  c.claimed_opt = n;
  c.claimed_eq_lw = h;
  c.id = "rand-tiebreak-shares(" + std::to_string(n) + "," + std::to_string(h) + ")";
  c.source = "uniform tie-breaking lower bound with divisible items";
  return c;
}

CertifiedInstance gen_mixed_shares_lb(int n, int h) {
  if (h < 1) throw InputError("h must be at least 1");
  if (n < 2 * h + 3 || n > 8) throw InputError("n must lie in [2h + 3, 8]");
  CertifiedInstance c;
  c.game = mixed_values(n, h);
  c.mechanism = Mechanism::kHouseClearing;
  c.ties = TieBreakRule::lexicographic();
  c.profile = mixed_profile(n, h);
  c.claimed_opt = n;
  c.claimed_eq_lw = 2.0 * h;
  c.id = "mixed-shares(" + std::to_string(n) + "," + std::to_string(h) + ")";
  c.source = "mixed-equilibrium lower bound with divisible items";
  return c;
}

GameInstance gen_no_pure_ne(int m, double grid) {
  if (m < 1) throw InputError("m must be positive");
  if (!(grid > 0.0)) throw InputError("grid step must be positive");
  GameInstance g;
  g.num_items = m;
  g.shares_per_item = 1;
  g.bid_grid_step = grid;
  g.bidders.push_back(Bidder{Valuation::additive(std::vector<double>(m, 1.0)), 1.0});
  g.bidders.push_back(Bidder{Valuation::additive(std::vector<double>(m, 1.1)), 1.1});
  return g;
}

}  // namespace lwlab
