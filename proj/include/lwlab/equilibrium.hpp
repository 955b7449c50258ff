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

#ifndef LWLAB_EQUILIBRIUM_HPP_
#define LWLAB_EQUILIBRIUM_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lwlab/game.hpp"
#include "lwlab/mechanisms.hpp"
#include "lwlab/welfare.hpp"

namespace lwlab {

struct WeightedRow {
  BidRow bids;
  double prob = 0.0;
};
using MixedStrategy = std::vector<WeightedRow>;
using MixedProfile = std::vector<MixedStrategy>;

MixedProfile point_mass(const BidProfile& b);
// Throws InputError on shape errors, negative or non-normalized weights.
void validate_mixed(const GameInstance& g, const MixedProfile& s);

inline constexpr const char* kFullGridFamily = "full grid";
inline constexpr const char* kStructuredFamily =
    "structured family (per-item constant share bids)";

struct DeviationOptions {
  // Evaluate every row of the deviation space instead of the additive
  // knapsack search.
  bool force_enumeration = false;
  // Restrict to rows bidding one price on all shares of an item, or nothing.
  bool structured = false;
  // Drop rows that fail row_no_overbidding. Applied per share bid, and
  // additionally per row for XOS valuations.
  bool no_overbidding = false;
  // Enumerations larger than this switch to the structured family.
  std::uint64_t enumeration_limit = 10000000;
};

// Budget-feasible grid rows of bidder i. House clearing rows bid one price on
// the first k shares of each item. Throws SizeError past enumeration_limit.
std::vector<BidRow> deviation_space(const GameInstance& g, int i,
                                    Mechanism mech = Mechanism::kFirstPrice,
                                    const DeviationOptions& opts = {});
// Number of rows, saturating at UINT64_MAX. The no_overbidding filter is
// counted per share bid, which is exact for additive valuations.
std::uint64_t deviation_space_size(const GameInstance& g, int i,
                                   Mechanism mech = Mechanism::kFirstPrice,
                                   const DeviationOptions& opts = {});

struct Deviation {
  int bidder = 0;
  std::optional<int> type;  // Bayesian games only
  BidRow bids;
  double gain = 0.0;
};

struct Verdict {
  bool is_equilibrium = true;
  std::optional<Deviation> worst;
  std::uint64_t checked = 0;
  std::string family = kFullGridFamily;
  // Largest gain found per bidder (maximum over types in Bayesian games).
  std::vector<double> best_gain;
  // Second price only: bidders whose strategy overbids with positive
  // probability. The welfare bounds for second price assume none do.
  std::vector<int> overbidding;
};

struct BestResponse {
  BidRow bids;
  double value = 0.0;    // expected utility of bids
  double current = 0.0;  // expected utility of the bidder's own strategy
  std::uint64_t checked = 0;
  std::string family = kFullGridFamily;
};

// Exact best response of bidder i against the others' strategies in s. The
// returned row is the lexicographically first maximizer.
BestResponse best_response(const GameInstance& g, Mechanism mech,
                           const TieBreakRule& t, int i, const MixedProfile& s,
                           const DeviationOptions& opts = {});

Verdict verify_pure_ne(const GameInstance& g, Mechanism mech, const BidProfile& b,
                       const TieBreakRule& t, const DeviationOptions& opts = {});
// Throws SizeError when the joint support exceeds 1e6 profiles.
Verdict verify_mixed_ne(const GameInstance& g, Mechanism mech,
                        const MixedProfile& s, const TieBreakRule& t,
                        const DeviationOptions& opts = {});

struct BayesType {
  Valuation valuation;
  double budget = 0.0;
  double prob = 0.0;
};

struct BayesianGame {
  std::vector<std::vector<BayesType>> types;  // per bidder
  int num_items = 0;
  int shares_per_item = 1;
  double bid_grid_step = 0.05;
};

// strategy[i][t]: mixed strategy of bidder i when of type t.
using BayesianStrategy = std::vector<std::vector<MixedStrategy>>;

// Interim check for every bidder and type against the others' type mixture.
Verdict verify_bayesian_ne(const BayesianGame& bg, Mechanism mech,
                           const BayesianStrategy& strategy, const TieBreakRule& t,
                           const DeviationOptions& opts = {});

struct BrdResult {
  bool converged = false;
  BidProfile profile;
  // Profiles at the end of each round from the first visit of the repeated
  // profile up to its repetition; empty when none was found.
  std::vector<BidProfile> cycle;
  int rounds = 0;
};

// Round-robin exact best responses; a bidder moves only for a gain above the
// tolerance.
BrdResult best_response_dynamics(const GameInstance& g, Mechanism mech,
                                 const TieBreakRule& t, const BidProfile& initial,
                                 int max_rounds, const DeviationOptions& opts = {});

struct PneSearch {
  std::vector<BidProfile> equilibria;
  std::uint64_t profiles_checked = 0;
};

// Exhaustive search over the product of deviation spaces.
PneSearch find_pure_equilibria(const GameInstance& g, Mechanism mech,
                               const TieBreakRule& t,
                               std::uint64_t profile_limit = 100000000,
                               const DeviationOptions& opts = {});

struct EquilibriumStats {
  std::vector<double> pbar;                // alpha * sum_l E[p_j^l]
  std::vector<std::vector<double>> q;      // expected share fraction won
  std::vector<double> Q;                   // P(v_i(x_i) >= B_i)
  std::vector<double> expected_payment;    // per bidder
  double exp_revenue = 0.0;
  double price_revenue = 0.0;              // (1/alpha) * sum_j pbar_j
  double exp_lw = 0.0;
  double alpha = 2.26;
};

EquilibriumStats equilibrium_stats(const GameInstance& g, Mechanism mech,
                                   const MixedProfile& s, const TieBreakRule& t,
                                   double alpha);

std::vector<double> expected_utilities(const GameInstance& g, Mechanism mech,
                                       const MixedProfile& s, const TieBreakRule& t);

// Every joint realization of strategies and tie resolutions with its
// probability. Throws SizeError beyond 1e6 outcomes.
std::vector<WeightedOutcome> outcome_distribution(const GameInstance& g,
                                                  Mechanism mech,
                                                  const MixedProfile& s,
                                                  const TieBreakRule& t);

}  // namespace lwlab

#endif  // LWLAB_EQUILIBRIUM_HPP_
