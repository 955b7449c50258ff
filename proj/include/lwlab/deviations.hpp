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

#ifndef LWLAB_DEVIATIONS_HPP_
#define LWLAB_DEVIATIONS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "lwlab/equilibrium.hpp"
#include "lwlab/welfare.hpp"

namespace lwlab {

struct AnalysisParams {
  double alpha = 2.26;
  double gamma = 7.16;
  // Throws InputError unless alpha > 1 and gamma > 1.
  void validate() const;
};

struct BidderClassification {
  std::vector<int> I1, I2, I3, I;
  std::vector<std::vector<int>> J, Gamma, G;  // item sets per bidder

  bool in_I(int i) const;
};

// floor(y*h)/h for y in [0, 1].
double floor_fraction(double y, int h);
// 1/h when y > 0, else 0.
double frac_indicator(double y, int h);

// Bids pbar_j / h on round(delta*h) shares of item j chosen uniformly with a
// seeded generator, 0 elsewhere. delta*h must be integral.
std::vector<double> uniform_share_bid(int item, double delta, double pbar_j, int h,
                                      std::uint64_t seed);

// One joint realization of the h per-share prices of an item.
struct PriceOutcome {
  std::vector<double> prices;
  double prob = 0.0;
};
using PriceDistribution = std::vector<PriceOutcome>;

// Expected shares won by uniform_share_bid against the price distribution;
// a share is won when its price is strictly below pbar_j / h. Throws
// InputError if pbar_j != alpha * sum_l E[p^l].
double expected_shares_won(double delta, double pbar_j, int h,
                           const PriceDistribution& dist, double alpha);

// Additive valuations only (ModelError otherwise).
BidderClassification classify_bidders(const GameInstance& g,
                                      const EquilibriumStats& stats,
                                      const AnalysisParams& params);

enum class DeviationKind { kIntegral, kFractional };

// Fraction of each item's shares bid on by the deviation.
std::vector<double> llp_deviation_fractions(const GameInstance& g,
                                            const BidderClassification& cls, int i,
                                            const LLPSolution& y, DeviationKind kind);
std::vector<double> boosting_deviation_fractions(const GameInstance& g,
                                                 const BidderClassification& cls,
                                                 int i, const EquilibriumStats& stats,
                                                 const AnalysisParams& params,
                                                 DeviationKind kind);

// Throw InputError unless i is in I and InternalError if the row is over
// budget.
BidRow llp_deviation(const GameInstance& g, const BidderClassification& cls, int i,
                     const LLPSolution& y, const EquilibriumStats& stats,
                     DeviationKind kind, std::uint64_t seed);
BidRow boosting_deviation(const GameInstance& g, const BidderClassification& cls,
                          int i, const EquilibriumStats& stats,
                          const AnalysisParams& params, DeviationKind kind,
                          std::uint64_t seed);

// Exact expected utility of bidding pbar_j / h on a uniformly random
// fractions[j] share of every item, against the others' strategies in s.
double deviation_utility(const GameInstance& g, Mechanism mech,
                         const TieBreakRule& t, const MixedProfile& s, int i,
                         const std::vector<double>& fractions,
                         const EquilibriumStats& stats);

struct AuditRow {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string relation;  // "<=" or ">="
  bool holds = true;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  EquilibriumStats stats;
  BidderClassification classification;
  double llp_objective = 0.0;
  double opt = 0.0;
  std::string opt_source;  // "opt_exact" or "llp"
  double bound_constant = 0.0;
  bool all_hold() const;
};

// Evaluates the deviation-based welfare bounds at an equilibrium. Throws
// PreconditionError when s is not an equilibrium.
AuditReport audit_bounds(const GameInstance& g, Mechanism mech, const MixedProfile& s,
                         const TieBreakRule& t, const AnalysisParams& params);

// (alpha + 2 + c/2 * alpha * (1 + gamma + n/h)) / (c/2) with
// c = 1 - 1/alpha - 2/gamma; the bound OPT <= C * LW.
double lpoa_bound_constant(double alpha, double gamma, double n_over_h);

}  // namespace lwlab

#endif  // LWLAB_DEVIATIONS_HPP_
