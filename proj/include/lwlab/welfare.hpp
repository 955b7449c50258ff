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

#ifndef LWLAB_WELFARE_HPP_
#define LWLAB_WELFARE_HPP_

#include <string>
#include <vector>

#include "lwlab/game.hpp"
#include "lwlab/mechanisms.hpp"

namespace lwlab {

struct WeightedOutcome {
  Outcome outcome;
  double prob = 0.0;
};

struct WelfareReport {
  double liquid_welfare = 0.0;
  double social_welfare = 0.0;
  double revenue = 0.0;
};

// Sum over bidders of min(value of bundle, budget).
double liquid_welfare(const GameInstance& g, const Outcome& o);
double social_welfare(const GameInstance& g, const Outcome& o);
double revenue(const Outcome& o);
WelfareReport welfare_report(const GameInstance& g, const Outcome& o);

// Throws InputError unless the probabilities sum to one.
double expected_liquid_welfare(const GameInstance& g,
                               const std::vector<WeightedOutcome>& dist);

struct OptResult {
  double value = 0.0;
  // allocation[j][l]: bidder holding the share, kNoWinner when unassigned.
  std::vector<std::vector<int>> allocation;
  std::vector<ShareBundle> bundles;
  std::string method;  // "additive-dp" or "enumeration"
};

// Exact optimal Liquid Welfare. Additive instances use a dynamic program over
// items whose state is the vector of budget-capped values; other instances
// enumerate share counts and require m*h <= 12. Throws SizeError when the
// instance is too large.
OptResult opt_exact(const GameInstance& g);

inline constexpr int kOptEnumerationShareLimit = 12;

struct LLPSolution {
  std::vector<std::vector<double>> y;  // [i][j]
  double objective = 0.0;
};

// Fractional relaxation: maximize sum v_ij y_ij subject to per-bidder budget
// rows and unit supply per item. Additive valuations only (ModelError).
LLPSolution solve_llp(const GameInstance& g);

// optValue / eqLW. Throws DegenerateEquilibriumError when eqLW <= 0.
double lpoa(double opt_value, double eq_lw);

}  // namespace lwlab

#endif  // LWLAB_WELFARE_HPP_
