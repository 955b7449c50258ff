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

#ifndef LWLAB_GAME_HPP_
#define LWLAB_GAME_HPP_

#include <optional>
#include <string>
#include <vector>

#include "lwlab/common.hpp"

namespace lwlab {

// A bidder valuation over share bundles. Additive valuations are stored as
// a single clause so that every valuation is a max over additive clauses.
class Valuation {
 public:
  static Valuation additive(std::vector<double> values);
  static Valuation xos(std::vector<std::vector<double>> clauses);

  bool is_additive() const { return additive_; }
  int num_items() const;

  // Per-item values. Throws ModelError for XOS valuations.
  const std::vector<double>& item_values() const;
  const std::vector<std::vector<double>>& clauses() const { return clauses_; }

  // Largest per-item value over all clauses.
  double max_item_value(int item) const;

 private:
  Valuation(std::vector<std::vector<double>> clauses, bool additive)
      : clauses_(std::move(clauses)), additive_(additive) {}

  std::vector<std::vector<double>> clauses_;
  bool additive_ = true;
};

struct Bidder {
  Valuation valuation;
  double budget = 0.0;
};

// Shares held of each item.
struct ShareBundle {
  std::vector<int> counts;

  static ShareBundle empty(int num_items) {
    return ShareBundle{std::vector<int>(num_items, 0)};
  }
  bool operator==(const ShareBundle&) const = default;
};

struct GameInstance {
  std::vector<Bidder> bidders;
  int num_items = 0;
  int shares_per_item = 1;
  double bid_grid_step = 0.05;

  int num_bidders() const { return static_cast<int>(bidders.size()); }
};

// Value of a bundle; each share of item j is worth value_j / h.
double eval_valuation(const Valuation& v, const ShareBundle& bundle, int h);

// Index of the clause attaining eval_valuation, lowest index on ties.
int maximizing_clause(const Valuation& v, const ShareBundle& bundle, int h);

struct Violation {
  std::optional<int> bidder;
  std::string field;
  std::string message;
};

std::vector<Violation> validate_instance(const GameInstance& g);

// Throws ModelError listing the first violation, if any.
void require_valid(const GameInstance& g);

bool all_additive(const GameInstance& g);

// Number of grid units in x, or -1 when x is not on the grid.
long long grid_units(double x, double step);
// units * step, computed as units / (1 / step) when 1 / step is an integer so
// that decimal grids print cleanly.
double grid_value(long long units, double step);

}  // namespace lwlab

#endif  // LWLAB_GAME_HPP_
