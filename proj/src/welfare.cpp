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

#include "lwlab/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lwlab/simplex.hpp"

namespace lwlab {

double liquid_welfare(const GameInstance& g, const Outcome& o) {
  double lw = 0.0;
  for (int i = 0; i < g.num_bidders(); ++i) {
    const Bidder& b = g.bidders[i];
    lw += std::min(eval_valuation(b.valuation, o.bundles[i], g.shares_per_item), b.budget);
  }
  return lw;
}

double social_welfare(const GameInstance& g, const Outcome& o) {
  double sw = 0.0;
  for (int i = 0; i < g.num_bidders(); ++i) {
    sw += eval_valuation(g.bidders[i].valuation, o.bundles[i], g.shares_per_item);
  }
  return sw;
}

double revenue(const Outcome& o) {
  double r = 0.0;
  for (double p : o.payment) r += p;
  return r;
}

WelfareReport welfare_report(const GameInstance& g, const Outcome& o) {
  return {liquid_welfare(g, o), social_welfare(g, o), revenue(o)};
}

double expected_liquid_welfare(const GameInstance& g,
                               const std::vector<WeightedOutcome>& dist) {
  double total = 0.0;
  double lw = 0.0;
  for (const auto& w : dist) {
    if (w.prob < 0.0) throw InputError("negative outcome probability");
    total += w.prob;
    lw += w.prob * liquid_welfare(g, w.outcome);
  }
  if (std::fabs(total - 1.0) > kTolerance) {
    throw InputError("outcome probabilities sum to " + std::to_string(total) + ", not 1");
  }
  return lw;
}

namespace {

constexpr size_t kOptStateLimit = 2000000;
constexpr double kOptEnumerationLimit = 5e7;

// All ways to hand out at most h shares of one item to n bidders.
std::vector<std::vector<int>> item_splits(int n, int h) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[i] = k;
      self(self, i + 1, left - k);
    }
    cur[i] = 0;
  };
  rec(rec, 0, h);
  return out;
}

void fill_allocation(const GameInstance& g, OptResult& res,
                     const std::vector<const std::vector<int>*>& per_item) {
  const int n = g.num_bidders();
  const int h = g.shares_per_item;
  res.allocation.assign(g.num_items, std::vector<int>(h, kNoWinner));
  res.bundles.assign(n, ShareBundle::empty(g.num_items));
  for (int j = 0; j < g.num_items; ++j) {
    int next = 0;
    for (int i = 0; i < n; ++i) {
      int k = (*per_item[j])[i];
      for (int s = 0; s < k; ++s) res.allocation[j][next++] = i;
      res.bundles[i].counts[j] = k;
    }
  }
}

OptResult opt_additive(const GameInstance& g) {
  const int n = g.num_bidders();
  const int m = g.num_items;
  const int h = g.shares_per_item;
  const auto splits = item_splits(n, h);

  struct Node {
    std::vector<double> capped;
    int parent;
    int split;
  };
  std::vector<std::vector<Node>> layers(m + 1);
  layers[0].push_back({std::vector<double>(n, 0.0), -1, -1});
  for (int j = 0; j < m; ++j) {
    std::map<std::vector<long long>, int> seen;
    auto& next = layers[j + 1];
    for (int s = 0; s < static_cast<int>(layers[j].size()); ++s) {
      const auto& from = layers[j][s].capped;
      for (int k = 0; k < static_cast<int>(splits.size()); ++k) {
        std::vector<double> to = from;
        std::vector<long long> key(n);
        for (int i = 0; i < n; ++i) {
          const Bidder& b = g.bidders[i];
          to[i] = std::min(b.budget, to[i] + b.valuation.item_values()[j] * splits[k][i] / h);
          key[i] = std::llround(to[i] * 1e7);
        }
        if (seen.emplace(std::move(key), static_cast<int>(next.size())).second) {
          next.push_back({std::move(to), s, k});
          if (next.size() > kOptStateLimit) {
            throw SizeError("opt_exact: additive state space exceeds 2e6 states");
          }
        }
      }
    }
  }
  int best = 0;
  double best_value = -1.0;
  for (int s = 0; s < static_cast<int>(layers[m].size()); ++s) {
    double v = 0.0;
    for (double x : layers[m][s].capped) v += x;
    if (v > best_value + kTolerance) {
      best_value = v;
      best = s;
    }
  }
  std::vector<const std::vector<int>*> per_item(m);
  for (int j = m, s = best; j > 0; --j) {
    per_item[j - 1] = &splits[layers[j][s].split];
    s = layers[j][s].parent;
  }
  OptResult res;
  res.method = "additive-dp";
  fill_allocation(g, res, per_item);
  res.value = 0.0;
  for (int i = 0; i < n; ++i) {
    res.value += std::min(
        eval_valuation(g.bidders[i].valuation, res.bundles[i], h), g.bidders[i].budget);
  }
  return res;
}

OptResult opt_enumerate(const GameInstance& g) {
  const int n = g.num_bidders();
  const int m = g.num_items;
  const int h = g.shares_per_item;
  if (m * h > kOptEnumerationShareLimit) {
    throw SizeError("opt_exact: m*h = " + std::to_string(m * h) +
                    " exceeds the exhaustive limit of 12 shares");
  }
  const auto splits = item_splits(n, h);
  if (std::pow(static_cast<double>(splits.size()), m) > kOptEnumerationLimit) {
    throw SizeError("opt_exact: more than 5e7 share assignments");
  }
  std::vector<int> idx(m, 0);
  std::vector<int> best_idx(m, 0);
  double best_value = -1.0;
  std::vector<ShareBundle> bundles(n, ShareBundle::empty(m));
  while (true) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) bundles[i].counts[j] = splits[idx[j]][i];
    }
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
      v += std::min(eval_valuation(g.bidders[i].valuation, bundles[i], h), g.bidders[i].budget);
    }
    if (v > best_value + kTolerance) {
      best_value = v;
      best_idx = idx;
    }
    int j = 0;
    while (j < m && ++idx[j] == static_cast<int>(splits.size())) idx[j++] = 0;
    if (j == m) break;
  }
  std::vector<const std::vector<int>*> per_item(m);
  for (int j = 0; j < m; ++j) per_item[j] = &splits[best_idx[j]];
  OptResult res;
  res.method = "enumeration";
  res.value = best_value;
  fill_allocation(g, res, per_item);
  return res;
}

}  // namespace

OptResult opt_exact(const GameInstance& g) {
  require_valid(g);
  if (all_additive(g)) return opt_additive(g);
  return opt_enumerate(g);
}

LLPSolution solve_llp(const GameInstance& g) {
  require_valid(g);
  if (!all_additive(g)) throw ModelError("solve_llp supports additive valuations only");
  const int n = g.num_bidders();
  const int m = g.num_items;
  LinearProgram lp;
  lp.objective.assign(n * m, 0.0);
  lp.upper.assign(n * m, 1.0);
  for (int i = 0; i < n; ++i) {
    const auto& v = g.bidders[i].valuation.item_values();
    std::vector<double> row(n * m, 0.0);
    for (int j = 0; j < m; ++j) {
      lp.objective[i * m + j] = v[j];
      row[i * m + j] = v[j];
    }
    lp.constraints.push_back(std::move(row));
    lp.rhs.push_back(g.bidders[i].budget);
  }
  for (int j = 0; j < m; ++j) {
    std::vector<double> row(n * m, 0.0);
    for (int i = 0; i < n; ++i) row[i * m + j] = 1.0;
    lp.constraints.push_back(std::move(row));
    lp.rhs.push_back(1.0);
  }
  LpResult r = maximize(lp);
  LLPSolution sol;
  sol.y.assign(n, std::vector<double>(m, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) sol.y[i][j] = std::clamp(r.x[i * m + j], 0.0, 1.0);
  }
  sol.objective = r.objective;
  return sol;
}

double lpoa(double opt_value, double eq_lw) {
  if (!(eq_lw > 0.0)) {
    throw DegenerateEquilibriumError("equilibrium Liquid Welfare must be positive");
  }
  return opt_value / eq_lw;
}

}  // namespace lwlab
