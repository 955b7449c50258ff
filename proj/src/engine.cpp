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

#include "engine.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace lwlab::detail {

namespace {

constexpr double kBundleAtomLimit = 1e6;

ShareDemand item_demand(const std::vector<double>& bids) {
  double price = 0.0;
  int count = 0;
  for (double x : bids) {
    if (x <= kTolerance) continue;
    if (count > 0 && std::fabs(x - price) > kTolerance) {
      throw InputError("house row bids more than one price on an item");
    }
    price = x;
    ++count;
  }
  return ShareDemand{count, price};
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

OpponentField::OpponentField(const GameInstance& g, Mechanism mech,
                             const TieBreakRule& ties, int focal,
                             const BidProfile& profile)
    : g_(&g),
      mech_(mech),
      uniform_(ties.is_uniform()),
      focal_rank_(ties.rank(focal)) {
  const int n = g.num_bidders();
  const int m = g.num_items;
  const int h = g.shares_per_item;
  if (mech == Mechanism::kHouseClearing) {
    demands_.assign(m, {});
    for (int i = 0; i < n; ++i) {
      if (i == focal) continue;
      for (int j = 0; j < m; ++j) {
        ShareDemand d = item_demand(profile[i][j]);
        if (d.shares > 0 && d.price_per_share > kTolerance) {
          demands_[j].push_back({d.shares, d.price_per_share, ties.rank(i)});
        }
      }
    }
    return;
  }
  tops_.assign(m, std::vector<ShareTop>(h));
  for (int j = 0; j < m; ++j) {
    for (int l = 0; l < h; ++l) {
      double top = 0.0;
      for (int i = 0; i < n; ++i) {
        if (i != focal) top = std::max(top, profile[i][j][l]);
      }
      ShareTop& s = tops_[j][l];
      if (top <= kTolerance) continue;
      s.top = top;
      s.best_rank = INT_MAX;
      for (int i = 0; i < n; ++i) {
        if (i == focal || profile[i][j][l] < top - kTolerance) continue;
        ++s.tied;
        s.best_rank = std::min(s.best_rank, ties.rank(i));
      }
    }
  }
}

Chance OpponentField::share_chance(int item, int share, double bid) const {
  if (bid <= kTolerance) return {};
  const bool first = mech_ == Mechanism::kFirstPrice;
  const ShareTop& s = tops_[item][share];
  if (s.tied == 0) return {1.0, first ? bid : 0.0};
  if (bid > s.top + kTolerance) return {1.0, first ? bid : s.top};
  if (bid >= s.top - kTolerance) {
    double win = uniform_ ? 1.0 / (s.tied + 1) : (focal_rank_ < s.best_rank ? 1.0 : 0.0);
    return {win, first ? bid : s.top};
  }
  return {};
}

ItemDist OpponentField::house_lottery(int item, int k, double p) const {
  const int h = g_->shares_per_item;
  ItemDist dist(h + 1, 0.0);
  if (k <= 0 || p <= kTolerance) {
    dist[0] = 1.0;
    return dist;
  }
  int higher = 0;
  std::vector<const OtherDemand*> tied;
  for (const auto& d : demands_[item]) {
    if (d.price > p + kTolerance) {
      higher += d.shares;
    } else if (d.price >= p - kTolerance) {
      tied.push_back(&d);
    }
  }
  const int stock = std::max(0, h - higher);
  if (!uniform_) {
    int ahead = 0;
    for (const auto* d : tied) {
      if (d->rank < focal_rank_) ahead += d->shares;
    }
    dist[std::min(k, std::max(0, stock - ahead))] = 1.0;
    return dist;
  }
  // A uniform service order makes every set S of tied rivals served first
  // appear with probability |S|! (t - |S|)! / (t + 1)!.
  const int t = static_cast<int>(tied.size());
  const double denom = factorial(t + 1);
  for (unsigned mask = 0; mask < (1u << t); ++mask) {
    int ahead = 0;
    int size = 0;
    for (int r = 0; r < t; ++r) {
      if (mask & (1u << r)) {
        ahead += tied[r]->shares;
        ++size;
      }
    }
    double prob = factorial(size) * factorial(t - size) / denom;
    dist[std::min(k, std::max(0, stock - ahead))] += prob;
  }
  return dist;
}

ItemDist OpponentField::item_dist(int item, const std::vector<double>& bids) const {
  const int h = g_->shares_per_item;
  if (mech_ == Mechanism::kHouseClearing) {
    ShareDemand d = item_demand(bids);
    return house_lottery(item, d.shares, d.price_per_share);
  }
  ItemDist dist(h + 1, 0.0);
  dist[0] = 1.0;
  int reach = 0;
  for (int l = 0; l < h; ++l) {
    double w = share_chance(item, l, bids[l]).win;
    if (w <= 0.0) continue;
    ++reach;
    for (int c = reach; c >= 1; --c) dist[c] = dist[c] * (1.0 - w) + dist[c - 1] * w;
    dist[0] *= 1.0 - w;
  }
  return dist;
}

double OpponentField::item_expected_payment(int item,
                                            const std::vector<double>& bids) const {
  if (mech_ == Mechanism::kHouseClearing) {
    ShareDemand d = item_demand(bids);
    ItemDist dist = house_lottery(item, d.shares, d.price_per_share);
    double e = 0.0;
    for (size_t c = 1; c < dist.size(); ++c) e += c * dist[c];
    return e * d.price_per_share;
  }
  double e = 0.0;
  for (size_t l = 0; l < bids.size(); ++l) {
    Chance c = share_chance(item, static_cast<int>(l), bids[l]);
    e += c.win * c.pay;
  }
  return e;
}

double OpponentField::item_max_payment(int item, const std::vector<double>& bids) const {
  if (mech_ == Mechanism::kHouseClearing) {
    ShareDemand d = item_demand(bids);
    ItemDist dist = house_lottery(item, d.shares, d.price_per_share);
    for (int c = static_cast<int>(dist.size()) - 1; c > 0; --c) {
      if (dist[c] > 0.0) return c * d.price_per_share;
    }
    return 0.0;
  }
  double total = 0.0;
  for (size_t l = 0; l < bids.size(); ++l) {
    Chance c = share_chance(item, static_cast<int>(l), bids[l]);
    if (c.win > 0.0) total += c.pay;
  }
  return total;
}

double FocalSummary::utility() const { return expected_value - expected_payment; }

std::vector<ItemDist> row_dists(const OpponentField& f, const GameInstance& g,
                                const BidRow& row) {
  std::vector<ItemDist> dists;
  dists.reserve(g.num_items);
  for (int j = 0; j < g.num_items; ++j) dists.push_back(f.item_dist(j, row[j]));
  return dists;
}

namespace {

// Calls visit(bundle, prob) for every bundle with positive probability.
template <typename Visit>
void for_each_bundle(const std::vector<ItemDist>& dists, Visit visit) {
  const int m = static_cast<int>(dists.size());
  std::vector<std::vector<int>> support(m);
  double atoms = 1.0;
  for (int j = 0; j < m; ++j) {
    for (size_t c = 0; c < dists[j].size(); ++c) {
      if (dists[j][c] > 0.0) support[j].push_back(static_cast<int>(c));
    }
    atoms *= static_cast<double>(support[j].size());
  }
  if (atoms > kBundleAtomLimit) {
    throw SizeError("bundle distribution exceeds 1e6 atoms");
  }
  ShareBundle bundle = ShareBundle::empty(m);
  std::vector<size_t> idx(m, 0);
  while (true) {
    double prob = 1.0;
    for (int j = 0; j < m; ++j) {
      bundle.counts[j] = support[j][idx[j]];
      prob *= dists[j][bundle.counts[j]];
    }
    visit(bundle, prob);
    int j = 0;
    while (j < m && ++idx[j] == support[j].size()) idx[j++] = 0;
    if (j == m) break;
  }
}

}  // namespace

double expected_value_of(const Valuation& v, int h, const std::vector<ItemDist>& dists) {
  if (v.is_additive()) {
    const auto& values = v.item_values();
    double e = 0.0;
    for (size_t j = 0; j < dists.size(); ++j) {
      for (size_t c = 1; c < dists[j].size(); ++c) e += values[j] * c / h * dists[j][c];
    }
    return e;
  }
  double e = 0.0;
  for_each_bundle(dists, [&](const ShareBundle& b, double p) {
    e += p * eval_valuation(v, b, h);
  });
  return e;
}

FocalSummary summarize(const OpponentField& f, const GameInstance& g,
                       const Valuation& v, double budget, const BidRow& row) {
  const int h = g.shares_per_item;
  FocalSummary s;
  std::vector<ItemDist> dists = row_dists(f, g, row);
  s.expected_counts.assign(g.num_items, 0.0);
  for (int j = 0; j < g.num_items; ++j) {
    for (size_t c = 1; c < dists[j].size(); ++c) s.expected_counts[j] += c * dists[j][c];
    s.expected_payment += f.item_expected_payment(j, row[j]);
    s.max_payment += f.item_max_payment(j, row[j]);
  }
  for_each_bundle(dists, [&](const ShareBundle& b, double p) {
    double val = eval_valuation(v, b, h);
    s.expected_value += p * val;
    s.expected_capped += p * std::min(val, budget);
    if (val >= budget - kTolerance) s.prob_at_budget += p;
  });
  return s;
}

double focal_utility(const OpponentField& f, const GameInstance& g,
                     const Valuation& v, double budget, const BidRow& row) {
  double max_pay = 0.0;
  double pay = 0.0;
  for (int j = 0; j < g.num_items; ++j) {
    max_pay += f.item_max_payment(j, row[j]);
    pay += f.item_expected_payment(j, row[j]);
  }
  if (max_pay > budget + kTolerance) return kNegInfinity;
  return expected_value_of(v, g.shares_per_item, row_dists(f, g, row)) - pay;
}

std::vector<double> item_price_sums(const GameInstance& g, Mechanism mech,
                                    const BidProfile& b) {
  const int n = g.num_bidders();
  const int m = g.num_items;
  const int h = g.shares_per_item;
  std::vector<double> sums(m, 0.0);
  if (mech != Mechanism::kHouseClearing) {
    for (int j = 0; j < m; ++j) {
      for (int l = 0; l < h; ++l) {
        double top = 0.0;
        for (int i = 0; i < n; ++i) top = std::max(top, b[i][j][l]);
        if (top > kTolerance) sums[j] += top;
      }
    }
    return sums;
  }
  // Shares sold at each price level do not depend on the service order.
  for (int j = 0; j < m; ++j) {
    std::vector<ShareDemand> ds;
    for (int i = 0; i < n; ++i) {
      ShareDemand d = item_demand(b[i][j]);
      if (d.shares > 0 && d.price_per_share > kTolerance) ds.push_back(d);
    }
    std::sort(ds.begin(), ds.end(), [](const ShareDemand& a, const ShareDemand& c) {
      return a.price_per_share > c.price_per_share;
    });
    int left = h;
    for (const auto& d : ds) {
      int take = std::min(left, d.shares);
      sums[j] += take * d.price_per_share;
      left -= take;
    }
  }
  return sums;
}

}  // namespace lwlab::detail
