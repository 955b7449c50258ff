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

#include "lwlab/mechanisms.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <memory>
#include <cmath>
#include <random>
#include <sstream>

#include "engine.hpp"

namespace lwlab {

std::string to_string(Mechanism m) {
  switch (m) {
    case Mechanism::kFirstPrice: return "first";
    case Mechanism::kSecondPrice: return "second";
    case Mechanism::kHouseClearing: return "house";
  }
  return "first";
}

Mechanism parse_mechanism(const std::string& s) {
  if (s == "first") return Mechanism::kFirstPrice;
  if (s == "second") return Mechanism::kSecondPrice;
  if (s == "house") return Mechanism::kHouseClearing;
  throw InputError("unknown mechanism '" + s + "' (expected first, second or house)");
}

TieBreakRule TieBreakRule::lexicographic() { return TieBreakRule(); }

TieBreakRule TieBreakRule::lexicographic(std::vector<int> order) {
  TieBreakRule t;
  t.order_ = std::move(order);
  int n = static_cast<int>(t.order_.size());
  t.rank_.assign(n, INT_MAX);
  for (int r = 0; r < n; ++r) {
    int b = t.order_[r];
    if (b >= 0 && b < n) t.rank_[b] = r;
  }
  return t;
}

TieBreakRule TieBreakRule::uniform(std::uint64_t seed) {
  TieBreakRule t;
  t.kind_ = Kind::kUniform;
  t.seed_ = seed;
  return t;
}

TieBreakRule TieBreakRule::parse(const std::string& s) {
  if (s == "lex") return lexicographic();
  if (s.rfind("lex:", 0) == 0) {
    std::vector<int> order;
    std::stringstream ss(s.substr(4));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        order.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw InputError("bad lexicographic order '" + s + "'");
      }
    }
    return lexicographic(std::move(order));
  }
  if (s.rfind("uniform:", 0) == 0) {
    try {
      return uniform(std::stoull(s.substr(8)));
    } catch (const std::exception&) {
      throw InputError("bad uniform seed in '" + s + "'");
    }
  }
  if (s == "uniform") return uniform(0);
  throw InputError("unknown tie-break rule '" + s + "' (expected lex or uniform:SEED)");
}

int TieBreakRule::rank(int bidder) const {
  if (order_.empty()) return bidder;
  if (bidder < 0 || bidder >= static_cast<int>(rank_.size())) return INT_MAX;
  return rank_[bidder];
}

void TieBreakRule::validate(int n) const {
  if (kind_ != Kind::kLexicographic || order_.empty()) return;
  if (static_cast<int>(order_.size()) != n) {
    throw InputError("lexicographic order must list every bidder once");
  }
  std::vector<int> sorted = order_;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i) {
    if (sorted[i] != i) throw InputError("lexicographic order is not a permutation");
  }
}

std::string TieBreakRule::to_string() const {
  if (kind_ == Kind::kUniform) return "uniform:" + std::to_string(seed_);
  if (order_.empty()) return "lex";
  std::string out = "lex:";
  for (size_t r = 0; r < order_.size(); ++r) {
    if (r) out += ",";
    out += std::to_string(order_[r]);
  }
  return out;
}

void validate_profile(const GameInstance& g, const BidProfile& b) {
  if (static_cast<int>(b.size()) != g.num_bidders()) {
    throw InputError("profile has " + std::to_string(b.size()) + " rows, instance has " +
                     std::to_string(g.num_bidders()) + " bidders");
  }
  for (size_t i = 0; i < b.size(); ++i) {
    if (static_cast<int>(b[i].size()) != g.num_items) {
      throw InputError("bidder " + std::to_string(i) + " row has wrong item count");
    }
    for (const auto& item : b[i]) {
      if (static_cast<int>(item.size()) != g.shares_per_item) {
        throw InputError("bidder " + std::to_string(i) + " row has wrong share count");
      }
      for (double x : item) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
          throw InputError("bidder " + std::to_string(i) + " has a negative bid");
        }
      }
    }
  }
}

bool on_grid(const GameInstance& g, const BidRow& row) {
  for (const auto& item : row) {
    for (double x : item) {
      if (grid_units(x, g.bid_grid_step) < 0) return false;
    }
  }
  return true;
}

namespace detail {

Outcome run_share_auction(const GameInstance& g, const BidProfile& b,
                          bool first_price, const ShareChooser& choose) {
  const int n = g.num_bidders();
  const int m = g.num_items;
  const int h = g.shares_per_item;
  Outcome o;
  o.winner.assign(m, std::vector<int>(h, kNoWinner));
  o.payment.assign(n, 0.0);
  o.bundles.assign(n, ShareBundle::empty(m));
  std::vector<int> tied;
  for (int j = 0; j < m; ++j) {
    for (int l = 0; l < h; ++l) {
      double top = 0.0;
      for (int i = 0; i < n; ++i) top = std::max(top, b[i][j][l]);
      if (top <= kTolerance) continue;
      tied.clear();
      for (int i = 0; i < n; ++i) {
        if (b[i][j][l] >= top - kTolerance) tied.push_back(i);
      }
      int w = tied.size() == 1 ? tied.front() : choose(j, l, tied);
      double pay = b[w][j][l];
      if (!first_price) {
        pay = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i != w) pay = std::max(pay, b[i][j][l]);
        }
      }
      o.winner[j][l] = w;
      o.payment[w] += pay;
      o.bundles[w].counts[j] += 1;
    }
  }
  return o;
}

Outcome run_house(const GameInstance& g, const HouseDemand& d,
                  const GroupOrderer& order) {
  const int n = g.num_bidders();
  const int m = g.num_items;
  const int h = g.shares_per_item;
  Outcome o;
  o.winner.assign(m, std::vector<int>(h, kNoWinner));
  o.payment.assign(n, 0.0);
  o.bundles.assign(n, ShareBundle::empty(m));
  for (int j = 0; j < m; ++j) {
    std::vector<int> active;
    for (int i = 0; i < n; ++i) {
      if (d[i][j].shares > 0 && d[i][j].price_per_share > kTolerance) active.push_back(i);
    }
    std::stable_sort(active.begin(), active.end(), [&](int a, int c) {
      return d[a][j].price_per_share > d[c][j].price_per_share + kTolerance;
    });
    int next = 0;
    size_t pos = 0;
    while (pos < active.size()) {
      size_t end = pos + 1;
      double p0 = d[active[pos]][j].price_per_share;
      while (end < active.size() && d[active[end]][j].price_per_share >= p0 - kTolerance) ++end;
      std::vector<int> group(active.begin() + pos, active.begin() + end);
      std::sort(group.begin(), group.end());
      if (group.size() > 1) group = order(j, group);
      for (int i : group) {
        int take = std::min(d[i][j].shares, h - next);
        for (int s = 0; s < take; ++s) o.winner[j][next + s] = i;
        next += take;
        o.bundles[i].counts[j] += take;
        o.payment[i] += take * d[i][j].price_per_share;
      }
      pos = end;
    }
  }
  return o;
}

}  // namespace detail

namespace {

void check_demand(const GameInstance& g, const HouseDemand& d) {
  if (static_cast<int>(d.size()) != g.num_bidders()) {
    throw InputError("house demand has wrong bidder count");
  }
  for (const auto& row : d) {
    if (static_cast<int>(row.size()) != g.num_items) {
      throw InputError("house demand has wrong item count");
    }
    for (const auto& x : row) {
      if (x.shares < 0 || x.shares > g.shares_per_item || !(x.price_per_share >= 0.0)) {
        throw InputError("house demand outside [0, h] shares or with negative price");
      }
    }
  }
}

detail::ShareChooser share_chooser(const TieBreakRule& t,
                                   std::shared_ptr<std::mt19937_64> rng) {
  if (t.is_uniform()) {
    return [rng](int, int, const std::vector<int>& tied) {
      return tied[(*rng)() % tied.size()];
    };
  }
  return [t](int, int, const std::vector<int>& tied) {
    return *std::min_element(tied.begin(), tied.end(), [&](int a, int b) {
      return t.rank(a) < t.rank(b);
    });
  };
}

}  // namespace

Outcome run_first_price(const GameInstance& g, const BidProfile& b,
                        const TieBreakRule& t) {
  validate_profile(g, b);
  auto rng = std::make_shared<std::mt19937_64>(t.seed());
  return detail::run_share_auction(g, b, true, share_chooser(t, rng));
}

Outcome run_second_price(const GameInstance& g, const BidProfile& b,
                         const TieBreakRule& t) {
  validate_profile(g, b);
  auto rng = std::make_shared<std::mt19937_64>(t.seed());
  return detail::run_share_auction(g, b, false, share_chooser(t, rng));
}

Outcome run_house_clearing(const GameInstance& g, const HouseDemand& d,
                           const TieBreakRule& t) {
  check_demand(g, d);
  if (t.is_uniform()) {
    std::mt19937_64 rng(t.seed());
    return detail::run_house(g, d, [&rng](int, const std::vector<int>& group) {
      std::vector<int> out = group;
      for (size_t k = out.size(); k > 1; --k) std::swap(out[k - 1], out[rng() % k]);
      return out;
    });
  }
  return detail::run_house(g, d, [&t](int, const std::vector<int>& group) {
    std::vector<int> out = group;
    std::stable_sort(out.begin(), out.end(),
                     [&](int a, int b) { return t.rank(a) < t.rank(b); });
    return out;
  });
}

Outcome run_mechanism(const GameInstance& g, Mechanism m, const BidProfile& b,
                      const TieBreakRule& t) {
  switch (m) {
    case Mechanism::kFirstPrice: return run_first_price(g, b, t);
    case Mechanism::kSecondPrice: return run_second_price(g, b, t);
    case Mechanism::kHouseClearing:
      validate_profile(g, b);
      return run_house_clearing(g, demand_from_profile(b), t);
  }
  throw InternalError("unknown mechanism");
}

double utility(const GameInstance& g, int i, const Outcome& o) {
  const Bidder& b = g.bidders.at(i);
  if (o.payment[i] > b.budget + kTolerance) return kNegInfinity;
  return eval_valuation(b.valuation, o.bundles[i], g.shares_per_item) - o.payment[i];
}

bool row_no_overbidding(const GameInstance& g, int i, const BidRow& row) {
  const Valuation& v = g.bidders.at(i).valuation;
  const int h = g.shares_per_item;
  const int m = g.num_items;
  // Every single share is a bundle.
  for (int j = 0; j < m; ++j) {
    for (double x : row[j]) {
      if (x > v.max_item_value(j) / h + kTolerance) return false;
    }
  }
  if (v.is_additive()) return true;
  if (m * h <= 12) {
    // Bids and value depend only on the chosen share multiset per item when
    // shares are sorted by bid, so the largest bids of each item suffice.
    std::vector<std::vector<double>> sorted(m);
    for (int j = 0; j < m; ++j) {
      sorted[j] = row[j];
      std::sort(sorted[j].begin(), sorted[j].end(), std::greater<double>());
    }
    ShareBundle bundle = ShareBundle::empty(m);
    std::vector<int>& c = bundle.counts;
    while (true) {
      double bid = 0.0;
      for (int j = 0; j < m; ++j) {
        for (int s = 0; s < c[j]; ++s) bid += sorted[j][s];
      }
      if (bid > eval_valuation(v, bundle, h) + kTolerance) return false;
      int j = 0;
      while (j < m && c[j] == h) c[j++] = 0;
      if (j == m) break;
      ++c[j];
    }
    return true;
  }
  // Sufficient condition: one clause dominates every share bid.
  for (const auto& clause : v.clauses()) {
    bool ok = true;
    for (int j = 0; j < m && ok; ++j) {
      for (double x : row[j]) {
        if (x > clause[j] / h + kTolerance) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return true;
  }
  return false;
}

bool check_no_overbidding(const GameInstance& g, int i, const BidProfile& b) {
  return row_no_overbidding(g, i, b.at(i));
}

double row_total(const BidRow& row) {
  double s = 0.0;
  for (const auto& item : row) {
    for (double x : item) s += x;
  }
  return s;
}

bool check_no_overbudget(const GameInstance& g, int i, const BidProfile& b) {
  return row_total(b.at(i)) <= g.bidders.at(i).budget + kTolerance;
}

DemandRow demand_from_row(const BidRow& row) {
  DemandRow d(row.size());
  for (size_t j = 0; j < row.size(); ++j) {
    double price = 0.0;
    int count = 0;
    for (double x : row[j]) {
      if (x <= kTolerance) continue;
      if (count > 0 && std::fabs(x - price) > kTolerance) {
        throw InputError("house row for item " + std::to_string(j) +
                         " bids more than one price");
      }
      price = x;
      ++count;
    }
    d[j] = ShareDemand{count, count > 0 ? price : 0.0};
  }
  return d;
}

BidRow row_from_demand(const DemandRow& d, int h) {
  BidRow row(d.size(), std::vector<double>(h, 0.0));
  for (size_t j = 0; j < d.size(); ++j) {
    for (int s = 0; s < d[j].shares && s < h; ++s) row[j][s] = d[j].price_per_share;
  }
  return row;
}

HouseDemand demand_from_profile(const BidProfile& b) {
  HouseDemand d;
  d.reserve(b.size());
  for (const auto& row : b) d.push_back(demand_from_row(row));
  return d;
}

BidRow zero_row(const GameInstance& g) {
  return BidRow(g.num_items, std::vector<double>(g.shares_per_item, 0.0));
}

BidProfile zero_profile(const GameInstance& g) {
  return BidProfile(g.num_bidders(), zero_row(g));
}

}  // namespace lwlab
