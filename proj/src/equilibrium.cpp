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

#include "lwlab/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "engine.hpp"

namespace lwlab {

using detail::OpponentField;

MixedProfile point_mass(const BidProfile& b) {
  MixedProfile s;
  s.reserve(b.size());
  for (const auto& row : b) s.push_back({WeightedRow{row, 1.0}});
  return s;
}

void validate_mixed(const GameInstance& g, const MixedProfile& s) {
  if (static_cast<int>(s.size()) != g.num_bidders()) {
    throw InputError("mixed profile has wrong bidder count");
  }
  for (int i = 0; i < g.num_bidders(); ++i) {
    if (s[i].empty()) throw InputError("bidder " + std::to_string(i) + " has an empty strategy");
    double total = 0.0;
    for (const auto& w : s[i]) {
      if (!(w.prob >= 0.0)) throw InputError("negative strategy probability");
      total += w.prob;
      BidProfile probe(g.num_bidders(), zero_row(g));
      probe[i] = w.bids;
      validate_profile(g, probe);
    }
    if (std::fabs(total - 1.0) > kTolerance) {
      throw InputError("strategy of bidder " + std::to_string(i) + " sums to " +
                       std::to_string(total));
    }
  }
}

namespace {

constexpr double kJointLimit = detail::kJointLimit;
constexpr double kPickEps = 1e-11;

void require_grid(const GameInstance& g, const MixedProfile& s) {
  for (const auto& strat : s) {
    for (const auto& w : strat) {
      if (!on_grid(g, w.bids)) throw InputError("profile bid is not on the bid grid");
    }
  }
}

struct View {
  OpponentField field;
  double prob;
};

std::vector<View> opponent_views(const GameInstance& g, Mechanism mech,
                                 const TieBreakRule& t, int focal,
                                 const MixedProfile& s) {
  std::vector<int> others;
  for (int k = 0; k < g.num_bidders(); ++k) {
    if (k != focal) others.push_back(k);
  }
  std::vector<View> views;
  detail::for_each_joint(g, s, others, [&](const BidProfile& rows, double p) {
    views.push_back({OpponentField(g, mech, t, focal, rows), p});
  });
  return views;
}

double view_utility(const std::vector<View>& views, const GameInstance& g,
                    const Valuation& v, double budget, const BidRow& row) {
  double u = 0.0;
  for (const auto& view : views) {
    double x = detail::focal_utility(view.field, g, v, budget, row);
    if (x == kNegInfinity) return kNegInfinity;
    u += view.prob * x;
  }
  return u;
}

double strategy_utility(const std::vector<View>& views, const GameInstance& g,
                        const Valuation& v, double budget, const MixedStrategy& own) {
  double u = 0.0;
  for (const auto& w : own) {
    if (w.prob <= 0.0) continue;
    double x = view_utility(views, g, v, budget, w.bids);
    if (x == kNegInfinity) return kNegInfinity;
    u += w.prob * x;
  }
  return u;
}

// One unit of the deviation search: a single share, or a whole item.
struct Option {
  int cost;  // grid units
  int k;     // shares bid
  long long u;
};
struct Unit {
  int item;
  int share;  // -1: the option bids on the first k shares of the item
  std::vector<Option> options;
};

long long budget_units(const GameInstance& g, double budget) {
  return static_cast<long long>(std::floor(budget / g.bid_grid_step + 1e-6));
}

std::vector<Unit> build_units(const GameInstance& g, Mechanism mech,
                              const Valuation& v, double budget, bool structured,
                              bool no_overbidding) {
  const int h = g.shares_per_item;
  const long long U = budget_units(g, budget);
  auto allowed = [&](int j, long long u) {
    if (!no_overbidding || u == 0) return true;
    return grid_value(u, g.bid_grid_step) <= v.max_item_value(j) / h + kTolerance;
  };
  std::vector<Unit> units;
  for (int j = 0; j < g.num_items; ++j) {
    if (mech != Mechanism::kHouseClearing && !structured) {
      for (int l = 0; l < h; ++l) {
        Unit unit{j, l, {}};
        for (long long u = 0; u <= U; ++u) {
          if (allowed(j, u)) unit.options.push_back({static_cast<int>(u), u > 0 ? 1 : 0, u});
        }
        units.push_back(std::move(unit));
      }
      continue;
    }
    Unit unit{j, -1, {{0, 0, 0}}};
    for (int k = structured ? h : 1; k <= h; ++k) {
      for (long long u = 1; u * k <= U; ++u) {
        if (allowed(j, u)) unit.options.push_back({static_cast<int>(u * k), k, u});
      }
    }
    units.push_back(std::move(unit));
  }
  return units;
}

void apply_option(const GameInstance& g, const Unit& unit, const Option& o,
                  BidRow& row) {
  double bid = grid_value(o.u, g.bid_grid_step);
  if (unit.share >= 0) {
    row[unit.item][unit.share] = bid;
    return;
  }
  for (int l = 0; l < g.shares_per_item; ++l) row[unit.item][l] = l < o.k ? bid : 0.0;
}

std::uint64_t count_rows(const std::vector<Unit>& units, long long U) {
  const std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> cnt(U + 1, 1);
  for (int k = static_cast<int>(units.size()) - 1; k >= 0; --k) {
    std::vector<std::uint64_t> next(U + 1, 0);
    for (long long b = 0; b <= U; ++b) {
      std::uint64_t total = 0;
      for (const auto& o : units[k].options) {
        if (o.cost > b) continue;
        std::uint64_t add = cnt[b - o.cost];
        total = (total > kMax - add) ? kMax : total + add;
      }
      next[b] = total;
    }
    cnt.swap(next);
  }
  return cnt[U];
}

// Visits every budget-feasible combination of unit options, in
// lexicographic option order.
template <typename Visit>
void enumerate_rows(const GameInstance& g, const std::vector<Unit>& units,
                    long long U, Visit visit) {
  BidRow row = zero_row(g);
  auto rec = [&](auto&& self, size_t k, long long left) -> void {
    if (k == units.size()) {
      visit(static_cast<const BidRow&>(row));
      return;
    }
    for (const auto& o : units[k].options) {
      if (o.cost > left) continue;
      apply_option(g, units[k], o, row);
      self(self, k + 1, left - o.cost);
    }
    apply_option(g, units[k], Option{0, 0, 0}, row);
  };
  rec(rec, 0, U);
}

struct SearchSpace {
  std::vector<Unit> units;
  long long budget_units = 0;
  std::uint64_t size = 0;
  bool structured = false;
};

SearchSpace make_space(const GameInstance& g, Mechanism mech, int i,
                       const DeviationOptions& opts, bool allow_fallback) {
  const Bidder& b = g.bidders.at(i);
  SearchSpace sp;
  sp.budget_units = budget_units(g, b.budget);
  sp.structured = opts.structured;
  sp.units = build_units(g, mech, b.valuation, b.budget, sp.structured, opts.no_overbidding);
  sp.size = count_rows(sp.units, sp.budget_units);
  if (!sp.structured && allow_fallback && sp.size > opts.enumeration_limit) {
    sp.structured = true;
    sp.units = build_units(g, mech, b.valuation, b.budget, true, opts.no_overbidding);
    sp.size = count_rows(sp.units, sp.budget_units);
  }
  return sp;
}

BestResponse knapsack_response(const GameInstance& g, Mechanism mech,
                               const Bidder& bidder, const SearchSpace& sp,
                               const std::vector<View>& views) {
  const int h = g.shares_per_item;
  const auto& values = bidder.valuation.item_values();
  const long long U = sp.budget_units;
  const int K = static_cast<int>(sp.units.size());

  std::vector<std::vector<double>> gain(K);
  for (int k = 0; k < K; ++k) {
    const Unit& unit = sp.units[k];
    const double per_share = values[unit.item] / h;
    gain[k].assign(unit.options.size(), 0.0);
    for (size_t o = 0; o < unit.options.size(); ++o) {
      const Option& opt = unit.options[o];
      if (opt.k == 0) continue;
      double bid = grid_value(opt.u, g.bid_grid_step);
      double total = 0.0;
      for (const auto& view : views) {
        if (unit.share >= 0) {
          detail::Chance c = view.field.share_chance(unit.item, unit.share, bid);
          total += view.prob * c.win * (per_share - c.pay);
        } else {
          std::vector<double> bids(h, 0.0);
          for (int l = 0; l < opt.k; ++l) bids[l] = bid;
          detail::ItemDist d = view.field.item_dist(unit.item, bids);
          double count = 0.0;
          for (size_t c = 1; c < d.size(); ++c) count += c * d[c];
          total += view.prob * (count * per_share -
                                view.field.item_expected_payment(unit.item, bids));
        }
      }
      gain[k][o] = total;
    }
  }

  const double neg = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best(K + 1, std::vector<double>(U + 1, 0.0));
  for (int k = K - 1; k >= 0; --k) {
    for (long long b = 0; b <= U; ++b) {
      double v = neg;
      for (size_t o = 0; o < sp.units[k].options.size(); ++o) {
        int c = sp.units[k].options[o].cost;
        if (c > b) continue;
        v = std::max(v, gain[k][o] + best[k + 1][b - c]);
      }
      best[k][b] = v;
    }
  }

  BestResponse br;
  br.bids = zero_row(g);
  long long left = U;
  for (int k = 0; k < K; ++k) {
    const double target = best[k][left];
    const double eps = kPickEps * std::max(1.0, std::fabs(target));
    for (size_t o = 0; o < sp.units[k].options.size(); ++o) {
      int c = sp.units[k].options[o].cost;
      if (c > left) continue;
      if (gain[k][o] + best[k + 1][left - c] >= target - eps) {
        apply_option(g, sp.units[k], sp.units[k].options[o], br.bids);
        left -= c;
        break;
      }
    }
  }
  (void)mech;
  return br;
}

BestResponse enumeration_response(const GameInstance& g, const Bidder& bidder,
                                  const SearchSpace& sp, const DeviationOptions& opts,
                                  int i, const std::vector<View>& views) {
  BestResponse br;
  br.bids = zero_row(g);
  double best = kNegInfinity;
  bool found = false;
  enumerate_rows(g, sp.units, sp.budget_units, [&](const BidRow& row) {
    if (opts.no_overbidding && !bidder.valuation.is_additive() &&
        !row_no_overbidding(g, i, row)) {
      return;
    }
    double u = view_utility(views, g, bidder.valuation, bidder.budget, row);
    if (!found || u > best + kPickEps * std::max(1.0, std::fabs(best))) {
      best = u;
      br.bids = row;
      found = true;
    }
  });
  return br;
}

BestResponse best_response_views(const GameInstance& g, Mechanism mech, int i,
                                  const MixedStrategy& own,
                                  const std::vector<View>& views,
                                  const DeviationOptions& opts) {
  const Bidder& bidder = g.bidders[i];
  SearchSpace sp = make_space(g, mech, i, opts, true);
  if (sp.size > opts.enumeration_limit &&
      (opts.force_enumeration || !bidder.valuation.is_additive())) {
    throw SizeError("deviation space of bidder " + std::to_string(i) + " has " +
                    std::to_string(sp.size) + " rows, above the enumeration limit");
  }
  BestResponse br = (opts.force_enumeration || !bidder.valuation.is_additive())
                        ? enumeration_response(g, bidder, sp, opts, i, views)
                        : knapsack_response(g, mech, bidder, sp, views);
  br.value = view_utility(views, g, bidder.valuation, bidder.budget, br.bids);
  br.current = strategy_utility(views, g, bidder.valuation, bidder.budget, own);
  br.checked = sp.size;
  br.family = sp.structured ? kStructuredFamily : kFullGridFamily;
  return br;
}

double gain_of(const BestResponse& br) {
  if (br.current == kNegInfinity) {
    return br.value == kNegInfinity ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return br.value - br.current;
}

void fold(Verdict& v, const BestResponse& br, int bidder, std::optional<int> type) {
  double gain = gain_of(br);
  v.checked += br.checked;
  if (br.family != kFullGridFamily) v.family = br.family;
  if (static_cast<int>(v.best_gain.size()) <= bidder) v.best_gain.resize(bidder + 1, 0.0);
  v.best_gain[bidder] = std::max(v.best_gain[bidder], gain);
  if (gain > kTolerance && (!v.worst || gain > v.worst->gain)) {
    v.is_equilibrium = false;
    v.worst = Deviation{bidder, type, br.bids, gain};
  }
}

}  // namespace

std::vector<BidRow> deviation_space(const GameInstance& g, int i, Mechanism mech,
                                    const DeviationOptions& opts) {
  require_valid(g);
  SearchSpace sp = make_space(g, mech, i, opts, false);
  if (sp.size > opts.enumeration_limit) {
    throw SizeError("deviation space has " + std::to_string(sp.size) +
                    " rows, above the enumeration limit");
  }
  std::vector<BidRow> rows;
  rows.reserve(sp.size);
  const Bidder& b = g.bidders[i];
  enumerate_rows(g, sp.units, sp.budget_units, [&](const BidRow& row) {
    if (opts.no_overbidding && !b.valuation.is_additive() && !row_no_overbidding(g, i, row)) {
      return;
    }
    rows.push_back(row);
  });
  return rows;
}

std::uint64_t deviation_space_size(const GameInstance& g, int i, Mechanism mech,
                                   const DeviationOptions& opts) {
  require_valid(g);
  return make_space(g, mech, i, opts, false).size;
}

BestResponse best_response(const GameInstance& g, Mechanism mech,
                           const TieBreakRule& t, int i, const MixedProfile& s,
                           const DeviationOptions& opts) {
  require_valid(g);
  t.validate(g.num_bidders());
  validate_mixed(g, s);
  auto views = opponent_views(g, mech, t, i, s);
  return best_response_views(g, mech, i, s[i], views, opts);
}

Verdict verify_mixed_ne(const GameInstance& g, Mechanism mech, const MixedProfile& s,
                        const TieBreakRule& t, const DeviationOptions& opts) {
  require_valid(g);
  t.validate(g.num_bidders());
  validate_mixed(g, s);
  require_grid(g, s);
  double joint = 1.0;
  for (const auto& strat : s) joint *= static_cast<double>(strat.size());
  if (joint > kJointLimit) throw SizeError("joint support exceeds 1e6 profiles");
  Verdict v;
  v.best_gain.assign(g.num_bidders(), 0.0);
  for (int i = 0; i < g.num_bidders(); ++i) {
    auto views = opponent_views(g, mech, t, i, s);
    fold(v, best_response_views(g, mech, i, s[i], views, opts), i, std::nullopt);
    if (mech == Mechanism::kSecondPrice) {
      for (const auto& w : s[i]) {
        if (w.prob > 0.0 && !row_no_overbidding(g, i, w.bids)) {
          v.overbidding.push_back(i);
          break;
        }
      }
    }
  }
  return v;
}

Verdict verify_pure_ne(const GameInstance& g, Mechanism mech, const BidProfile& b,
                       const TieBreakRule& t, const DeviationOptions& opts) {
  validate_profile(g, b);
  return verify_mixed_ne(g, mech, point_mass(b), t, opts);
}

Verdict verify_bayesian_ne(const BayesianGame& bg, Mechanism mech,
                           const BayesianStrategy& strategy, const TieBreakRule& t,
                           const DeviationOptions& opts) {
  const int n = static_cast<int>(bg.types.size());
  if (static_cast<int>(strategy.size()) != n) {
    throw InputError("Bayesian strategy has wrong bidder count");
  }
  GameInstance g;
  g.num_items = bg.num_items;
  g.shares_per_item = bg.shares_per_item;
  g.bid_grid_step = bg.bid_grid_step;
  for (int i = 0; i < n; ++i) {
    if (bg.types[i].empty()) throw InputError("bidder " + std::to_string(i) + " has no types");
    if (strategy[i].size() != bg.types[i].size()) {
      throw InputError("bidder " + std::to_string(i) + " needs one strategy per type");
    }
    double total = 0.0;
    for (const auto& ty : bg.types[i]) {
      if (!(ty.prob >= 0.0)) throw InputError("negative type probability");
      total += ty.prob;
    }
    if (std::fabs(total - 1.0) > kTolerance) {
      throw InputError("type probabilities of bidder " + std::to_string(i) + " do not sum to 1");
    }
    g.bidders.push_back({bg.types[i][0].valuation, bg.types[i][0].budget});
  }
  require_valid(g);
  t.validate(n);

  // Others appear to bidder i as the mixture over their types.
  MixedProfile mixture(n);
  double joint = 1.0;
  for (int i = 0; i < n; ++i) {
    for (size_t ty = 0; ty < bg.types[i].size(); ++ty) {
      for (const auto& w : strategy[i][ty]) {
        double p = bg.types[i][ty].prob * w.prob;
        if (p <= 0.0) continue;
        auto it = std::find_if(mixture[i].begin(), mixture[i].end(),
                               [&](const WeightedRow& r) { return r.bids == w.bids; });
        if (it == mixture[i].end()) {
          mixture[i].push_back({w.bids, p});
        } else {
          it->prob += p;
        }
      }
    }
    joint *= static_cast<double>(std::max<size_t>(1, mixture[i].size()));
  }
  if (joint > kJointLimit) throw SizeError("joint type and support enumeration exceeds 1e6");
  Verdict v;
  v.best_gain.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (size_t ty = 0; ty < bg.types[i].size(); ++ty) {
      MixedProfile s = mixture;
      s[i] = strategy[i][ty];
      GameInstance gi = g;
      gi.bidders[i] = Bidder{bg.types[i][ty].valuation, bg.types[i][ty].budget};
      require_valid(gi);
      validate_mixed(gi, s);
      require_grid(gi, s);
      auto views = opponent_views(gi, mech, t, i, s);
      fold(v, best_response_views(gi, mech, i, s[i], views, opts), i,
           static_cast<int>(ty));
    }
  }
  return v;
}

namespace {

std::vector<long long> profile_key(const GameInstance& g, const BidProfile& b) {
  std::vector<long long> key;
  for (const auto& row : b) {
    for (const auto& item : row) {
      for (double x : item) key.push_back(std::llround(x / g.bid_grid_step));
    }
  }
  return key;
}

}  // namespace

BrdResult best_response_dynamics(const GameInstance& g, Mechanism mech,
                                 const TieBreakRule& t, const BidProfile& initial,
                                 int max_rounds, const DeviationOptions& opts) {
  require_valid(g);
  t.validate(g.num_bidders());
  validate_profile(g, initial);
  require_grid(g, point_mass(initial));
  BrdResult res;
  res.profile = initial;
  std::map<std::vector<long long>, int> seen;
  std::vector<BidProfile> history{initial};
  seen.emplace(profile_key(g, initial), 0);
  for (int round = 1; round <= max_rounds; ++round) {
    bool changed = false;
    for (int i = 0; i < g.num_bidders(); ++i) {
      MixedProfile s = point_mass(res.profile);
      auto views = opponent_views(g, mech, t, i, s);
      BestResponse br = best_response_views(g, mech, i, s[i], views, opts);
      if (gain_of(br) > kTolerance) {
        res.profile[i] = br.bids;
        changed = true;
      }
    }
    res.rounds = round;
    if (!changed) {
      res.converged = true;
      return res;
    }
    auto [it, fresh] = seen.emplace(profile_key(g, res.profile), round);
    history.push_back(res.profile);
    if (!fresh) {
      res.cycle.assign(history.begin() + it->second, history.end());
      return res;
    }
  }
  return res;
}

PneSearch find_pure_equilibria(const GameInstance& g, Mechanism mech,
                               const TieBreakRule& t, std::uint64_t profile_limit,
                               const DeviationOptions& opts) {
  require_valid(g);
  t.validate(g.num_bidders());
  const int n = g.num_bidders();
  std::vector<std::vector<BidRow>> spaces(n);
  double total = 1.0;
  for (int i = 0; i < n; ++i) {
    spaces[i] = deviation_space(g, i, mech, opts);
    total *= static_cast<double>(spaces[i].size());
  }
  if (total > static_cast<double>(profile_limit)) {
    throw SizeError("pure profile space exceeds the search limit");
  }

  struct Cached {
    std::vector<View> views;
    double best;
  };
  std::vector<std::unordered_map<std::uint64_t, Cached>> cache(n);
  PneSearch res;
  std::vector<size_t> idx(n, 0);
  BidProfile profile(n);
  while (true) {
    for (int i = 0; i < n; ++i) profile[i] = spaces[i][idx[i]];
    ++res.profiles_checked;
    bool stable = true;
    for (int i = 0; i < n && stable; ++i) {
      std::uint64_t key = 0;
      for (int k = n - 1; k >= 0; --k) {
        if (k != i) key = key * spaces[k].size() + idx[k];
      }
      auto it = cache[i].find(key);
      if (it == cache[i].end()) {
        Cached c;
        c.views = opponent_views(g, mech, t, i, point_mass(profile));
        c.best = best_response_views(g, mech, i, MixedStrategy{}, c.views, opts).value;
        it = cache[i].emplace(key, std::move(c)).first;
      }
      const Bidder& b = g.bidders[i];
      double u = view_utility(it->second.views, g, b.valuation, b.budget, profile[i]);
      stable = u >= it->second.best - kTolerance;
    }
    if (stable) res.equilibria.push_back(profile);
    int k = 0;
    while (k < n && ++idx[k] == spaces[k].size()) idx[k++] = 0;
    if (k == n) break;
  }
  return res;
}

EquilibriumStats equilibrium_stats(const GameInstance& g, Mechanism mech,
                                   const MixedProfile& s, const TieBreakRule& t,
                                   double alpha) {
  require_valid(g);
  t.validate(g.num_bidders());
  validate_mixed(g, s);
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  const int n = g.num_bidders();
  const int m = g.num_items;
  const int h = g.shares_per_item;
  EquilibriumStats st;
  st.alpha = alpha;
  st.pbar.assign(m, 0.0);
  st.q.assign(n, std::vector<double>(m, 0.0));
  st.Q.assign(n, 0.0);
  st.expected_payment.assign(n, 0.0);
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  detail::for_each_joint(g, s, all, [&](const BidProfile& rows, double p) {
    auto sums = detail::item_price_sums(g, mech, rows);
    for (int j = 0; j < m; ++j) st.pbar[j] += alpha * p * sums[j];
    for (int i = 0; i < n; ++i) {
      OpponentField f(g, mech, t, i, rows);
      const Bidder& b = g.bidders[i];
      auto sum = detail::summarize(f, g, b.valuation, b.budget, rows[i]);
      for (int j = 0; j < m; ++j) st.q[i][j] += p * sum.expected_counts[j] / h;
      st.Q[i] += p * sum.prob_at_budget;
      st.expected_payment[i] += p * sum.expected_payment;
      st.exp_lw += p * sum.expected_capped;
    }
  });
  for (double x : st.expected_payment) st.exp_revenue += x;
  for (double x : st.pbar) st.price_revenue += x / alpha;
  return st;
}

std::vector<double> expected_utilities(const GameInstance& g, Mechanism mech,
                                       const MixedProfile& s, const TieBreakRule& t) {
  require_valid(g);
  t.validate(g.num_bidders());
  validate_mixed(g, s);
  std::vector<double> u(g.num_bidders(), 0.0);
  for (int i = 0; i < g.num_bidders(); ++i) {
    auto views = opponent_views(g, mech, t, i, s);
    const Bidder& b = g.bidders[i];
    u[i] = strategy_utility(views, g, b.valuation, b.budget, s[i]);
  }
  return u;
}

std::vector<WeightedOutcome> outcome_distribution(const GameInstance& g,
                                                  Mechanism mech,
                                                  const MixedProfile& s,
                                                  const TieBreakRule& t) {
  require_valid(g);
  t.validate(g.num_bidders());
  validate_mixed(g, s);
  const int n = g.num_bidders();
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  std::vector<WeightedOutcome> out;
  auto push = [&](Outcome o, double p) {
    if (out.size() >= static_cast<size_t>(kJointLimit)) {
      throw SizeError("outcome distribution exceeds 1e6 outcomes");
    }
    out.push_back({std::move(o), p});
  };
  detail::for_each_joint(g, s, all, [&](const BidProfile& rows, double p) {
    if (!t.is_uniform()) {
      push(run_mechanism(g, mech, rows, t), p);
      return;
    }
    if (mech == Mechanism::kHouseClearing) {
      HouseDemand d = demand_from_profile(rows);
      // Record the equal-price groups, then walk all service orders.
      std::vector<std::vector<int>> groups;
      detail::run_house(g, d, [&](int, const std::vector<int>& grp) {
        groups.push_back(grp);
        return grp;
      });
      std::vector<std::vector<int>> perm = groups;
      double each = p;
      for (const auto& grp : groups) {
        for (size_t k = 2; k <= grp.size(); ++k) each /= static_cast<double>(k);
      }
      while (true) {
        size_t call = 0;
        push(detail::run_house(g, d, [&](int, const std::vector<int>&) {
               return perm[call++];
             }),
             each);
        size_t k = 0;
        while (k < perm.size() && !std::next_permutation(perm[k].begin(), perm[k].end())) ++k;
        if (k == perm.size()) break;
      }
      return;
    }
    // Share auctions: each tied share picks one of its tied bidders.
    std::vector<std::vector<int>> tied_sets;
    const bool first = mech == Mechanism::kFirstPrice;
    detail::run_share_auction(g, rows, first, [&](int, int, const std::vector<int>& tied) {
      tied_sets.push_back(tied);
      return tied.front();
    });
    double each = p;
    for (const auto& ts : tied_sets) each /= static_cast<double>(ts.size());
    std::vector<size_t> pick(tied_sets.size(), 0);
    while (true) {
      size_t call = 0;
      push(detail::run_share_auction(g, rows, first,
                                     [&](int, int, const std::vector<int>& tied) {
                                       return tied[pick[call++]];
                                     }),
           each);
      size_t k = 0;
      while (k < pick.size() && ++pick[k] == tied_sets[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  });
  return out;
}

}  // namespace lwlab
