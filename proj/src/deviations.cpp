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

#include "lwlab/deviations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "engine.hpp"

namespace lwlab {

void AnalysisParams::validate() const {
  if (!(alpha > 1.0)) throw InputError("alpha must be greater than 1");
  if (!(gamma > 1.0)) throw InputError("gamma must be greater than 1");
}

bool BidderClassification::in_I(int i) const {
  return std::find(I.begin(), I.end(), i) != I.end();
}

namespace {

void check_fraction(double y, int h) {
  if (h < 1) throw InputError("h must be at least 1");
  if (!(y >= -kTolerance && y <= 1.0 + kTolerance)) {
    throw InputError("fraction " + std::to_string(y) + " outside [0, 1]");
  }
}

}  // namespace

double floor_fraction(double y, int h) {
  check_fraction(y, h);
  // The small slack keeps values such as 0.3 * 10 from flooring to 2.
  return std::floor(std::clamp(y, 0.0, 1.0) * h + 1e-9) / h;
}

double frac_indicator(double y, int h) {
  check_fraction(y, h);
  return y > 0.0 ? 1.0 / h : 0.0;
}

namespace {

int share_count(double delta, int h) {
  if (!(delta >= -kTolerance && delta <= 1.0 + kTolerance)) {
    throw InputError("delta outside [0, 1]");
  }
  double k = delta * h;
  double r = std::round(k);
  if (std::fabs(k - r) > 1e-9) {
    throw InputError("delta * h = " + std::to_string(k) + " is not an integer");
  }
  return static_cast<int>(r);
}

}  // namespace

std::vector<double> uniform_share_bid(int item, double delta, double pbar_j, int h,
                                      std::uint64_t seed) {
  if (h < 1) throw InputError("h must be at least 1");
  if (!(pbar_j >= 0.0)) throw InputError("price must be nonnegative");
  const int k = share_count(delta, h);
  std::vector<int> shares(h);
  std::iota(shares.begin(), shares.end(), 0);
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(item + 1)));
  // Partial Fisher-Yates: the first k entries are a uniform k-subset.
  for (int s = 0; s < k; ++s) {
    int r = s + static_cast<int>(rng() % static_cast<std::uint64_t>(h - s));
    std::swap(shares[s], shares[r]);
  }
  std::vector<double> row(h, 0.0);
  for (int s = 0; s < k; ++s) row[shares[s]] = pbar_j / h;
  return row;
}

double expected_shares_won(double delta, double pbar_j, int h,
                           const PriceDistribution& dist, double alpha) {
  if (h < 1) throw InputError("h must be at least 1");
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  share_count(delta, h);
  double total = 0.0;
  double mean_sum = 0.0;
  for (const auto& o : dist) {
    if (static_cast<int>(o.prices.size()) != h) {
      throw InputError("price outcome needs one price per share");
    }
    if (!(o.prob >= 0.0)) throw InputError("negative price probability");
    total += o.prob;
    for (double p : o.prices) {
      if (!(p >= 0.0)) throw InputError("negative price");
      mean_sum += o.prob * p;
    }
  }
  if (std::fabs(total - 1.0) > kTolerance) throw InputError("price probabilities do not sum to 1");
  if (std::fabs(alpha * mean_sum - pbar_j) > kTolerance * std::max(1.0, std::fabs(pbar_j))) {
    throw InputError("pbar is inconsistent with the price distribution");
  }
  const double bid = pbar_j / h;
  double wins = 0.0;
  for (const auto& o : dist) {
    for (double p : o.prices) {
      if (p < bid - kTolerance) wins += o.prob;
    }
  }
  // Each share is chosen with probability delta.
  return delta * wins;
}

BidderClassification classify_bidders(const GameInstance& g,
                                      const EquilibriumStats& stats,
                                      const AnalysisParams& params) {
  params.validate();
  if (!all_additive(g)) throw ModelError("classification needs additive valuations");
  const int n = g.num_bidders();
  const int m = g.num_items;
  const int h = g.shares_per_item;
  BidderClassification c;
  c.J.assign(n, {});
  c.Gamma.assign(n, {});
  c.G.assign(n, {});
  double price_per_share_total = 0.0;
  for (int j = 0; j < m; ++j) price_per_share_total += stats.pbar[j] / h;
  for (int i = 0; i < n; ++i) {
    const auto& v = g.bidders[i].valuation.item_values();
    const double B = g.bidders[i].budget;
    double boosted = 0.0;
    for (int j = 0; j < m; ++j) {
      bool in_j = v[j] >= stats.pbar[j] - kTolerance;
      bool in_gamma = stats.q[i][j] <= 1.0 / params.gamma + kTolerance;
      if (in_j) {
        c.J[i].push_back(j);
        boosted += stats.pbar[j] * stats.q[i][j];
      }
      if (in_gamma) c.Gamma[i].push_back(j);
      if (in_j && in_gamma) c.G[i].push_back(j);
    }
    bool i1 = params.gamma * boosted <= B + kTolerance;
    bool i2 = price_per_share_total <= B + kTolerance;
    bool i3 = stats.Q[i] <= 1.0 / (2.0 * params.gamma) + kTolerance;
    if (i1) c.I1.push_back(i);
    if (i2) c.I2.push_back(i);
    if (i3) c.I3.push_back(i);
    if (i1 && i2 && i3) c.I.push_back(i);
  }
  return c;
}

std::vector<double> llp_deviation_fractions(const GameInstance& g,
                                            const BidderClassification& cls, int i,
                                            const LLPSolution& y, DeviationKind kind) {
  const int h = g.shares_per_item;
  std::vector<double> f(g.num_items, 0.0);
  for (int j : cls.J.at(i)) {
    double yij = std::clamp(y.y.at(i).at(j), 0.0, 1.0);
    f[j] = kind == DeviationKind::kIntegral ? floor_fraction(yij, h) : frac_indicator(yij, h);
  }
  return f;
}

std::vector<double> boosting_deviation_fractions(const GameInstance& g,
                                                 const BidderClassification& cls,
                                                 int i, const EquilibriumStats& stats,
                                                 const AnalysisParams& params,
                                                 DeviationKind kind) {
  const int h = g.shares_per_item;
  std::vector<double> f(g.num_items, 0.0);
  for (int j : cls.G.at(i)) {
    double boosted = std::min(params.gamma * stats.q.at(i).at(j), 1.0);
    f[j] = kind == DeviationKind::kIntegral ? floor_fraction(boosted, h)
                                            : frac_indicator(boosted, h);
  }
  return f;
}

namespace {

BidRow build_deviation(const GameInstance& g, const BidderClassification& cls, int i,
                       const std::vector<double>& fractions,
                       const EquilibriumStats& stats, std::uint64_t seed) {
  if (!cls.in_I(i)) {
    throw InputError("bidder " + std::to_string(i) + " is not in the analysed set I");
  }
  BidRow row;
  for (int j = 0; j < g.num_items; ++j) {
    row.push_back(uniform_share_bid(j, fractions[j], stats.pbar[j], g.shares_per_item, seed));
  }
  const double B = g.bidders[i].budget;
  if (row_total(row) > B + kTolerance * std::max(1.0, B)) {
    throw InternalError("deviation of bidder " + std::to_string(i) + " exceeds the budget");
  }
  return row;
}

}  // namespace

BidRow llp_deviation(const GameInstance& g, const BidderClassification& cls, int i,
                     const LLPSolution& y, const EquilibriumStats& stats,
                     DeviationKind kind, std::uint64_t seed) {
  if (!cls.in_I(i)) {
    throw InputError("bidder " + std::to_string(i) + " is not in the analysed set I");
  }
  return build_deviation(g, cls, i, llp_deviation_fractions(g, cls, i, y, kind), stats, seed);
}

BidRow boosting_deviation(const GameInstance& g, const BidderClassification& cls,
                          int i, const EquilibriumStats& stats,
                          const AnalysisParams& params, DeviationKind kind,
                          std::uint64_t seed) {
  if (!cls.in_I(i)) {
    throw InputError("bidder " + std::to_string(i) + " is not in the analysed set I");
  }
  return build_deviation(
      g, cls, i, boosting_deviation_fractions(g, cls, i, stats, params, kind), stats, seed);
}

double deviation_utility(const GameInstance& g, Mechanism mech, const TieBreakRule& t,
                         const MixedProfile& s, int i,
                         const std::vector<double>& fractions,
                         const EquilibriumStats& stats) {
  if (!all_additive(g)) throw ModelError("deviation utility needs additive valuations");
  const int h = g.shares_per_item;
  const auto& v = g.bidders.at(i).valuation.item_values();
  std::vector<int> others;
  for (int k = 0; k < g.num_bidders(); ++k) {
    if (k != i) others.push_back(k);
  }
  double total = 0.0;
  detail::for_each_joint(g, s, others, [&](const BidProfile& rows, double p) {
    detail::OpponentField f(g, mech, t, i, rows);
    for (int j = 0; j < g.num_items; ++j) {
      const int k = share_count(fractions[j], h);
      if (k == 0) continue;
      const double bid = stats.pbar[j] / h;
      if (mech == Mechanism::kHouseClearing) {
        detail::ItemDist d = f.house_lottery(j, k, bid);
        double count = 0.0;
        for (size_t c = 1; c < d.size(); ++c) count += c * d[c];
        total += p * count * (v[j] / h - bid);
        continue;
      }
      // Every share is in the random subset with probability k / h.
      for (int l = 0; l < h; ++l) {
        detail::Chance c = f.share_chance(j, l, bid);
        total += p * (static_cast<double>(k) / h) * c.win * (v[j] / h - c.pay);
      }
    }
  });
  return total;
}

bool AuditReport::all_hold() const {
  return std::all_of(rows.begin(), rows.end(), [](const AuditRow& r) { return r.holds; });
}

double lpoa_bound_constant(double alpha, double gamma, double n_over_h) {
  const double half_c = 0.5 * (1.0 - 1.0 / alpha - 2.0 / gamma);
  if (!(half_c > 0.0)) throw InputError("1 - 1/alpha - 2/gamma must be positive");
  return (alpha + 2.0 + half_c * alpha * (1.0 + gamma + n_over_h)) / half_c;
}

namespace {

AuditRow make_row(std::string name, double lhs, double rhs, const char* relation) {
  AuditRow r{std::move(name), lhs, rhs, relation, true};
  const double slack = kTolerance * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
  r.holds = r.relation == "<=" ? lhs <= rhs + slack : lhs >= rhs - slack;
  return r;
}

}  // namespace

AuditReport audit_bounds(const GameInstance& g, Mechanism mech, const MixedProfile& s,
                         const TieBreakRule& t, const AnalysisParams& params) {
  params.validate();
  require_valid(g);
  if (!all_additive(g)) throw ModelError("audit needs additive valuations");
  Verdict verdict = verify_mixed_ne(g, mech, s, t);
  if (!verdict.is_equilibrium) {
    throw PreconditionError("audit_bounds requires an equilibrium profile");
  }
  const int n = g.num_bidders();
  const int h = g.shares_per_item;
  const double a = params.alpha;
  const double gm = params.gamma;
  const double n_h = static_cast<double>(n) / h;

  AuditReport rep;
  rep.stats = equilibrium_stats(g, mech, s, t, a);
  const EquilibriumStats& st = rep.stats;
  rep.classification = classify_bidders(g, st, params);
  const BidderClassification& cls = rep.classification;
  LLPSolution llp = solve_llp(g);
  rep.llp_objective = llp.objective;
  try {
    rep.opt = opt_exact(g).value;
    rep.opt_source = "opt_exact";
  } catch (const SizeError&) {
    rep.opt = llp.objective;
    rep.opt_source = "llp";
  }
  rep.bound_constant = lpoa_bound_constant(a, gm, n_h);

  const double rev = st.price_revenue;
  const double lw = st.exp_lw;
  double budget_not_i = 0.0;
  double budget_not_i3 = 0.0;
  double vq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double B = g.bidders[i].budget;
    const bool in_i3 = std::find(cls.I3.begin(), cls.I3.end(), i) != cls.I3.end();
    if (!cls.in_I(i)) budget_not_i += B;
    if (!in_i3) budget_not_i3 += B;
    if (cls.in_I(i)) {
      const auto& v = g.bidders[i].valuation.item_values();
      for (int j = 0; j < g.num_items; ++j) vq += v[j] * st.q[i][j];
    }
  }
  const double half_c = 0.5 * (1.0 - 1.0 / a - 2.0 / gm);

  rep.rows.push_back(make_row("budget_outside_I", budget_not_i,
                              a * (gm + n_h) * rev + budget_not_i3, "<="));
  rep.rows.push_back(make_row(
      "llp_deviation_value", vq,
      (0.5 - 0.5 / a) * (llp.objective - a * (1.0 + gm + n_h) * rev - budget_not_i3), ">="));
  rep.rows.push_back(make_row("boosting_deviation_value", (1.0 - 2.0 * a / (gm * (a - 1.0))) * vq,
                              a * rev + 2.0 * lw - budget_not_i3 / gm, "<="));
  rep.rows.push_back(make_row("combined_inequality",
                              (a + 2.0 + half_c * a * (1.0 + gm + n_h)) * lw,
                              half_c * rep.opt + (1.0 / gm - half_c) * budget_not_i3, ">="));
  rep.rows.push_back(make_row("opt_le_bound_times_lw", rep.opt, rep.bound_constant * lw, "<="));
  rep.rows.push_back(make_row("revenue_le_lw", st.exp_revenue, lw, "<="));
  rep.rows.push_back(make_row("price_revenue_le_lw", rev, lw, "<="));

  const struct {
    const char* name;
    bool llp;
    DeviationKind kind;
  } kinds[] = {{"llp-integral", true, DeviationKind::kIntegral},
               {"llp-fractional", true, DeviationKind::kFractional},
               {"boost-integral", false, DeviationKind::kIntegral},
               {"boost-fractional", false, DeviationKind::kFractional}};
  for (int i : cls.I) {
    const auto& v = g.bidders[i].valuation.item_values();
    for (const auto& k : kinds) {
      std::vector<double> f =
          k.llp ? llp_deviation_fractions(g, cls, i, llp, k.kind)
                : boosting_deviation_fractions(g, cls, i, st, params, k.kind);
      build_deviation(g, cls, i, f, st, 0);
      double guaranteed = 0.0;
      for (int j = 0; j < g.num_items; ++j) guaranteed += f[j] * (v[j] - st.pbar[j]);
      guaranteed *= 1.0 - 1.0 / a;
      double exact = deviation_utility(g, mech, t, s, i, f, st);
      rep.rows.push_back(make_row(
          "share_winning_bidder" + std::to_string(i) + "_" + k.name, guaranteed, exact, "<="));
    }
  }
  return rep;
}

}  // namespace lwlab
