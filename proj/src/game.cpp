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

#include "lwlab/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lwlab {

Valuation Valuation::additive(std::vector<double> values) {
  return Valuation({std::move(values)}, true);
}

Valuation Valuation::xos(std::vector<std::vector<double>> clauses) {
  return Valuation(std::move(clauses), false);
}

int Valuation::num_items() const {
  return clauses_.empty() ? 0 : static_cast<int>(clauses_.front().size());
}

const std::vector<double>& Valuation::item_values() const {
  if (!additive_) throw ModelError("item_values requires an additive valuation");
  return clauses_.front();
}

double Valuation::max_item_value(int item) const {
  double best = 0.0;
  for (const auto& c : clauses_) best = std::max(best, c.at(item));
  return best;
}

namespace {

void check_dims(const Valuation& v, const ShareBundle& bundle) {
  if (v.clauses().empty()) throw ModelError("valuation has no clauses");
  for (const auto& c : v.clauses()) {
    if (c.size() != bundle.counts.size()) {
      std::ostringstream os;
      os << "bundle has " << bundle.counts.size() << " items, valuation has "
         << c.size();
      throw ModelError(os.str());
    }
  }
}

double clause_value(const std::vector<double>& clause, const ShareBundle& b,
                    int h) {
  double total = 0.0;
  for (size_t j = 0; j < clause.size(); ++j) {
    total += clause[j] * b.counts[j] / h;
  }
  return total;
}

}  // namespace

double eval_valuation(const Valuation& v, const ShareBundle& bundle, int h) {
  check_dims(v, bundle);
  double best = 0.0;
  for (const auto& c : v.clauses()) best = std::max(best, clause_value(c, bundle, h));
  return best;
}

int maximizing_clause(const Valuation& v, const ShareBundle& bundle, int h) {
  if (v.is_additive()) throw ModelError("maximizing_clause requires an XOS valuation");
  check_dims(v, bundle);
  int arg = 0;
  double best = -1.0;
  for (size_t r = 0; r < v.clauses().size(); ++r) {
    double val = clause_value(v.clauses()[r], bundle, h);
    if (val > best) {
      best = val;
      arg = static_cast<int>(r);
    }
  }
  return arg;
}

std::vector<Violation> validate_instance(const GameInstance& g) {
  std::vector<Violation> out;
  if (g.bidders.empty()) out.push_back({std::nullopt, "n", "need at least one bidder"});
  if (g.num_items < 1) out.push_back({std::nullopt, "m", "need at least one item"});
  if (g.shares_per_item < 1) out.push_back({std::nullopt, "h", "need at least one share per item"});
  if (!(g.bid_grid_step > 0.0) || !std::isfinite(g.bid_grid_step)) {
    out.push_back({std::nullopt, "epsilon", "bid grid step must be positive"});
  }
  for (int i = 0; i < g.num_bidders(); ++i) {
    const Bidder& b = g.bidders[i];
    if (!(b.budget >= 0.0) || !std::isfinite(b.budget)) {
      out.push_back({i, "budget", "budget must be a nonnegative number"});
    }
    const auto& clauses = b.valuation.clauses();
    if (clauses.empty()) {
      out.push_back({i, "valuation", "valuation needs at least one clause"});
      continue;
    }
    for (size_t r = 0; r < clauses.size(); ++r) {
      const auto& c = clauses[r];
      if (static_cast<int>(c.size()) != g.num_items) {
        std::ostringstream os;
        os << "clause " << r << " has " << c.size() << " values, expected "
           << g.num_items;
        out.push_back({i, "valuation", os.str()});
        continue;
      }
      for (size_t j = 0; j < c.size(); ++j) {
        if (!(c[j] >= 0.0) || !std::isfinite(c[j])) {
          std::ostringstream os;
          os << "clause " << r << " item " << j << " value must be nonnegative";
          out.push_back({i, "valuation", os.str()});
        }
      }
    }
  }
  return out;
}

void require_valid(const GameInstance& g) {
  auto report = validate_instance(g);
  if (report.empty()) return;
  const Violation& v = report.front();
  std::ostringstream os;
  os << "invalid instance: ";
  if (v.bidder) os << "bidder " << *v.bidder << " ";
  os << v.field << ": " << v.message;
  throw ModelError(os.str());
}

bool all_additive(const GameInstance& g) {
  for (const auto& b : g.bidders) {
    if (!b.valuation.is_additive()) return false;
  }
  return true;
}

long long grid_units(double x, double step) {
  if (x < -kTolerance) return -1;
  double u = x / step;
  double r = std::round(u);
  if (std::fabs(r * step - x) > kTolerance) return -1;
  return static_cast<long long>(r);
}

double grid_value(long long units, double step) {
  double inv = std::round(1.0 / step);
  if (inv >= 1.0 && std::fabs(inv * step - 1.0) < 1e-12) {
    return static_cast<double>(units) / inv;
  }
  return static_cast<double>(units) * step;
}

}  // namespace lwlab
