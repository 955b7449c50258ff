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


#include "lwlab/serialization.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace lwlab {
namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw InputError(std::string("expected an object with '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("missing field '") + key + "'");
  return *it;
}

template <typename T>
T get_as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("field '") + what + "' has the wrong type");
  }
}

// JSON has no infinities; they are written as strings.
Json number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

Json valuation_to_json(const Valuation& v) {
  if (v.is_additive()) return Json{{"type", "additive"}, {"values", v.item_values()}};
  return Json{{"type", "xos"}, {"clauses", v.clauses()}};
}

Valuation valuation_from_json(const Json& j) {
  const auto type = get_as<std::string>(field(j, "type"), "type");
  if (type == "additive") {
    return Valuation::additive(get_as<std::vector<double>>(field(j, "values"), "values"));
  }
  if (type == "xos") {
    return Valuation::xos(
        get_as<std::vector<std::vector<double>>>(field(j, "clauses"), "clauses"));
  }
  throw InputError("unknown valuation type '" + type + "'");
}

Json rows_json(const BidRow& row) { return Json(row); }

Json deviation_to_json(const Deviation& d) {
  Json j{{"bidder", d.bidder}, {"bids", rows_json(d.bids)}, {"gain", number(d.gain)}};
  if (d.type) j["type"] = *d.type;
  return j;
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& name) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    size_t line = 1;
    const size_t end = std::min(e.byte, text.size());
    for (size_t k = 0; k + 1 < end; ++k) {
      if (text[k] == '\n') ++line;
    }
    throw InputError(name + ":" + std::to_string(line) + ": " + e.what());
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot write file");
  out << j.dump(2) << "\n";
}

Json to_json(const GameInstance& g) {
  Json bidders = Json::array();
  for (const auto& b : g.bidders) {
    bidders.push_back(Json{{"budget", b.budget}, {"valuation", valuation_to_json(b.valuation)}});
  }
  return Json{{"n", g.num_bidders()},
              {"m", g.num_items},
              {"h", g.shares_per_item},
              {"epsilon", g.bid_grid_step},
              {"bidders", bidders}};
}

GameInstance game_from_json(const Json& j) {
  GameInstance g;
  g.num_items = get_as<int>(field(j, "m"), "m");
  if (j.contains("h")) g.shares_per_item = get_as<int>(j["h"], "h");
  if (j.contains("epsilon")) g.bid_grid_step = get_as<double>(j["epsilon"], "epsilon");
  const Json& bidders = field(j, "bidders");
  if (!bidders.is_array()) throw InputError("field 'bidders' must be an array");
  for (const auto& b : bidders) {
    g.bidders.push_back(Bidder{valuation_from_json(field(b, "valuation")),
                               get_as<double>(field(b, "budget"), "budget")});
  }
  if (j.contains("n") && get_as<int>(j["n"], "n") != g.num_bidders()) {
    throw InputError("field 'n' does not match the number of bidders");
  }
  require_valid(g);
  return g;
}

Json to_json(const BidProfile& b) { return Json(b); }

Json to_json(const MixedProfile& s) {
  Json mixed = Json::array();
  for (const auto& strat : s) {
    Json rows = Json::array();
    for (const auto& w : strat) rows.push_back(Json{{"prob", w.prob}, {"bids", rows_json(w.bids)}});
    mixed.push_back(rows);
  }
  return Json{{"mixed", mixed}};
}

MixedProfile profile_from_json(const Json& j) {
  if (j.is_array()) return point_mass(get_as<BidProfile>(j, "profile"));
  const Json& mixed = field(j, "mixed");
  if (!mixed.is_array()) throw InputError("field 'mixed' must be an array");
  MixedProfile s;
  for (const auto& strat : mixed) {
    if (!strat.is_array()) throw InputError("each mixed strategy must be an array");
    MixedStrategy ms;
    for (const auto& w : strat) {
      ms.push_back(WeightedRow{get_as<BidRow>(field(w, "bids"), "bids"),
                               get_as<double>(field(w, "prob"), "prob")});
    }
    s.push_back(std::move(ms));
  }
  return s;
}

bool is_pure(const MixedProfile& s) {
  for (const auto& strat : s) {
    if (strat.size() != 1) return false;
  }
  return true;
}

BidProfile pure_part(const MixedProfile& s) {
  if (!is_pure(s)) throw InputError("profile is not pure");
  BidProfile b;
  for (const auto& strat : s) b.push_back(strat[0].bids);
  return b;
}

BidProfile pure_profile_from_json(const Json& j) { return pure_part(profile_from_json(j)); }

Json to_json(const Outcome& o) {
  Json bundles = Json::array();
  for (const auto& b : o.bundles) bundles.push_back(b.counts);
  return Json{{"winner", o.winner}, {"payment", o.payment}, {"bundles", bundles}};
}

Json to_json(const Verdict& v) {
  Json gains = Json::array();
  for (double x : v.best_gain) gains.push_back(number(x));
  return Json{{"is_equilibrium", v.is_equilibrium},
              {"worst", v.worst ? deviation_to_json(*v.worst) : Json(nullptr)},
              {"checked", v.checked},
              {"family", v.family},
              {"best_gain", gains},
              {"overbidding", v.overbidding}};
}

Json to_json(const OptResult& r) {
  Json bundles = Json::array();
  for (const auto& b : r.bundles) bundles.push_back(b.counts);
  return Json{{"value", r.value},
              {"allocation", r.allocation},
              {"bundles", bundles},
              {"method", r.method}};
}

Json to_json(const LLPSolution& s) { return Json{{"objective", s.objective}, {"y", s.y}}; }

Json to_json(const EquilibriumStats& s) {
  return Json{{"pbar", s.pbar},
              {"q", s.q},
              {"Q", s.Q},
              {"expected_payment", s.expected_payment},
              {"exp_revenue", s.exp_revenue},
              {"price_revenue", s.price_revenue},
              {"exp_lw", s.exp_lw},
              {"alpha", s.alpha}};
}

Json to_json(const BidderClassification& c) {
  return Json{{"I1", c.I1}, {"I2", c.I2}, {"I3", c.I3}, {"I", c.I},
              {"J", c.J},   {"Gamma", c.Gamma}, {"G", c.G}};
}

Json to_json(const AuditReport& a) {
  Json rows = Json::array();
  for (const auto& r : a.rows) {
    rows.push_back(Json{{"name", r.name},
                        {"lhs", number(r.lhs)},
                        {"relation", r.relation},
                        {"rhs", number(r.rhs)},
                        {"holds", r.holds}});
  }
  return Json{{"rows", rows},
              {"all_hold", a.all_hold()},
              {"stats", to_json(a.stats)},
              {"classification", to_json(a.classification)},
              {"llp_objective", a.llp_objective},
              {"opt", a.opt},
              {"opt_source", a.opt_source},
              {"bound_constant", a.bound_constant}};
}

Json to_json(const BrdResult& r) {
  Json cycle = Json::array();
  for (const auto& b : r.cycle) cycle.push_back(to_json(b));
  return Json{{"converged", r.converged},
              {"profile", to_json(r.profile)},
              {"cycle", cycle},
              {"rounds", r.rounds}};
}

Json to_json(const CertifiedInstance& c) {
  return Json{{"id", c.id},
              {"game", to_json(c.game)},
              {"mechanism", to_string(c.mechanism)},
              {"ties", c.ties.to_string()},
              {"profile", is_pure(c.profile) ? to_json(pure_part(c.profile)) : to_json(c.profile)},
              {"claimed_opt", c.claimed_opt},
              {"claimed_eq_lw", c.claimed_eq_lw},
              {"source", c.source}};
}

InstanceFile instance_from_json(const Json& j) {
  InstanceFile f;
  if (!j.is_object()) throw InputError("an instance file must hold a JSON object");
  if (j.contains("bidders")) {
    f.instance.game = game_from_json(j);
    return f;
  }
  f.instance.game = game_from_json(field(j, "game"));
  if (j.contains("id")) f.instance.id = get_as<std::string>(j["id"], "id");
  if (j.contains("source")) f.instance.source = get_as<std::string>(j["source"], "source");
  if (j.contains("mechanism")) {
    f.instance.mechanism = parse_mechanism(get_as<std::string>(j["mechanism"], "mechanism"));
    f.has_mechanism = true;
  }
  if (j.contains("ties")) {
    f.instance.ties = TieBreakRule::parse(get_as<std::string>(j["ties"], "ties"));
    f.has_ties = true;
  }
  if (j.contains("profile") && !j["profile"].is_null()) {
    f.instance.profile = profile_from_json(j["profile"]);
    validate_mixed(f.instance.game, f.instance.profile);
    f.has_profile = true;
  }
  if (j.contains("claimed_opt") && j.contains("claimed_eq_lw")) {
    f.instance.claimed_opt = get_as<double>(j["claimed_opt"], "claimed_opt");
    f.instance.claimed_eq_lw = get_as<double>(j["claimed_eq_lw"], "claimed_eq_lw");
    f.has_claims = true;
  }
  return f;
}

}  // namespace lwlab
