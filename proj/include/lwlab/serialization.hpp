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


#ifndef LWLAB_SERIALIZATION_HPP_
#define LWLAB_SERIALIZATION_HPP_

#include <string>

#include "json.hpp"
#include "lwlab/deviations.hpp"
#include "lwlab/equilibrium.hpp"
#include "lwlab/game.hpp"
#include "lwlab/instances.hpp"
#include "lwlab/mechanisms.hpp"
#include "lwlab/welfare.hpp"

namespace lwlab {

using Json = nlohmann::json;

// Parses JSON text; syntax errors become InputError "<name>:<line>: ...".
Json parse_json_text(const std::string& text, const std::string& name);
Json load_json_file(const std::string& path);
// Writes j with two-space indentation and a trailing newline.
void write_json_file(const std::string& path, const Json& j);

// {n, m, h, epsilon, bidders: [{budget, valuation}]}, where a valuation is
// {type: "additive", values} or {type: "xos", clauses}.
Json to_json(const GameInstance& g);
// Throws InputError on missing or mistyped fields and ModelError when the
// instance fails validation.
GameInstance game_from_json(const Json& j);

// Pure profiles are nested arrays [i][j][l]; mixed profiles are
// {"mixed": [[{prob, bids}, ...], ...]}.
Json to_json(const BidProfile& b);
Json to_json(const MixedProfile& s);
// Accepts both forms.
MixedProfile profile_from_json(const Json& j);
// Accepts nested arrays or a mixed profile of point masses.
BidProfile pure_profile_from_json(const Json& j);
// True when every strategy has a single row.
bool is_pure(const MixedProfile& s);
BidProfile pure_part(const MixedProfile& s);

Json to_json(const Outcome& o);
Json to_json(const Verdict& v);
Json to_json(const OptResult& r);
Json to_json(const LLPSolution& s);
Json to_json(const EquilibriumStats& s);
Json to_json(const BidderClassification& c);
Json to_json(const AuditReport& a);
Json to_json(const BrdResult& r);

// {id, game, mechanism, ties, profile, claimed_opt, claimed_eq_lw, source}.
Json to_json(const CertifiedInstance& c);

// An instance file: either a bare game, or an object with "game" and the
// optional keys "mechanism", "ties", "profile", "id", "claimed_opt",
// "claimed_eq_lw", "source". Missing mechanism or ties keep the defaults.
struct InstanceFile {
  CertifiedInstance instance;
  bool has_profile = false;
  bool has_mechanism = false;
  bool has_ties = false;
  bool has_claims = false;
};
InstanceFile instance_from_json(const Json& j);

}  // namespace lwlab

#endif  // LWLAB_SERIALIZATION_HPP_
