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


#ifndef LWLAB_EXPERIMENT_HPP_
#define LWLAB_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lwlab/deviations.hpp"
#include "lwlab/serialization.hpp"

namespace lwlab {

inline constexpr const char* kToolVersion = "1.0.0";

struct RandomSpec {
  int n = 2;
  int m = 2;
  int h = 1;
  double value_lo = 0.0;
  double value_hi = 1.0;
  double budget_lo = 0.0;
  double budget_hi = 1.0;
  std::string valuation_class = "additive";  // "additive" or "xos"
  int clauses = 1;                           // xos only
  double epsilon = 0.05;

  // Throws InputError on negative or empty ranges and bad sizes.
  void validate() const;
};

// Values and budgets drawn uniformly from the grid points inside the ranges.
// Deterministic per seed.
GameInstance random_instance(const RandomSpec& spec, std::uint64_t seed);

// Builds a generator family by name: tightness (eps[, grid]),
// tightness-first (eps[, grid]), rand-tiebreak (n), mixed (n),
// rand-tiebreak-shares (n, h), mixed-shares (n, h), no-pne (m[, grid]).
InstanceFile generate_family(const std::string& family, const std::vector<double>& params);
// "family:p1,p2,...", for example "mixed-shares:7,2".
InstanceFile generate_from_spec(const std::string& spec);

enum class Mode { kVerify, kOpt, kLlp, kLpoa, kAudit, kBrd };
std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct InstanceSource {
  enum class Kind { kPath, kGenerator, kRandom };
  Kind kind = Kind::kPath;
  std::string text;   // path or generator spec
  RandomSpec random;  // kRandom
  int count = 1;      // kRandom: instances drawn with seeds seed, seed+1, ...
};

struct ExperimentConfig {
  std::vector<InstanceSource> instances;
  // Defaults for instances that do not carry their own.
  Mechanism mechanism = Mechanism::kFirstPrice;
  std::string ties = "lex";
  AnalysisParams params;
  std::uint64_t seed = 0;
  std::string output;  // CSV path; empty for none
  std::string json_output;
  Mode mode = Mode::kVerify;
  int brd_max_rounds = 200;
  bool no_overbidding = false;
  bool timing = false;
};

// Throws InputError naming the offending field.
ExperimentConfig config_from_json(const Json& j);
Json to_json(const ExperimentConfig& c);
// Parse failures report "<path>:<line>".
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
  std::string instance_id;
  int n = 0, m = 0, h = 0;
  std::string mechanism;
  std::string mode;
  std::optional<double> opt;
  std::optional<double> llp;
  std::optional<double> eq_lw;
  std::optional<double> lpoa;
  std::string verdict = "NA";  // "true", "false" or "NA"
  std::string audit = "NA";    // "ok", failing row names, or "NA"
  std::string certificate = "NA";  // "match", "mismatch" or "NA"
  std::string converged = "NA";
  std::optional<double> wall_ms;
  std::string error;

  // A false verdict, failed audit, certificate mismatch or error.
  bool failed() const;
};

struct ExperimentResult {
  Json manifest;
  std::vector<ResultRow> rows;
  bool any_failed() const;
};

// Expands the sources and computes one row per instance, concurrently up to
// LW_LAB_THREADS threads; rows keep the configured order. Throws InputError
// when a referenced file or generator spec is invalid.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Manifest line, header and one line per row, 9-decimal numbers.
std::string to_csv(const ExperimentResult& r);
Json to_json(const ExperimentResult& r);

// Positive value of LW_LAB_THREADS, else the hardware concurrency (at least 1).
int thread_count();

}  // namespace lwlab

#endif  // LWLAB_EXPERIMENT_HPP_
