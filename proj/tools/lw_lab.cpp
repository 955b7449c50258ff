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


// lw-lab: command-line front end for the auction laboratory.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lwlab/deviations.hpp"
#include "lwlab/experiment.hpp"
#include "lwlab/instances.hpp"
#include "lwlab/serialization.hpp"

namespace {

using namespace lwlab;

constexpr int kExitOk = 0;
constexpr int kExitFalse = 1;
constexpr int kExitError = 2;

struct InstanceArgs {
  std::string instance;
  std::string mechanism;
  std::string ties;
  std::string profile;
  bool no_overbidding = false;
  bool force_enumeration = false;
};

void add_instance_args(CLI::App* cmd, InstanceArgs& a, bool strategic) {
  cmd->add_option("instance", a.instance,
                  "Instance JSON file, or gen:FAMILY:PARAMS for a generated one")
      ->required();
  if (!strategic) return;
  cmd->add_option("--mechanism", a.mechanism, "first, second or house (overrides the file)");
  cmd->add_option("--ties", a.ties, "lex, lex:ORDER or uniform:SEED (overrides the file)");
  cmd->add_option("--profile", a.profile, "Profile JSON file (overrides the file)");
  cmd->add_flag("--no-overbidding", a.no_overbidding,
                "Restrict deviations to rows that never overbid");
  cmd->add_flag("--force-enumeration", a.force_enumeration,
                "Enumerate every deviation instead of the additive search");
}

InstanceFile load_instance(const InstanceArgs& a) {
  InstanceFile f = a.instance.rfind("gen:", 0) == 0
                       ? generate_from_spec(a.instance.substr(4))
                       : instance_from_json(load_json_file(a.instance));
  if (!a.mechanism.empty()) {
    f.instance.mechanism = parse_mechanism(a.mechanism);
    f.has_mechanism = true;
  }
  if (!a.ties.empty()) {
    f.instance.ties = TieBreakRule::parse(a.ties);
    f.has_ties = true;
  }
  if (!a.profile.empty()) {
    f.instance.profile = profile_from_json(load_json_file(a.profile));
    validate_mixed(f.instance.game, f.instance.profile);
    f.has_profile = true;
  }
  f.instance.ties.validate(f.instance.game.num_bidders());
  return f;
}

const MixedProfile& require_profile(const InstanceFile& f) {
  if (!f.has_profile) throw InputError("the instance carries no profile; pass --profile");
  return f.instance.profile;
}

DeviationOptions deviation_options(const InstanceArgs& a) {
  DeviationOptions o;
  o.no_overbidding = a.no_overbidding;
  o.force_enumeration = a.force_enumeration;
  return o;
}

void emit(const Json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json_file(out, j);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budgeted simultaneous item auctions: equilibria and liquid welfare"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("lw-lab ") + kToolVersion);

  std::string out;

  std::string family;
  std::string params;
  auto* gen = app.add_subcommand("gen", "Write a generated instance and profile as JSON");
  gen->add_option("--family", family,
                  "tightness, tightness-first, rand-tiebreak, mixed, "
                  "rand-tiebreak-shares, mixed-shares or no-pne")
      ->required();
  gen->add_option("--params", params, "Comma-separated parameters, e.g. 7,2");
  gen->add_option("-o,--out", out, "Output file (default stdout)");

  InstanceArgs verify_args, opt_args, llp_args, lpoa_args, audit_args, brd_args;
  auto* verify = app.add_subcommand("verify", "Check a profile for profitable deviations");
  add_instance_args(verify, verify_args, true);
  verify->add_option("-o,--out", out, "Output file (default stdout)");

  auto* opt = app.add_subcommand("opt", "Exact optimal liquid welfare");
  add_instance_args(opt, opt_args, false);
  opt->add_option("-o,--out", out, "Output file (default stdout)");

  auto* llp = app.add_subcommand("llp", "Solve the fractional liquid welfare relaxation");
  add_instance_args(llp, llp_args, false);
  llp->add_option("-o,--out", out, "Output file (default stdout)");

  auto* lpoa_cmd = app.add_subcommand("lpoa", "Optimum over equilibrium liquid welfare");
  add_instance_args(lpoa_cmd, lpoa_args, true);
  lpoa_cmd->add_option("-o,--out", out, "Output file (default stdout)");

  AnalysisParams analysis;
  auto* audit = app.add_subcommand("audit", "Evaluate the deviation-based welfare bounds");
  add_instance_args(audit, audit_args, true);
  audit->add_option("--alpha", analysis.alpha, "Price scaling alpha");
  audit->add_option("--gamma", analysis.gamma, "Boosting factor gamma");
  audit->add_option("-o,--out", out, "Output file (default stdout)");

  int max_rounds = 200;
  auto* brd = app.add_subcommand("brd", "Run round-robin best-response dynamics");
  add_instance_args(brd, brd_args, true);
  brd->add_option("--max-rounds", max_rounds, "Round limit")->check(CLI::PositiveNumber);
  brd->add_option("-o,--out", out, "Output file (default stdout)");

  std::string config_path, mode, csv_out, json_out;
  bool timing = false;
  auto* suite = app.add_subcommand("suite", "Run an experiment over an instance suite");
  suite->add_option("--config", config_path,
                    "Experiment config JSON (default: the certified families)");
  suite->add_option("--mode", mode, "verify, opt, llp, lpoa, audit or brd (overrides config)");
  suite->add_option("--csv", csv_out, "CSV output (default stdout unless set in config)");
  suite->add_option("--json", json_out, "JSON output");
  suite->add_flag("--timing", timing, "Record wall time per row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*gen) {
      std::string spec = family + (params.empty() ? "" : ":" + params);
      InstanceFile f = generate_from_spec(spec);
      Json j = f.has_profile ? to_json(f.instance)
                             : Json{{"id", f.instance.id},
                                    {"game", to_json(f.instance.game)},
                                    {"source", f.instance.source}};
      emit(j, out);
      return kExitOk;
    }
    if (*verify) {
      InstanceFile f = load_instance(verify_args);
      Verdict v = verify_mixed_ne(f.instance.game, f.instance.mechanism, require_profile(f),
                                  f.instance.ties, deviation_options(verify_args));
      emit(to_json(v), out);
      return v.is_equilibrium ? kExitOk : kExitFalse;
    }
    if (*opt) {
      emit(to_json(opt_exact(load_instance(opt_args).instance.game)), out);
      return kExitOk;
    }
    if (*llp) {
      emit(to_json(solve_llp(load_instance(llp_args).instance.game)), out);
      return kExitOk;
    }
    if (*lpoa_cmd) {
      InstanceFile f = load_instance(lpoa_args);
      const auto& c = f.instance;
      Verdict v = verify_mixed_ne(c.game, c.mechanism, require_profile(f), c.ties,
                                  deviation_options(lpoa_args));
      OptResult o = opt_exact(c.game);
      double lw = expected_liquid_welfare(
          c.game, outcome_distribution(c.game, c.mechanism, c.profile, c.ties));
      Json j{{"is_equilibrium", v.is_equilibrium},
             {"opt", o.value},
             {"eq_lw", lw},
             {"lpoa", lpoa(o.value, lw)}};
      if (f.has_claims) {
        j["claimed_opt"] = c.claimed_opt;
        j["claimed_eq_lw"] = c.claimed_eq_lw;
      }
      emit(j, out);
      return v.is_equilibrium ? kExitOk : kExitFalse;
    }
    if (*audit) {
      InstanceFile f = load_instance(audit_args);
      const auto& c = f.instance;
      AuditReport a = audit_bounds(c.game, c.mechanism, require_profile(f), c.ties, analysis);
      emit(to_json(a), out);
      return a.all_hold() ? kExitOk : kExitFalse;
    }
    if (*brd) {
      InstanceFile f = load_instance(brd_args);
      const auto& c = f.instance;
      BidProfile start = zero_profile(c.game);
      if (f.has_profile) start = pure_part(c.profile);
      BrdResult r = best_response_dynamics(c.game, c.mechanism, c.ties, start, max_rounds,
                                           deviation_options(brd_args));
      emit(to_json(r), out);
      return kExitOk;
    }
    if (*suite) {
      ExperimentConfig cfg;
      if (config_path.empty()) {
        for (const char* s : {"tightness:0.1", "tightness-first:0.1", "rand-tiebreak:4",
                              "mixed:5", "rand-tiebreak-shares:6,2", "mixed-shares:7,2",
                              "no-pne:3"}) {
          InstanceSource src;
          src.kind = InstanceSource::Kind::kGenerator;
          src.text = s;
          cfg.instances.push_back(src);
        }
        cfg.mode = Mode::kLpoa;
      } else {
        cfg = load_config(config_path);
      }
      if (!mode.empty()) cfg.mode = parse_mode(mode);
      if (!csv_out.empty()) cfg.output = csv_out;
      if (!json_out.empty()) cfg.json_output = json_out;
      if (timing) cfg.timing = true;
      ExperimentResult r = run_experiment(cfg);
      const std::string csv = to_csv(r);
      if (cfg.output.empty()) {
        std::cout << csv;
      } else {
        std::ofstream f(cfg.output);
        if (!f) throw InputError(cfg.output + ": cannot write file");
        f << csv;
      }
      if (!cfg.json_output.empty()) write_json_file(cfg.json_output, to_json(r));
      return r.any_failed() ? kExitFalse : kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "lw-lab: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
