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


#include "lwlab/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

namespace lwlab {
namespace {

long long units_ceil(double x, double step) {
  return static_cast<long long>(std::ceil(x / step - 1e-9));
}
long long units_floor(double x, double step) {
  return static_cast<long long>(std::floor(x / step + 1e-9));
}

double draw(std::mt19937_64& rng, double lo, double hi, double step) {
  const long long a = units_ceil(lo, step);
  const long long b = units_floor(hi, step);
  const auto span = static_cast<std::uint64_t>(b - a + 1);
  return grid_value(a + static_cast<long long>(rng() % span), step);
}

void require_int_params(const std::string& family, const std::vector<double>& p,
                        size_t lo, size_t hi) {
  if (p.size() < lo || p.size() > hi) {
    throw InputError("generator '" + family + "' takes " + std::to_string(lo) +
                     (lo == hi ? "" : " to " + std::to_string(hi)) + " parameters");
  }
}

int as_int(double x, const std::string& family) {
  if (std::fabs(x - std::round(x)) > 1e-12) {
    throw InputError("generator '" + family + "' needs integer parameters");
  }
  return static_cast<int>(std::lround(x));
}

InstanceFile certified(CertifiedInstance c) {
  InstanceFile f;
  f.instance = std::move(c);
  f.has_profile = f.has_mechanism = f.has_ties = f.has_claims = true;
  return f;
}

template <typename T>
T cfg_get(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("config field '") + key + "' has the wrong type");
  }
}

void reject_unknown(const Json& j, const std::set<std::string>& known, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw InputError(std::string("unknown key '") + it.key() + "' in " + where);
    }
  }
}

std::pair<double, double> range_of(const Json& j, const char* key) {
  auto r = cfg_get<std::vector<double>>(j, key);
  if (r.size() != 2) throw InputError(std::string("'") + key + "' must be [lo, hi]");
  return {r[0], r[1]};
}

RandomSpec random_from_json(const Json& j) {
  reject_unknown(j, {"n", "m", "h", "value_range", "budget_range", "valuation", "clauses",
                     "epsilon"},
                 "random spec");
  RandomSpec s;
  if (j.contains("n")) s.n = cfg_get<int>(j, "n");
  if (j.contains("m")) s.m = cfg_get<int>(j, "m");
  if (j.contains("h")) s.h = cfg_get<int>(j, "h");
  if (j.contains("value_range")) std::tie(s.value_lo, s.value_hi) = range_of(j, "value_range");
  if (j.contains("budget_range")) {
    std::tie(s.budget_lo, s.budget_hi) = range_of(j, "budget_range");
  }
  if (j.contains("valuation")) s.valuation_class = cfg_get<std::string>(j, "valuation");
  if (j.contains("clauses")) s.clauses = cfg_get<int>(j, "clauses");
  if (j.contains("epsilon")) s.epsilon = cfg_get<double>(j, "epsilon");
  s.validate();
  return s;
}

Json random_to_json(const RandomSpec& s) {
  return Json{{"n", s.n},
              {"m", s.m},
              {"h", s.h},
              {"value_range", {s.value_lo, s.value_hi}},
              {"budget_range", {s.budget_lo, s.budget_hi}},
              {"valuation", s.valuation_class},
              {"clauses", s.clauses},
              {"epsilon", s.epsilon}};
}

struct Job {
  std::string id;
  InstanceFile file;
};

std::vector<Job> expand(const ExperimentConfig& cfg) {
  std::vector<Job> jobs;
  for (const auto& src : cfg.instances) {
    switch (src.kind) {
      case InstanceSource::Kind::kPath: {
        InstanceFile f = instance_from_json(load_json_file(src.text));
        std::string id = f.instance.id.empty() ? src.text : f.instance.id;
        jobs.push_back({id, std::move(f)});
        break;
      }
      case InstanceSource::Kind::kGenerator: {
        InstanceFile f = generate_from_spec(src.text);
        std::string id = f.instance.id.empty() ? src.text : f.instance.id;
        jobs.push_back({id, std::move(f)});
        break;
      }
      case InstanceSource::Kind::kRandom:
        for (int k = 0; k < src.count; ++k) {
          const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(k);
          InstanceFile f;
          f.instance.game = random_instance(src.random, seed);
          std::ostringstream id;
          id << "random-" << src.random.valuation_class << "-" << src.random.n << "x"
             << src.random.m << "x" << src.random.h << "-s" << seed;
          jobs.push_back({id.str(), std::move(f)});
        }
        break;
    }
  }
  return jobs;
}

std::string audit_flags(const AuditReport& a) {
  std::string out;
  for (const auto& r : a.rows) {
    if (r.holds) continue;
    if (!out.empty()) out += ";";
    out += r.name;
  }
  return out.empty() ? "ok" : out;
}

double measured_eq_lw(const GameInstance& g, Mechanism mech, const MixedProfile& s,
                      const TieBreakRule& t) {
  return expected_liquid_welfare(g, outcome_distribution(g, mech, s, t));
}

ResultRow compute_row(const Job& job, const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const CertifiedInstance& c = job.file.instance;
  const GameInstance& g = c.game;
  ResultRow row;
  row.instance_id = job.id;
  row.n = g.num_bidders();
  row.m = g.num_items;
  row.h = g.shares_per_item;
  const Mechanism mech = job.file.has_mechanism ? c.mechanism : cfg.mechanism;
  row.mechanism = to_string(mech);
  row.mode = to_string(cfg.mode);
  DeviationOptions opts;
  opts.no_overbidding = cfg.no_overbidding;
  try {
    const TieBreakRule ties = job.file.has_ties ? c.ties : TieBreakRule::parse(cfg.ties);
    ties.validate(g.num_bidders());
    auto try_opt = [&] {
      try {
        row.opt = opt_exact(g).value;
      } catch (const SizeError&) {
        if (cfg.mode == Mode::kOpt) throw;
      }
    };
    auto set_lpoa = [&] {
      if (row.opt && row.eq_lw && *row.eq_lw > 0.0) row.lpoa = lpoa(*row.opt, *row.eq_lw);
    };
    switch (cfg.mode) {
      case Mode::kOpt:
        try_opt();
        break;
      case Mode::kLlp:
        row.llp = solve_llp(g).objective;
        try_opt();
        break;
      case Mode::kVerify:
      case Mode::kLpoa:
      case Mode::kAudit: {
        if (!job.file.has_profile) break;
        Verdict v = verify_mixed_ne(g, mech, c.profile, ties, opts);
        row.verdict = v.is_equilibrium ? "true" : "false";
        try_opt();
        row.eq_lw = measured_eq_lw(g, mech, c.profile, ties);
        set_lpoa();
        if (cfg.mode == Mode::kAudit && v.is_equilibrium) {
          row.audit = audit_flags(audit_bounds(g, mech, c.profile, ties, cfg.params));
        }
        break;
      }
      case Mode::kBrd: {
        BidProfile start_profile = zero_profile(g);
        if (job.file.has_profile && is_pure(c.profile)) start_profile = pure_part(c.profile);
        BrdResult r =
            best_response_dynamics(g, mech, ties, start_profile, cfg.brd_max_rounds, opts);
        row.converged = r.converged ? "true" : "false";
        try_opt();
        if (r.converged) {
          Verdict v = verify_pure_ne(g, mech, r.profile, ties, opts);
          row.verdict = v.is_equilibrium ? "true" : "false";
          row.eq_lw = measured_eq_lw(g, mech, point_mass(r.profile), ties);
          set_lpoa();
        }
        break;
      }
    }
    // Claims describe the instance's own profile, not a dynamics outcome.
    const bool own_profile = cfg.mode != Mode::kBrd;
    if (own_profile && job.file.has_claims && row.opt && row.eq_lw) {
      const bool ok = approx_equal(*row.opt, c.claimed_opt) &&
                      approx_equal(*row.eq_lw, c.claimed_eq_lw);
      row.certificate = ok ? "match" : "mismatch";
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  if (cfg.timing) {
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  }
  return row;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_number(const std::optional<double>& x) {
  if (!x) return "NA";
  if (std::isinf(*x)) return *x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", *x);
  return buf;
}

Json json_number(const std::optional<double>& x) {
  if (!x) return nullptr;
  return *x;
}

}  // namespace

void RandomSpec::validate() const {
  if (n < 1 || m < 1 || h < 1) throw InputError("random spec needs n, m, h >= 1");
  if (!(epsilon > 0.0)) throw InputError("random spec epsilon must be positive");
  if (value_lo < 0.0 || value_hi < value_lo) throw InputError("bad value_range");
  if (budget_lo < 0.0 || budget_hi < budget_lo) throw InputError("bad budget_range");
  if (units_ceil(value_lo, epsilon) > units_floor(value_hi, epsilon)) {
    throw InputError("value_range contains no grid point");
  }
  if (units_ceil(budget_lo, epsilon) > units_floor(budget_hi, epsilon)) {
    throw InputError("budget_range contains no grid point");
  }
  if (valuation_class != "additive" && valuation_class != "xos") {
    throw InputError("valuation class must be additive or xos");
  }
  if (valuation_class == "xos" && clauses < 1) throw InputError("xos needs clauses >= 1");
}

GameInstance random_instance(const RandomSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  GameInstance g;
  g.num_items = spec.m;
  g.shares_per_item = spec.h;
  g.bid_grid_step = spec.epsilon;
  const int k = spec.valuation_class == "xos" ? spec.clauses : 1;
  for (int i = 0; i < spec.n; ++i) {
    std::vector<std::vector<double>> clauses(k, std::vector<double>(spec.m));
    for (auto& c : clauses) {
      for (auto& x : c) x = draw(rng, spec.value_lo, spec.value_hi, spec.epsilon);
    }
    const double budget = draw(rng, spec.budget_lo, spec.budget_hi, spec.epsilon);
    Valuation v = spec.valuation_class == "xos" ? Valuation::xos(std::move(clauses))
                                                : Valuation::additive(std::move(clauses[0]));
    g.bidders.push_back(Bidder{std::move(v), budget});
  }
  return g;
}

InstanceFile generate_family(const std::string& family, const std::vector<double>& p) {
  if (family == "tightness" || family == "tightness-first") {
    require_int_params(family, p, 1, 2);
    const Mechanism mech =
        family == "tightness" ? Mechanism::kSecondPrice : Mechanism::kFirstPrice;
    return certified(gen_tightness(p[0], mech, p.size() > 1 ? p[1] : 0.05));
  }
  if (family == "rand-tiebreak") {
    require_int_params(family, p, 1, 1);
    return certified(gen_rand_tiebreak_lb(as_int(p[0], family)));
  }
  if (family == "mixed") {
    require_int_params(family, p, 1, 1);
    return certified(gen_mixed_lb(as_int(p[0], family)));
  }
  if (family == "rand-tiebreak-shares") {
    require_int_params(family, p, 2, 2);
    return certified(gen_rand_tiebreak_shares_lb(as_int(p[0], family), as_int(p[1], family)));
  }
  if (family == "mixed-shares") {
    require_int_params(family, p, 2, 2);
    return certified(gen_mixed_shares_lb(as_int(p[0], family), as_int(p[1], family)));
  }
  if (family == "no-pne") {
    require_int_params(family, p, 0, 2);
    InstanceFile f;
    const int m = p.empty() ? 3 : as_int(p[0], family);
    f.instance.game = gen_no_pure_ne(m, p.size() > 1 ? p[1] : 0.05);
    std::ostringstream id;
    id << "no-pne(" << m << ")";
    f.instance.id = id.str();
    f.instance.source = "two bidders with no pure equilibrium";
    return f;
  }
  throw InputError("unknown generator family '" + family + "'");
}

InstanceFile generate_from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string family = spec.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        size_t used = 0;
        params.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw InputError("");
      } catch (const std::exception&) {
        throw InputError("bad generator parameter '" + tok + "' in '" + spec + "'");
      }
    }
  }
  return generate_family(family, params);
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::kVerify: return "verify";
    case Mode::kOpt: return "opt";
    case Mode::kLlp: return "llp";
    case Mode::kLpoa: return "lpoa";
    case Mode::kAudit: return "audit";
    case Mode::kBrd: return "brd";
  }
  return "verify";
}

Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::kVerify, Mode::kOpt, Mode::kLlp, Mode::kLpoa, Mode::kAudit, Mode::kBrd}) {
    if (to_string(m) == s) return m;
  }
  throw InputError("unknown mode '" + s + "'");
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  reject_unknown(j, {"instances", "mechanism", "ties", "alpha", "gamma", "seed", "output",
                     "json_output", "mode", "brd_max_rounds", "no_overbidding", "timing"},
                 "config");
  ExperimentConfig c;
  if (j.contains("instances")) {
    const Json& list = j["instances"];
    if (!list.is_array()) throw InputError("config field 'instances' must be an array");
    for (const auto& e : list) {
      InstanceSource s;
      if (e.is_string()) {
        s.text = e.get<std::string>();
        if (s.text.rfind("gen:", 0) == 0) {
          s.kind = InstanceSource::Kind::kGenerator;
          s.text = s.text.substr(4);
        }
      } else if (e.is_object() && e.contains("path")) {
        reject_unknown(e, {"path"}, "instance entry");
        s.text = cfg_get<std::string>(e, "path");
      } else if (e.is_object() && e.contains("generator")) {
        reject_unknown(e, {"generator"}, "instance entry");
        s.kind = InstanceSource::Kind::kGenerator;
        s.text = cfg_get<std::string>(e, "generator");
      } else if (e.is_object() && e.contains("random")) {
        reject_unknown(e, {"random", "count"}, "instance entry");
        s.kind = InstanceSource::Kind::kRandom;
        s.random = random_from_json(e["random"]);
        if (e.contains("count")) s.count = cfg_get<int>(e, "count");
        if (s.count < 0) throw InputError("random count must be nonnegative");
      } else {
        throw InputError("instance entries are paths, {generator} or {random, count}");
      }
      c.instances.push_back(std::move(s));
    }
  }
  if (j.contains("mechanism")) c.mechanism = parse_mechanism(cfg_get<std::string>(j, "mechanism"));
  if (j.contains("ties")) {
    c.ties = cfg_get<std::string>(j, "ties");
    TieBreakRule::parse(c.ties);
  }
  if (j.contains("alpha")) c.params.alpha = cfg_get<double>(j, "alpha");
  if (j.contains("gamma")) c.params.gamma = cfg_get<double>(j, "gamma");
  c.params.validate();
  if (j.contains("seed")) c.seed = cfg_get<std::uint64_t>(j, "seed");
  if (j.contains("output")) c.output = cfg_get<std::string>(j, "output");
  if (j.contains("json_output")) c.json_output = cfg_get<std::string>(j, "json_output");
  if (j.contains("mode")) c.mode = parse_mode(cfg_get<std::string>(j, "mode"));
  if (j.contains("brd_max_rounds")) c.brd_max_rounds = cfg_get<int>(j, "brd_max_rounds");
  if (c.brd_max_rounds < 1) throw InputError("brd_max_rounds must be positive");
  if (j.contains("no_overbidding")) c.no_overbidding = cfg_get<bool>(j, "no_overbidding");
  if (j.contains("timing")) c.timing = cfg_get<bool>(j, "timing");
  return c;
}

Json to_json(const ExperimentConfig& c) {
  Json list = Json::array();
  for (const auto& s : c.instances) {
    switch (s.kind) {
      case InstanceSource::Kind::kPath: list.push_back(Json{{"path", s.text}}); break;
      case InstanceSource::Kind::kGenerator: list.push_back(Json{{"generator", s.text}}); break;
      case InstanceSource::Kind::kRandom:
        list.push_back(Json{{"random", random_to_json(s.random)}, {"count", s.count}});
        break;
    }
  }
  return Json{{"instances", list},
              {"mechanism", to_string(c.mechanism)},
              {"ties", c.ties},
              {"alpha", c.params.alpha},
              {"gamma", c.params.gamma},
              {"seed", c.seed},
              {"output", c.output},
              {"json_output", c.json_output},
              {"mode", to_string(c.mode)},
              {"brd_max_rounds", c.brd_max_rounds},
              {"no_overbidding", c.no_overbidding},
              {"timing", c.timing}};
}

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig c = config_from_json(load_json_file(path));
  const auto base = std::filesystem::path(path).parent_path();
  for (auto& s : c.instances) {
    if (s.kind == InstanceSource::Kind::kPath && std::filesystem::path(s.text).is_relative()) {
      s.text = (base / s.text).lexically_normal().string();
    }
  }
  return c;
}

bool ResultRow::failed() const {
  return verdict == "false" || (audit != "ok" && audit != "NA") || certificate == "mismatch" ||
         !error.empty();
}

bool ExperimentResult::any_failed() const {
  for (const auto& r : rows) {
    if (r.failed()) return true;
  }
  return false;
}

int thread_count() {
  if (const char* env = std::getenv("LW_LAB_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 256L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.manifest = Json{{"tool", "lw-lab"},
                         {"version", kToolVersion},
                         {"seed", cfg.seed},
                         {"config", to_json(cfg)}};
  const std::vector<Job> jobs = expand(cfg);
  result.rows.resize(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < jobs.size(); k = next++) {
      result.rows[k] = compute_row(jobs[k], cfg);
    }
  };
  const int threads = std::min<int>(thread_count(), static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return result;
}

std::string to_csv(const ExperimentResult& r) {
  std::ostringstream out;
  out << "# manifest: " << r.manifest.dump() << "\n";
  out << "instance_id,n,m,h,mechanism,mode,opt,llp,eq_lw,lpoa,verdict,audit,certificate,"
         "converged,wall_ms,error\n";
  for (const auto& row : r.rows) {
    out << csv_field(row.instance_id) << "," << row.n << "," << row.m << "," << row.h << ","
        << row.mechanism << "," << row.mode << "," << csv_number(row.opt) << ","
        << csv_number(row.llp) << "," << csv_number(row.eq_lw) << "," << csv_number(row.lpoa)
        << "," << row.verdict << "," << csv_field(row.audit) << "," << row.certificate << ","
        << row.converged << "," << csv_number(row.wall_ms) << "," << csv_field(row.error)
        << "\n";
  }
  return out.str();
}

Json to_json(const ExperimentResult& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"instance_id", row.instance_id},
                        {"n", row.n},
                        {"m", row.m},
                        {"h", row.h},
                        {"mechanism", row.mechanism},
                        {"mode", row.mode},
                        {"opt", json_number(row.opt)},
                        {"llp", json_number(row.llp)},
                        {"eq_lw", json_number(row.eq_lw)},
                        {"lpoa", json_number(row.lpoa)},
                        {"verdict", row.verdict},
                        {"audit", row.audit},
                        {"certificate", row.certificate},
                        {"converged", row.converged},
                        {"wall_ms", json_number(row.wall_ms)},
                        {"error", row.error}});
  }
  return Json{{"manifest", r.manifest}, {"rows", rows}};
}

}  // namespace lwlab
