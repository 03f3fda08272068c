// Copyright 2026 The brl Authors.
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

// Command-line front end. All computation goes through the C API in brl.h.

#include <CLI11.hpp>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "brl/brl.h"

namespace {

using json = nlohmann::json;

enum ExitCode {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfig = 2,
  kExitCapacity = 3,
  kExitInternal = 4,
};

/// Thrown for every failure; carries the exit code and a one-line reason.
struct Failure {
  int code;
  std::string reason;
};

[[noreturn]] void config_error(const std::string& key,
                               const std::string& reason) {
  throw Failure{kExitConfig, "config key=" + key + " reason=" + reason};
}

void check(brl_status st, const char* what) {
  if (st == BRL_OK) return;
  const int code = st == BRL_E_CAPACITY   ? kExitCapacity
                   : st == BRL_E_INTERNAL ? kExitInternal
                                          : kExitConfig;
  throw Failure{code, std::string(brl_status_name(st)) + " during=" + what +
                          " reason=" + brl_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using PriorPtr = std::unique_ptr<brl_prior, Deleter<brl_prior, brl_prior_free>>;
using ModelPtr = std::unique_ptr<brl_model, Deleter<brl_model, brl_model_free>>;
using PolicyPtr =
    std::unique_ptr<brl_policy, Deleter<brl_policy, brl_policy_free>>;
using TablePtr = std::unique_ptr<brl_table, Deleter<brl_table, brl_table_free>>;

// Defaults per subcommand. Any key outside these objects is rejected.
json common_defaults() {
  return {{"seed", 0},          {"out", "."},  {"workers", 0},
          {"format", "csv"},    {"node_cap", 0}};
}

json prior_defaults() {
  return {{"prior", ""},
          {"random", nullptr},
          {"smooth", 0.0},
          {"horizon", 2}};
}

json random_defaults() {
  return {{"states", 2},     {"actions", 2},       {"costs", {0.0, 1.0}},
          {"c_max", 1.0},    {"horizon", 2},       {"members", 2},
          {"support", 0},    {"concentration", 1.0}, {"seed", nullptr}};
}

json defaults_for(const std::string& cmd) {
  json d = common_defaults();
  auto merge = [&](const json& extra) {
    for (auto& [k, v] : extra.items()) d[k] = v;
  };
  if (cmd == "solve") {
    merge(prior_defaults());
    merge({{"lambda", 0.0}, {"dump", false}});
  } else if (cmd == "erm") {
    merge(prior_defaults());
    merge({{"sample", ""}, {"n", 4}, {"lambda", 0.0}});
  } else if (cmd == "stability") {
    merge(prior_defaults());
    merge({{"n", 0}, {"lambdas", {0.1, 1.0, 10.0}}});
  } else if (cmd == "sweep") {
    merge(prior_defaults());
    merge({{"n_list", {2, 4, 8}},
           {"lambda_list", {0.0, 0.1, 1.0}},
           {"seeds", 3},
           {"delta", 0.1},
           {"stability", true}});
  } else if (cmd == "lowerbound") {
    merge({{"horizon", 4},
           {"eps_prime", 0.1},
           {"n", 16},
           {"runs", 100},
           {"lambda", 1.0},
           {"delta", 0.1},
           {"member_cap", 65536}});
  } else if (cmd == "convergence") {
    merge(prior_defaults());
    merge({{"lambda", 1.0},
           {"iterations", 1000},
           {"fundamental_k", 200},
           {"references", 5},
           {"growth_draws", 20}});
  } else if (cmd == "bounds") {
    merge({{"d", 1.0},
           {"c_max", 1.0},
           {"horizon", 2.0},
           {"actions", 2.0},
           {"lambda", 1.0},
           {"n", 100.0},
           {"delta", 0.1},
           {"p_min", 0.25},
           {"beta", 0.0},
           {"history_count", 1.0}});
  }
  return d;
}

void overlay(json& cfg, const json& src, const std::string& origin) {
  if (!src.is_object()) config_error(origin, "expected a JSON object");
  for (auto& [k, v] : src.items()) {
    if (!cfg.contains(k)) config_error(k, "unknown key");
    if (k == "random" && !v.is_null()) {
      if (!v.is_object()) config_error(k, "expected an object");
      json r = random_defaults();
      for (auto& [rk, rv] : v.items()) {
        if (!r.contains(rk)) config_error("random." + rk, "unknown key");
        r[rk] = rv;
      }
      cfg[k] = r;
    } else {
      cfg[k] = v;
    }
  }
}

/// BRL_<KEY> for every top-level key; values are parsed as JSON and fall
/// back to plain strings.
void apply_env(json& cfg) {
  for (auto& [k, v] : cfg.items()) {
    std::string name = "BRL_";
    for (char c : k) name += static_cast<char>(std::toupper(c));
    const char* env = std::getenv(name.c_str());
    if (!env) continue;
    json parsed = json::parse(env, nullptr, false);
    if (parsed.is_discarded()) parsed = std::string(env);
    if (k == "random") {
      json wrapper = {{k, parsed}};
      overlay(cfg, wrapper, name);
    } else {
      v = parsed;
    }
  }
}

template <class T>
T get(const json& cfg, const std::string& key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(key, "wrong type");
  }
}

std::size_t get_count(const json& cfg, const std::string& key) {
  const json& v = cfg.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    config_error(key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::uint64_t get_seed(const json& cfg, const std::string& key) {
  const json& v = cfg.at(key);
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0))
    return v.get<std::uint64_t>();
  if (v.is_string()) {
    try {
      return std::stoull(v.get<std::string>());
    } catch (...) {
    }
  }
  config_error(key, "expected an unsigned 64-bit integer");
}

double get_real(const json& cfg, const std::string& key) {
  const json& v = cfg.at(key);
  if (!v.is_number()) config_error(key, "expected a number");
  return v.get<double>();
}

struct Context {
  json cfg;
  std::filesystem::path out;
  bool jsonl = false;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  std::size_t node_cap = 0;

  std::string table_path(const std::string& stem) const {
    return (out / (stem + (jsonl ? ".jsonl" : ".csv"))).string();
  }
  void write(const brl_table* t, const std::string& stem) const {
    check(brl_table_write(t, table_path(stem).c_str(), jsonl ? 1 : 0),
          "write");
  }
};

PriorPtr load_prior(const Context& ctx) {
  const std::string path = get<std::string>(ctx.cfg, "prior");
  const json& rnd = ctx.cfg.at("random");
  brl_prior* raw = nullptr;
  if (!path.empty() && !rnd.is_null())
    config_error("prior", "give either prior or random, not both");
  if (!path.empty()) {
    check(brl_prior_load(path.c_str(), &raw), "load_prior");
  } else if (!rnd.is_null()) {
    const auto costs = get<std::vector<double>>(rnd, "costs");
    brl_random_spec spec{get_count(rnd, "states"),
                         get_count(rnd, "actions"),
                         costs.data(),
                         costs.size(),
                         get_real(rnd, "c_max"),
                         get_count(rnd, "horizon"),
                         get_count(rnd, "members"),
                         get_count(rnd, "support"),
                         get_real(rnd, "concentration")};
    const std::uint64_t seed =
        rnd.at("seed").is_null() ? ctx.seed : get_seed(rnd, "seed");
    check(brl_prior_random(&spec, seed, &raw), "random_prior");
  } else {
    config_error("prior", "missing prior source (prior or random)");
  }
  PriorPtr prior(raw);
  const double alpha = get_real(ctx.cfg, "smooth");
  if (alpha != 0.0) {
    brl_prior* smoothed = nullptr;
    check(brl_prior_smooth(prior.get(), alpha, &smoothed), "smooth");
    prior.reset(smoothed);
  }
  return prior;
}

void fail_checks(const std::string& cmd, const std::string& what) {
  throw Failure{kExitCheckFailed, "check_failed command=" + cmd + " " + what};
}

void run_solve(const Context& ctx) {
  const PriorPtr prior = load_prior(ctx);
  brl_model* m = nullptr;
  check(brl_model_build(prior.get(), get_count(ctx.cfg, "horizon"),
                        ctx.node_cap, &m),
        "build");
  ModelPtr model(m);
  const double lambda = get_real(ctx.cfg, "lambda");
  brl_policy* p = nullptr;
  check(brl_model_solve(model.get(), lambda, &p, nullptr), "solve");
  PolicyPtr policy(p);
  check(brl_model_write_policy(model.get(), policy.get(), lambda,
                               (ctx.out / "policy.csv").string().c_str()),
        "write_policy");
  brl_table* t = nullptr;
  check(brl_run_solve(model.get(), lambda, &t), "solve");
  TablePtr table(t);
  ctx.write(table.get(), "solve");
  if (get<bool>(ctx.cfg, "dump"))
    check(brl_model_dump(model.get(), policy.get(),
                         (ctx.out / "space.txt").string().c_str()),
          "dump");
}

void run_erm(const Context& ctx) {
  const PriorPtr truth = load_prior(ctx);
  const std::string sample_path = get<std::string>(ctx.cfg, "sample");
  brl_prior* s = nullptr;
  if (!sample_path.empty()) {
    check(brl_prior_load(sample_path.c_str(), &s), "load_sample");
  } else {
    check(brl_prior_sample(truth.get(), get_count(ctx.cfg, "n"), ctx.seed, &s),
          "sample");
  }
  PriorPtr sample(s);
  brl_table* t = nullptr;
  check(brl_run_erm(sample.get(), truth.get(), get_count(ctx.cfg, "horizon"),
                    get_real(ctx.cfg, "lambda"), ctx.node_cap, &t),
        "erm");
  TablePtr table(t);
  ctx.write(table.get(), "erm");
}

void run_stability(const Context& ctx) {
  PriorPtr prior = load_prior(ctx);
  const std::size_t n = get_count(ctx.cfg, "n");
  if (n > 0) {
    brl_prior* s = nullptr;
    check(brl_prior_sample(prior.get(), n, ctx.seed, &s), "sample");
    prior.reset(s);
  }
  const auto lambdas = get<std::vector<double>>(ctx.cfg, "lambdas");
  brl_table* t = nullptr;
  int pass = 0;
  check(brl_run_stability(prior.get(), get_count(ctx.cfg, "horizon"),
                          lambdas.data(), lambdas.size(), ctx.node_cap,
                          ctx.workers, &t, &pass),
        "stability");
  TablePtr table(t);
  ctx.write(table.get(), "stability");
  if (!pass) fail_checks("stability", "table=" + ctx.table_path("stability"));
}

void run_sweep(const Context& ctx) {
  const PriorPtr truth = load_prior(ctx);
  const auto ns = get<std::vector<std::size_t>>(ctx.cfg, "n_list");
  const auto lambdas = get<std::vector<double>>(ctx.cfg, "lambda_list");
  brl_sweep_spec spec{ns.data(),
                      ns.size(),
                      lambdas.data(),
                      lambdas.size(),
                      get_count(ctx.cfg, "seeds"),
                      get_count(ctx.cfg, "horizon"),
                      get_real(ctx.cfg, "delta"),
                      ctx.seed,
                      ctx.workers,
                      ctx.node_cap,
                      get<bool>(ctx.cfg, "stability") ? 1 : 0};
  brl_table* t = nullptr;
  int pass = 0;
  check(brl_run_sweep(truth.get(), &spec, &t, &pass), "sweep");
  TablePtr table(t);
  ctx.write(table.get(), "sweep");
  if (!pass) fail_checks("sweep", "table=" + ctx.table_path("sweep"));
}

void run_lowerbound(const Context& ctx) {
  brl_lowerbound_spec spec{get_count(ctx.cfg, "horizon"),
                           get_real(ctx.cfg, "eps_prime"),
                           get_count(ctx.cfg, "n"),
                           get_count(ctx.cfg, "runs"),
                           ctx.seed,
                           get_real(ctx.cfg, "lambda"),
                           get_real(ctx.cfg, "delta"),
                           get_count(ctx.cfg, "member_cap"),
                           ctx.workers};
  brl_table* t = nullptr;
  int pass = 0;
  check(brl_run_lowerbound(&spec, &t, &pass), "lowerbound");
  TablePtr table(t);
  ctx.write(table.get(), "lowerbound");
  if (!pass) fail_checks("lowerbound", "table=" + ctx.table_path("lowerbound"));
}

void run_convergence(const Context& ctx) {
  const PriorPtr prior = load_prior(ctx);
  brl_convergence_spec spec{get_count(ctx.cfg, "horizon"),
                            get_real(ctx.cfg, "lambda"),
                            get_count(ctx.cfg, "iterations"),
                            get_count(ctx.cfg, "fundamental_k"),
                            get_count(ctx.cfg, "references"),
                            get_count(ctx.cfg, "growth_draws"),
                            ctx.seed,
                            ctx.node_cap};
  brl_table* tr = nullptr;
  brl_table* rep = nullptr;
  int pass = 0;
  check(brl_run_convergence(prior.get(), &spec, &tr, &rep, &pass),
        "convergence");
  TablePtr trace(tr), report(rep);
  ctx.write(trace.get(), "trace");
  ctx.write(report.get(), "report");
  if (!pass) fail_checks("convergence", "table=" + ctx.table_path("report"));
}

void run_bounds(const Context& ctx) {
  brl_bound_spec spec{get_real(ctx.cfg, "d"),       get_real(ctx.cfg, "c_max"),
                      get_real(ctx.cfg, "horizon"), get_real(ctx.cfg, "actions"),
                      get_real(ctx.cfg, "lambda"),  get_real(ctx.cfg, "n"),
                      get_real(ctx.cfg, "delta"),   get_real(ctx.cfg, "p_min"),
                      get_real(ctx.cfg, "beta"),
                      get_real(ctx.cfg, "history_count")};
  brl_table* t = nullptr;
  check(brl_run_bounds(&spec, &t), "bounds");
  TablePtr table(t);
  ctx.write(table.get(), "bounds");
}

int dispatch(const std::string& cmd, const std::string& config_path,
             const std::optional<std::string>& seed_flag,
             const std::optional<std::string>& out_flag,
             const std::optional<std::size_t>& workers_flag,
             bool print_config) {
  Context ctx;
  ctx.cfg = defaults_for(cmd);
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) config_error("--config", "cannot open " + config_path);
    json file = json::parse(in, nullptr, false);
    if (file.is_discarded()) config_error("--config", "malformed JSON");
    overlay(ctx.cfg, file, "--config");
  }
  apply_env(ctx.cfg);
  if (seed_flag) ctx.cfg["seed"] = *seed_flag;
  if (out_flag) ctx.cfg["out"] = *out_flag;
  if (workers_flag) ctx.cfg["workers"] = *workers_flag;
  ctx.seed = get_seed(ctx.cfg, "seed");
  ctx.cfg["seed"] = ctx.seed;

  if (print_config) {
    std::cout << ctx.cfg.dump(2) << '\n';
    return kExitOk;
  }
  ctx.out = get<std::string>(ctx.cfg, "out");
  ctx.workers = get_count(ctx.cfg, "workers");
  ctx.node_cap = get_count(ctx.cfg, "node_cap");
  const std::string format = get<std::string>(ctx.cfg, "format");
  if (format != "csv" && format != "jsonl")
    config_error("format", "expected csv or jsonl");
  ctx.jsonl = format == "jsonl";
  std::error_code ec;
  std::filesystem::create_directories(ctx.out, ec);
  if (ec) config_error("out", "cannot create directory " + ctx.out.string());

  if (cmd == "solve") run_solve(ctx);
  else if (cmd == "erm") run_erm(ctx);
  else if (cmd == "stability") run_stability(ctx);
  else if (cmd == "sweep") run_sweep(ctx);
  else if (cmd == "lowerbound") run_lowerbound(ctx);
  else if (cmd == "convergence") run_convergence(ctx);
  else if (cmd == "bounds") run_bounds(ctx);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayes-adaptive MDP solver and stability experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::string> seed, out;
  std::optional<std::size_t> workers;
  bool print_config = false;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "root seed (unsigned 64-bit)");
  app.add_option("--out", out, "output directory");
  app.add_option("--workers", workers, "worker threads, 0 = all cores");
  app.add_flag("--print-config", print_config,
               "print the effective config and exit");
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve", "exact regularized Bayes-optimal policy and values"},
      {"erm", "ERM policy on a sample and its regret on the true prior"},
      {"stability", "leave-one-out stability reports"},
      {"sweep", "generalization experiment over N, lambda and seeds"},
      {"lowerbound", "lower-bound family demonstration"},
      {"convergence", "mirror-descent trace and convergence checks"},
      {"bounds", "generalization bound calculators"},
  };
  // Global flags are also accepted after the subcommand name.
  for (const auto& [name, help] : commands)
    app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "brl: error: usage reason=" << e.what() << '\n';
    return kExitConfig;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return dispatch(cmd, config_path, seed, out, workers, print_config);
  } catch (const Failure& f) {
    std::cerr << "brl: " << (f.code == kExitCheckFailed ? "" : "error: ")
              << f.reason << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "brl: error: internal reason=" << e.what() << '\n';
    return kExitInternal;
  }
}
