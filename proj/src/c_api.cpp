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

#include "brl/brl.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "brl/envgen.hpp"
#include "brl/error.hpp"
#include "brl/mirror_descent.hpp"
#include "brl/prior_io.hpp"
#include "brl/rng.hpp"
#include "brl/stability.hpp"
#include "brl/table.hpp"

struct brl_prior {
  brl::Prior prior;
};
struct brl_model {
  brl::BayesAdaptiveMdp model;
};
struct brl_policy {
  brl::Policy policy;
};
struct brl_table {
  brl::Table table;
};

namespace {

thread_local std::string g_last_error;

brl_status to_status(brl::ErrorCode code) {
  switch (code) {
    case brl::ErrorCode::kParameter: return BRL_E_PARAMETER;
    case brl::ErrorCode::kCapacity: return BRL_E_CAPACITY;
    case brl::ErrorCode::kParse: return BRL_E_PARSE;
    case brl::ErrorCode::kIo: return BRL_E_IO;
    case brl::ErrorCode::kInternal: return BRL_E_INTERNAL;
  }
  return BRL_E_INTERNAL;
}

template <class F>
brl_status guard(F&& fn) {
  try {
    fn();
    return BRL_OK;
  } catch (const brl::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BRL_E_CAPACITY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BRL_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return BRL_E_INTERNAL;
  }
}

void need(const void* p, const char* name) {
  if (!p) brl::fail(brl::ErrorCode::kParameter, std::string(name) + " is null");
}

std::size_t cap_or_default(std::size_t cap) {
  return cap == 0 ? brl::kDefaultNodeCap : cap;
}

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }
std::int64_t as_int(bool v) { return v ? 1 : 0; }

brl::Policy random_policy(std::size_t n_nodes, std::size_t n_actions,
                          brl::Rng& rng) {
  // Flat Dirichlet rows via normalized exponentials.
  brl::Policy p(n_nodes, n_actions);
  for (std::size_t n = 0; n < n_nodes; ++n) {
    auto row = p.row(n);
    double total = 0.0;
    for (double& x : row) {
      x = -std::log1p(-rng.uniform());
      total += x;
    }
    for (double& x : row) x /= total;
  }
  return p;
}

brl::BoundInputs bound_inputs(const brl::Prior& prior, double horizon,
                              double lambda, double n, double delta) {
  brl::BoundInputs in;
  in.c_max = prior.c_max();
  in.horizon = horizon;
  in.n_actions = static_cast<double>(prior.n_actions());
  in.lambda = lambda;
  in.n_samples = n;
  in.delta_conf = delta;
  in.p_min = prior.p_min();
  in.b_loss = in.c_max * horizon;
  return in;
}

}  // namespace

extern "C" {

const char* brl_version(void) { return "0.1.0"; }

const char* brl_last_error(void) { return g_last_error.c_str(); }

const char* brl_status_name(brl_status status) {
  switch (status) {
    case BRL_OK: return "ok";
    case BRL_E_PARAMETER: return "parameter";
    case BRL_E_CAPACITY: return "capacity";
    case BRL_E_PARSE: return "parse";
    case BRL_E_IO: return "io";
    case BRL_E_INTERNAL: return "internal";
  }
  return "unknown";
}

brl_status brl_prior_load(const char* path, brl_prior** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new brl_prior{brl::load_prior(path)};
  });
}

brl_status brl_prior_save(const brl_prior* prior, const char* path) {
  return guard([&] {
    need(prior, "prior");
    need(path, "path");
    brl::save_prior(path, prior->prior);
  });
}

void brl_prior_free(brl_prior* prior) { delete prior; }

size_t brl_prior_size(const brl_prior* p) { return p ? p->prior.size() : 0; }
size_t brl_prior_n_states(const brl_prior* p) {
  return p ? p->prior.n_states() : 0;
}
size_t brl_prior_n_actions(const brl_prior* p) {
  return p ? p->prior.n_actions() : 0;
}
size_t brl_prior_horizon(const brl_prior* p) {
  return p ? p->prior.horizon() : 0;
}
double brl_prior_weight(const brl_prior* p, size_t member) {
  if (!p || member >= p->prior.size()) return std::nan("");
  return p->prior.weight(member);
}
size_t brl_prior_label(const brl_prior* p, size_t member) {
  if (!p || member >= p->prior.size()) return SIZE_MAX;
  return p->prior.label(member);
}

brl_status brl_prior_random(const brl_random_spec* spec, uint64_t seed,
                            brl_prior** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "out");
    if (spec->n_costs > 0) need(spec->cost_values, "cost_values");
    brl::RandomPriorShape shape;
    shape.n_states = spec->n_states;
    shape.n_actions = spec->n_actions;
    shape.cost_values.assign(spec->cost_values,
                             spec->cost_values + spec->n_costs);
    shape.c_max = spec->c_max;
    shape.horizon = spec->horizon;
    shape.members = spec->members;
    shape.support = spec->support;
    *out = new brl_prior{brl::random_prior(shape, spec->concentration, seed)};
  });
}

brl_status brl_prior_lower_bound(size_t horizon, double eps_prime,
                                 const uint8_t* f, size_t member_cap,
                                 brl_prior** out) {
  return guard([&] {
    need(out, "out");
    brl::LowerBoundSpec spec;
    spec.horizon = horizon;
    spec.eps_prime = eps_prime;
    spec.member_cap = member_cap == 0 ? brl::kDefaultMemberCap : member_cap;
    brl::require(horizon >= 1 && horizon < 63,
                 "lower-bound horizon out of range");
    if ((std::size_t{1} << horizon) > spec.member_cap)
      brl::fail(brl::ErrorCode::kCapacity,
                "lower-bound family exceeds the member cap of " +
                    std::to_string(spec.member_cap));
    spec.f.assign(std::size_t{1} << horizon, 0);
    if (f) spec.f.assign(f, f + spec.f.size());
    *out = new brl_prior{brl::lower_bound_family(spec)};
  });
}

brl_status brl_prior_restricted(const brl_prior* base, size_t k,
                                size_t variants, uint64_t seed,
                                brl_prior** out) {
  return guard([&] {
    need(base, "base");
    need(out, "out");
    *out = new brl_prior{brl::restricted_difference_family(
        base->prior.member(0), base->prior.costs(), k, variants, seed)};
  });
}

brl_status brl_prior_smooth(const brl_prior* prior, double alpha,
                            brl_prior** out) {
  return guard([&] {
    need(prior, "prior");
    need(out, "out");
    *out = new brl_prior{brl::smooth(prior->prior, alpha)};
  });
}

brl_status brl_prior_sample(const brl_prior* prior, size_t n, uint64_t seed,
                            brl_prior** out) {
  return guard([&] {
    need(prior, "prior");
    need(out, "out");
    *out = new brl_prior{brl::sample_empirical(prior->prior, n, seed)};
  });
}

brl_status brl_prior_q_ratio(const brl_prior* prior, double* out) {
  return guard([&] {
    need(prior, "prior");
    need(out, "out");
    *out = brl::q_ratio(prior->prior);
  });
}

brl_status brl_model_build(const brl_prior* prior, size_t horizon,
                           size_t node_cap, brl_model** out) {
  return guard([&] {
    need(prior, "prior");
    need(out, "out");
    *out = new brl_model{
        brl::BayesAdaptiveMdp(prior->prior, horizon, cap_or_default(node_cap))};
  });
}

void brl_model_free(brl_model* model) { delete model; }

size_t brl_model_node_count(const brl_model* m) {
  return m ? m->model.size() : 0;
}
size_t brl_model_n_actions(const brl_model* m) {
  return m ? m->model.n_actions() : 0;
}

namespace {

const brl::Policy& checked(const brl_model* model, const brl_policy* policy) {
  need(model, "model");
  need(policy, "policy");
  brl::require(policy->policy.size() == model->model.size() &&
                   policy->policy.n_actions() == model->model.n_actions(),
               "policy does not belong to this model");
  return policy->policy;
}

}  // namespace

brl_status brl_model_dump(const brl_model* model, const brl_policy* policy,
                          const char* path) {
  return guard([&] {
    need(model, "model");
    need(path, "path");
    const brl::Policy uniform = model->model.uniform_policy();
    const brl::Policy& pi = policy ? checked(model, policy) : uniform;
    const auto mass = brl::visitation(model->model, pi);
    std::ofstream out(path);
    if (!out) brl::fail(brl::ErrorCode::kIo, std::string("cannot open '") + path + "'");
    brl::write_space_dump(out, model->model.space(), mass);
  });
}

brl_status brl_model_solve(const brl_model* model, double lambda,
                           brl_policy** policy, double* loss) {
  return guard([&] {
    need(model, "model");
    auto sol = brl::solve_exact(model->model, brl::RegConfig{lambda});
    if (loss) *loss = sol.loss;
    if (policy) *policy = new brl_policy{std::move(sol.policy)};
  });
}

brl_status brl_model_evaluate(const brl_model* model, const brl_policy* policy,
                              double lambda, double* loss) {
  return guard([&] {
    need(loss, "loss");
    brl::require(lambda >= 0.0, "lambda must be nonnegative");
    *loss = brl::loss(model->model, checked(model, policy),
                      brl::RegConfig{lambda});
  });
}

brl_status brl_model_regret(const brl_model* model, const brl_policy* policy,
                            double* out) {
  return guard([&] {
    need(out, "out");
    *out = brl::regret(model->model, checked(model, policy));
  });
}

brl_status brl_model_write_policy(const brl_model* model,
                                  const brl_policy* policy, double lambda,
                                  const char* path) {
  return guard([&] {
    need(path, "path");
    const brl::Policy& pi = checked(model, policy);
    const auto v = brl::evaluate(model->model, pi, brl::RegConfig{lambda});
    std::ofstream out(path, std::ios::binary);
    if (!out) brl::fail(brl::ErrorCode::kIo, std::string("cannot open '") + path + "'");
    brl::write_policy_values_csv(out, model->model.space(), pi, v);
    if (!out) brl::fail(brl::ErrorCode::kIo, std::string("failed writing '") + path + "'");
  });
}

brl_status brl_policy_uniform(const brl_model* model, brl_policy** out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    *out = new brl_policy{model->model.uniform_policy()};
  });
}

brl_status brl_policy_transfer(const brl_model* src, const brl_policy* policy,
                               const brl_model* dst, brl_policy** out) {
  return guard([&] {
    need(dst, "dst");
    need(out, "out");
    *out = new brl_policy{brl::transfer_policy(
        checked(src, policy), src->model.space(), dst->model.space())};
  });
}

brl_status brl_policy_row(const brl_policy* policy, size_t node, double* probs,
                          size_t n_actions) {
  return guard([&] {
    need(policy, "policy");
    need(probs, "probs");
    brl::require(node < policy->policy.size(), "node index out of range");
    brl::require(n_actions == policy->policy.n_actions(),
                 "action count mismatch");
    auto row = policy->policy.row(node);
    std::copy(row.begin(), row.end(), probs);
  });
}

void brl_policy_free(brl_policy* policy) { delete policy; }

size_t brl_table_rows(const brl_table* t) { return t ? t->table.n_rows() : 0; }
size_t brl_table_cols(const brl_table* t) {
  return t ? t->table.columns().size() : 0;
}
const char* brl_table_column(const brl_table* t, size_t col) {
  if (!t || col >= t->table.columns().size()) return nullptr;
  return t->table.columns()[col].c_str();
}

brl_status brl_table_get(const brl_table* t, size_t row, size_t col,
                         double* out) {
  return guard([&] {
    need(t, "table");
    need(out, "out");
    brl::require(row < t->table.n_rows() && col < t->table.columns().size(),
                 "table index out of range");
    const brl::Cell& c = t->table.row(row)[col];
    if (const auto* i = std::get_if<std::int64_t>(&c))
      *out = static_cast<double>(*i);
    else if (const auto* d = std::get_if<double>(&c))
      *out = *d;
    else
      brl::fail(brl::ErrorCode::kParameter, "table cell is not numeric");
  });
}

brl_status brl_table_write(const brl_table* t, const char* path, int jsonl) {
  return guard([&] {
    need(t, "table");
    need(path, "path");
    t->table.save(path, jsonl != 0);
  });
}

void brl_table_free(brl_table* t) { delete t; }

brl_status brl_run_solve(const brl_model* model, double lambda,
                         brl_table** out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    const auto sol = brl::solve_exact(model->model, brl::RegConfig{lambda});
    brl::Table t({"lambda", "node_count", "loss", "root_value"});
    t.add_row({lambda, as_int(model->model.size()), sol.loss, sol.values[0]});
    *out = new brl_table{std::move(t)};
  });
}

brl_status brl_run_erm(const brl_prior* sample, const brl_prior* truth,
                       size_t horizon, double lambda, size_t node_cap,
                       brl_table** out) {
  return guard([&] {
    need(sample, "sample");
    need(truth, "truth");
    need(out, "out");
    const std::size_t cap = cap_or_default(node_cap);
    const brl::RegConfig reg{lambda};
    const brl::BayesAdaptiveMdp emp(sample->prior, horizon, cap);
    const brl::BayesAdaptiveMdp real(truth->prior, horizon, cap);
    const auto erm = brl::solve_exact(emp, reg);
    const auto moved =
        brl::transfer_policy(erm.policy, emp.space(), real.space());
    const double optimal = brl::solve_exact(real, brl::RegConfig{0.0}).loss;
    const double true_loss = brl::loss(real, moved, brl::RegConfig{0.0});
    brl::Table t({"n", "lambda", "sample_nodes", "true_nodes",
                  "empirical_loss", "true_loss", "optimal_loss", "regret"});
    t.add_row({as_int(sample->prior.size()), lambda, as_int(emp.size()),
               as_int(real.size()), erm.loss, true_loss, optimal,
               true_loss - optimal});
    *out = new brl_table{std::move(t)};
  });
}

brl_status brl_run_stability(const brl_prior* sample, size_t horizon,
                             const double* lambdas, size_t n_lambdas,
                             size_t node_cap, size_t workers, brl_table** out,
                             int* all_pass) {
  return guard([&] {
    need(sample, "sample");
    need(lambdas, "lambdas");
    need(out, "out");
    const brl::Prior& s = sample->prior;
    const std::size_t N = s.size();
    brl::require(N >= 2, "stability needs a sample of at least two members");
    brl::require(n_lambdas >= 1, "need at least one lambda");
    for (std::size_t i = 0; i < n_lambdas; ++i)
      brl::require(lambdas[i] > 0.0, "stability requires lambda > 0");
    const brl::BayesAdaptiveMdp model(s, horizon, cap_or_default(node_cap));

    struct Result {
      std::vector<brl::StabilityReport> reports;
      brl::DEstimate d;
    };
    std::vector<Result> results(n_lambdas);
    brl::parallel_for(n_lambdas, workers == 0 ? brl::default_workers() : workers,
                      [&](std::size_t li) {
      const brl::RegConfig reg{lambdas[li]};
      const auto opt = brl::solve_exact(model, reg);
      std::vector<brl::Policy> policies{opt.policy, model.uniform_policy()};
      for (std::size_t j = 0; j < N; ++j) {
        policies.push_back(brl::leave_one_out(model, reg, j));
        results[li].reports.push_back(
            brl::stability_check(model, opt, reg, j, &policies.back()));
      }
      results[li].d = brl::estimate_D(model, policies);
    });

    brl::Table t({"lambda", "j", "label", "delta", "lower_qg", "upper_lip",
                  "policy_distance", "distance_bound", "max_gap",
                  "kappa_bound", "member_gap", "member_bound", "d_empirical",
                  "d_cap", "lower_pass", "upper_pass", "distance_pass",
                  "kappa_pass", "member_pass"});
    bool ok = true;
    for (std::size_t li = 0; li < n_lambdas; ++li) {
      auto in = bound_inputs(s, static_cast<double>(horizon), lambdas[li],
                             static_cast<double>(N), 0.1);
      in.d_const = results[li].d.d;
      const double dist_bound = brl::distance_bound(in);
      const double kappa_bound = brl::kappa_stability_bound(in);
      for (const auto& r : results[li].reports) {
        std::size_t same = 0;
        for (std::size_t i = 0; i < N; ++i)
          same += s.label(i) == s.label(r.j) ? 1 : 0;
        const double member_bound = brl::finite_member_bound(
            in, static_cast<double>(same) / static_cast<double>(N));
        const bool dist_ok = r.policy_distance <= dist_bound + 1e-9;
        const bool gap_ok = r.max_gap() <= kappa_bound + 1e-9;
        const bool member_ok = r.member_gap <= member_bound + 1e-9;
        ok = ok && r.pass() && dist_ok && gap_ok && member_ok;
        t.add_row({lambdas[li], as_int(r.j), as_int(s.label(r.j)), r.delta,
                   r.lower_qg, r.upper_lip, r.policy_distance, dist_bound,
                   r.max_gap(), kappa_bound, r.member_gap, member_bound,
                   results[li].d.d, results[li].d.cap, as_int(r.lower_pass),
                   as_int(r.upper_pass), as_int(dist_ok), as_int(gap_ok),
                   as_int(member_ok)});
      }
    }
    if (all_pass) *all_pass = ok ? 1 : 0;
    *out = new brl_table{std::move(t)};
  });
}

brl_status brl_run_convergence(const brl_prior* prior,
                               const brl_convergence_spec* spec,
                               brl_table** trace, brl_table** report,
                               int* all_pass) {
  return guard([&] {
    need(prior, "prior");
    need(spec, "spec");
    need(trace, "trace");
    need(report, "report");
    brl::require(spec->lambda > 0.0, "convergence requires lambda > 0");
    const brl::RegConfig reg{spec->lambda};
    const brl::BayesAdaptiveMdp model(prior->prior, spec->horizon,
                                      cap_or_default(spec->node_cap));
    const auto schedule = brl::StepSchedule::harmonic(spec->lambda);
    const auto tr = brl::utrpo_run(model, reg, schedule, spec->iterations);
    const auto opt = brl::solve_exact(model, reg);
    brl::Rng rng = brl::Rng::from_seed(spec->seed).substream("convergence");

    std::vector<brl::Policy> refs{opt.policy};
    brl::Rng ref_rng = rng.substream("references");
    for (std::size_t i = 0; i < spec->references; ++i)
      refs.push_back(random_policy(model.size(), model.n_actions(), ref_rng));
    brl::FundamentalReport worst;
    worst.min_residual = std::numeric_limits<double>::infinity();
    worst.min_residual_short = worst.min_residual;
    brl::FundamentalReport first;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      auto f = brl::check_fundamental(model, tr, refs[i], reg,
                                      spec->fundamental_k);
      if (i == 0) first = f;
      if (f.min_residual < worst.min_residual) worst = f;
      worst.min_residual_short =
          std::min(worst.min_residual_short, f.min_residual_short);
    }
    if (refs.size() == 1) worst = first;
    // The per-k trace column reports the residual against pi*.
    const auto rate = brl::check_rate(model, tr, schedule, opt.loss, reg);

    double max_increase = 0.0;
    for (std::size_t k = 1; k < tr.losses.size(); ++k)
      max_increase = std::max(max_increase, tr.losses[k] - tr.losses[k - 1]);
    const double final_gap = tr.losses.back() - opt.loss;
    const double gap_bound =
        spec->iterations >= 2
            ? std::max(1e-6, brl::rate_bound(model, reg, spec->iterations))
            : std::numeric_limits<double>::infinity();

    brl::Rng growth_rng = rng.substream("growth");
    double qg_margin = std::numeric_limits<double>::infinity();
    bool qg_ok = true;
    for (std::size_t i = 0; i <= spec->growth_draws; ++i) {
      const auto pi0 = i == 0 ? model.uniform_policy()
                              : random_policy(model.size(), model.n_actions(),
                                              growth_rng);
      const auto q = brl::check_quadratic_growth(model, pi0, opt, reg);
      qg_ok = qg_ok && q.pass;
      qg_margin = std::min(qg_margin, q.rhs - q.lhs);
    }

    brl::Table tt({"k", "alpha", "loss", "min_fundamental_residual",
                   "rate_ratio"});
    const double nan = std::nan("");
    for (std::size_t k = 0; k < tr.losses.size(); ++k)
      tt.add_row({as_int(k), k < tr.alphas.size() ? tr.alphas[k] : nan,
                  tr.losses[k],
                  k < first.per_k.size() ? first.per_k[k] : nan,
                  k < rate.ratios.size() ? rate.ratios[k] : nan});

    brl::Table rt({"check", "value", "bound", "pass"});
    const bool mono = max_increase <= 1e-10;
    const bool gap_ok = final_gap <= gap_bound;
    rt.add_row({std::string("node_count"), static_cast<double>(model.size()),
                nan, as_int(true)});
    rt.add_row({std::string("exact_loss"), opt.loss, nan, as_int(true)});
    rt.add_row({std::string("final_gap"), final_gap, gap_bound, as_int(gap_ok)});
    rt.add_row({std::string("monotone_max_increase"), max_increase, 1e-10,
                as_int(mono)});
    rt.add_row({std::string("fundamental_min_residual"), worst.min_residual,
                -1e-8, as_int(worst.pass)});
    rt.add_row({std::string("fundamental_min_residual_short"),
                worst.min_residual_short, -1e-8,
                as_int(worst.min_residual_short >= -1e-8)});
    rt.add_row({std::string("rate_max_ratio"), rate.max_ratio, rate.bound,
                as_int(rate.pass)});
    rt.add_row({std::string("quadratic_growth_min_margin"), qg_margin, -1e-9,
                as_int(qg_ok)});
    // The short form is reported only; the asserted form is the long one.
    if (all_pass)
      *all_pass = mono && gap_ok && worst.pass && rate.pass && qg_ok ? 1 : 0;
    *trace = new brl_table{std::move(tt)};
    *report = new brl_table{std::move(rt)};
  });
}

brl_status brl_run_sweep(const brl_prior* truth, const brl_sweep_spec* spec,
                         brl_table** out, int* all_pass) {
  return guard([&] {
    need(truth, "truth");
    need(spec, "spec");
    need(out, "out");
    need(spec->n_list, "n_list");
    need(spec->lambda_list, "lambda_list");
    brl::SweepConfig cfg;
    cfg.n_list.assign(spec->n_list, spec->n_list + spec->n_count);
    cfg.lambda_list.assign(spec->lambda_list,
                           spec->lambda_list + spec->lambda_count);
    cfg.seeds = spec->seeds;
    cfg.horizon = spec->horizon;
    cfg.delta_conf = spec->delta_conf;
    cfg.root_seed = spec->seed;
    cfg.workers = spec->workers == 0 ? brl::default_workers() : spec->workers;
    cfg.node_cap = cap_or_default(spec->node_cap);
    cfg.stability = spec->stability != 0;
    const auto rows = brl::generalization_experiment(truth->prior, cfg);
    brl::Table t({"n", "lambda", "seed_index", "cell_seed", "distinct",
                  "regret", "erm_loss", "optimal_loss", "naive_bound",
                  "kappa_gen_bound", "finite_gen_bound", "d_empirical", "d_cap",
                  "max_gap", "kappa_bound", "sandwich_pass", "kappa_pass"});
    bool ok = true;
    for (const auto& r : rows) {
      ok = ok && r.sandwich_pass && r.kappa_pass;
      t.add_row({as_int(r.n), r.lambda, as_int(r.seed_index),
                 std::to_string(r.cell_seed), as_int(r.distinct), r.regret,
                 r.erm_loss, r.optimal_loss, r.naive, r.kappa_gen, r.finite_gen,
                 r.d_empirical, r.d_cap, r.max_gap, r.kappa_bound,
                 as_int(r.sandwich_pass), as_int(r.kappa_pass)});
    }
    if (all_pass) *all_pass = ok ? 1 : 0;
    *out = new brl_table{std::move(t)};
  });
}

brl_status brl_run_lowerbound(const brl_lowerbound_spec* spec, brl_table** out,
                              int* all_pass) {
  return guard([&] {
    need(spec, "spec");
    need(out, "out");
    brl::require(spec->runs >= 1, "need at least one run");
    brl::require(spec->lambda > 0.0, "comparison lambda must be positive");
    brl::require(spec->delta_conf > 0.0 && spec->delta_conf < 1.0,
                 "delta must lie in (0, 1)");
    const std::size_t cap =
        spec->member_cap == 0 ? brl::kDefaultMemberCap : spec->member_cap;
    brl::LowerBoundSpec fam{spec->horizon, spec->eps_prime, {}, cap};
    brl::require(spec->horizon >= 1 && spec->horizon < 63,
                 "lower-bound horizon out of range");
    if ((std::size_t{1} << spec->horizon) > cap)
      brl::fail(brl::ErrorCode::kCapacity,
                "lower-bound family exceeds the member cap of " +
                    std::to_string(cap));
    fam.f.assign(std::size_t{1} << spec->horizon, 0);
    // The history tree does not depend on f.
    const brl::Prior family = brl::lower_bound_family(fam);
    const brl::BayesAdaptiveMdp model(family, spec->horizon);
    auto in = bound_inputs(family, static_cast<double>(spec->horizon),
                           spec->lambda, static_cast<double>(spec->n),
                           spec->delta_conf);
    const double naive =
        brl::naive_bound(in, static_cast<double>(model.size()));
    const double finite_gen = brl::generalization_bounds(in).finite_gen;
    const double ct = in.c_max * in.horizon;

    std::vector<brl::LowerBoundResult> res(spec->runs);
    std::vector<std::uint64_t> seeds(spec->runs);
    for (std::size_t r = 0; r < spec->runs; ++r)
      seeds[r] = brl::derive_seed(spec->seed, "lowerbound", r);
    brl::parallel_for(spec->runs,
                      spec->workers == 0 ? brl::default_workers() : spec->workers,
                      [&](std::size_t r) {
      res[r] = brl::lower_bound_experiment(spec->horizon, spec->eps_prime,
                                           spec->n, seeds[r], cap);
    });

    brl::Table t({"run", "seed", "n", "unseen_fraction", "regret",
                  "bound_expression", "pass", "naive_bound", "finite_gen_bound",
                  "c_max_t", "history_count"});
    std::size_t passed = 0;
    for (std::size_t r = 0; r < spec->runs; ++r) {
      const bool ok = res[r].regret > res[r].bound_expression - 1e-9;
      passed += ok ? 1 : 0;
      t.add_row({as_int(r), std::to_string(seeds[r]), as_int(spec->n),
                 res[r].unseen_fraction, res[r].regret,
                 res[r].bound_expression, as_int(ok), naive, finite_gen, ct,
                 as_int(model.size())});
    }
    if (all_pass)
      *all_pass = 100 * passed >= 95 * spec->runs && naive > ct &&
                          std::isfinite(finite_gen)
                      ? 1
                      : 0;
    *out = new brl_table{std::move(t)};
  });
}

brl_status brl_run_bounds(const brl_bound_spec* spec, brl_table** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "out");
    brl::require(spec->c_max > 0.0 && spec->horizon > 0.0 &&
                     spec->n_actions > 0.0 && spec->lambda > 0.0 &&
                     spec->n_samples > 0.0 && spec->p_min > 0.0 &&
                     spec->d_const > 0.0,
                 "bound inputs must be positive");
    brl::require(spec->delta_conf > 0.0 && spec->delta_conf < 1.0,
                 "delta must lie in (0, 1)");
    brl::require(spec->beta >= 0.0, "beta must be nonnegative");
    brl::BoundInputs in;
    in.d_const = spec->d_const;
    in.c_max = spec->c_max;
    in.horizon = spec->horizon;
    in.n_actions = spec->n_actions;
    in.lambda = spec->lambda;
    in.n_samples = spec->n_samples;
    in.delta_conf = spec->delta_conf;
    in.p_min = spec->p_min;
    in.b_loss = spec->c_max * spec->horizon;
    const auto cb = brl::generalization_bounds(in);
    brl::Table t({"bound", "value"});
    t.add_row({std::string("naive"), brl::naive_bound(in, spec->history_count)});
    t.add_row({std::string("bousquet_pointwise"),
               brl::bousquet_bound(in, spec->beta, brl::StabilityKind::kPointwise)});
    t.add_row({std::string("bousquet_uniform"),
               brl::bousquet_bound(in, spec->beta, brl::StabilityKind::kUniform)});
    t.add_row({std::string("kappa"), cb.kappa});
    t.add_row({std::string("kappa_gen"), cb.kappa_gen});
    t.add_row({std::string("finite_gen"), cb.finite_gen});
    t.add_row({std::string("example_rate"), cb.example_rate});
    t.add_row({std::string("kappa_stability"), brl::kappa_stability_bound(in)});
    *out = new brl_table{std::move(t)};
  });
}

}  // extern "C"
