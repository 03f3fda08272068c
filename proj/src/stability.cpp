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

#include "brl/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "brl/error.hpp"
#include "brl/rng.hpp"
#include "brl/table.hpp"

namespace brl {
namespace {

double l2_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double ratio(double num, double den) {
  if (num == 0.0 && den == 0.0) return 1.0;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace

Policy erm_policy(const BayesAdaptiveMdp& sample_model, RegConfig reg) {
  return solve_exact(sample_model, reg).policy;
}

Policy leave_one_out(const BayesAdaptiveMdp& sample_model, RegConfig reg,
                     std::size_t j) {
  const Prior& sample = sample_model.prior();
  require(sample.size() >= 2, "leave-one-out needs at least two members");
  require(j < sample.size(), "leave-one-out index out of range");
  // The 1/N factor of the reduced loss does not move its minimizer, so the
  // reduced problem is solved on the renormalized (N-1)-member prior.
  const BayesAdaptiveMdp reduced(sample.without(j), sample_model.horizon());
  const Solution sol = solve_exact(reduced, reg);
  return transfer_policy(sol.policy, reduced.space(), sample_model.space());
}

double StabilityReport::max_gap() const {
  double m = 0.0;
  for (double g : per_mdp_gap) m = std::max(m, g);
  return m;
}

StabilityReport stability_check(const BayesAdaptiveMdp& sample_model,
                                const Solution& optimum, RegConfig reg,
                                std::size_t j, const Policy* loo) {
  require(reg.lambda > 0.0, "stability check requires lambda > 0");
  const Prior& sample = sample_model.prior();
  const HistorySpace& sp = sample_model.space();
  Policy own;
  if (!loo) {
    own = leave_one_out(sample_model, reg, j);
    loo = &own;
  }
  StabilityReport rep;
  rep.j = j;
  rep.delta = loss(sample_model, *loo, reg) - optimum.loss;

  const auto vis = visitation(sample_model, *loo);
  const auto vis_j = member_visitation(sp, sample.member(j), *loo);
  double sq = 0.0, dist = 0.0, dist_j = 0.0;
  for (std::size_t n = 0; n < sp.size(); ++n) {
    const double d = l2_dist(loo->row(n), optimum.policy.row(n));
    sq += vis[n] * d * d;
    dist += vis[n] * d;
    dist_j += vis_j[n] * d;
  }
  rep.lower_qg = 0.5 * reg.lambda * sq;
  rep.policy_distance = dist;
  rep.upper_lip = sample.weight(j) * sample_model.c_max() *
                  static_cast<double>(sample_model.horizon()) *
                  std::sqrt(static_cast<double>(sp.n_actions())) * dist_j;

  rep.per_mdp_gap.resize(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const TabularMdp& m = sample.member(i);
    rep.per_mdp_gap[i] = member_loss(sp, m, sample.costs(), *loo, reg) -
                         member_loss(sp, m, sample.costs(), optimum.policy, reg);
  }
  rep.member_gap = rep.per_mdp_gap[j];
  rep.lower_pass = rep.lower_qg <= rep.delta + 1e-9 && rep.delta >= -1e-10;
  rep.upper_pass = rep.delta <= rep.upper_lip + 1e-9;
  return rep;
}

StabilityReport stability_check(const BayesAdaptiveMdp& sample_model,
                                RegConfig reg, std::size_t j) {
  return stability_check(sample_model, solve_exact(sample_model, reg), reg, j);
}

DEstimate estimate_D(const BayesAdaptiveMdp& model,
                     const std::vector<Policy>& policies) {
  const Prior& prior = model.prior();
  const HistorySpace& sp = model.space();
  DEstimate est;
  est.q = q_ratio(prior);
  est.cap = std::pow(est.q, static_cast<double>(model.horizon()));
  // Duplicate draws share a pointer; compare each distinct MDP once.
  std::vector<const TabularMdp*> distinct;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    const TabularMdp* m = &prior.member(i);
    if (std::find(distinct.begin(), distinct.end(), m) == distinct.end())
      distinct.push_back(m);
  }
  for (const Policy& pi : policies) {
    std::vector<std::vector<double>> vis;
    for (const TabularMdp* m : distinct)
      vis.push_back(member_visitation(sp, *m, pi));
    for (std::size_t a = 0; a < vis.size(); ++a)
      for (std::size_t b = 0; b < vis.size(); ++b) {
        if (a == b) continue;
        for (std::size_t n = 0; n < sp.size(); ++n)
          est.d = std::max(est.d, ratio(vis[a][n], vis[b][n]));
      }
  }
  return est;
}

double naive_bound(const BoundInputs& in, double history_count) {
  const double log_h = history_count * std::log(in.n_actions);
  const double ct = in.c_max * in.horizon;
  return std::sqrt(2.0 * (std::log(2.0) + log_h - std::log(in.delta_conf)) *
                   ct * ct / in.n_samples);
}

double bousquet_bound(const BoundInputs& in, double beta, StabilityKind kind) {
  const double B = in.b_loss, N = in.n_samples, d = in.delta_conf;
  if (kind == StabilityKind::kPointwise)
    return std::sqrt((B * B + 12.0 * B * N * beta) / (2.0 * N * d));
  return 2.0 * beta +
         (4.0 * N * beta + B) * std::sqrt(std::log(1.0 / d) / (2.0 * N));
}

namespace {

double finite_bound_at(const BoundInputs& in, double lambda) {
  const double C = in.c_max, T = in.horizon, A = in.n_actions,
               N = in.n_samples, d = in.delta_conf;
  return 2.0 * lambda * T +
         std::sqrt(C * C * T * T / (2.0 * N * d) +
                   48.0 * C * C * C * T * T * T * A /
                       (2.0 * d * lambda * N * in.p_min));
}

}  // namespace

GeneralizationBounds generalization_bounds(const BoundInputs& in) {
  const double C = in.c_max, T = in.horizon, A = in.n_actions,
               N = in.n_samples, d = in.delta_conf, l = in.lambda;
  GeneralizationBounds out;
  out.kappa = 2.0 * in.d_const * in.d_const * C * C * T * T * A;
  out.kappa_gen = 2.0 * l * T + 2.0 * out.kappa / (l * N) +
                  (4.0 * out.kappa / l + 3.0 * C * T) *
                      std::sqrt(std::log(1.0 / d) / (2.0 * N));
  out.finite_gen = finite_bound_at(in, l);
  out.example_rate = finite_bound_at(in, std::cbrt(1.0 / N));
  return out;
}

double kappa_stability_bound(const BoundInputs& in) {
  const double C = in.c_max, T = in.horizon;
  return 2.0 * in.d_const * in.d_const * C * C * T * T * in.n_actions /
         (in.lambda * in.n_samples);
}

double finite_member_bound(const BoundInputs& in, double frequency) {
  const double C = in.c_max, T = in.horizon;
  return 4.0 * C * C * T * T * in.n_actions /
         (in.lambda * in.n_samples * frequency);
}

double distance_bound(const BoundInputs& in) {
  return 2.0 * in.d_const * in.c_max * in.horizon * std::sqrt(in.n_actions) /
         (in.lambda * in.n_samples);
}

std::vector<SweepRow> generalization_experiment(const Prior& truth,
                                                const SweepConfig& cfg) {
  require(!cfg.n_list.empty() && !cfg.lambda_list.empty() && cfg.seeds >= 1,
          "sweep needs at least one N, lambda and seed");
  for (std::size_t n : cfg.n_list) require(n >= 1, "N must be at least 1");
  for (double l : cfg.lambda_list) require(l >= 0.0, "lambda must be >= 0");
  require(cfg.delta_conf > 0.0 && cfg.delta_conf < 1.0,
          "delta must lie in (0, 1)");

  const BayesAdaptiveMdp true_model(truth, cfg.horizon, cfg.node_cap);
  const double optimal = solve_exact(true_model, RegConfig{0.0}).loss;
  const double history_count = static_cast<double>(true_model.size());

  struct Cell {
    std::size_t n_index, lambda_index, seed_index;
  };
  std::vector<Cell> cells;
  for (std::size_t a = 0; a < cfg.n_list.size(); ++a)
    for (std::size_t b = 0; b < cfg.lambda_list.size(); ++b)
      for (std::size_t s = 0; s < cfg.seeds; ++s) cells.push_back({a, b, s});

  std::vector<SweepRow> rows(cells.size());
  parallel_for(cells.size(), cfg.workers, [&](std::size_t c) {
    const Cell& cell = cells[c];
    SweepRow& row = rows[c];
    row.n = cfg.n_list[cell.n_index];
    row.lambda = cfg.lambda_list[cell.lambda_index];
    row.seed_index = cell.seed_index;
    // Keyed by (N, seed) only, so every lambda sees the same sample.
    row.cell_seed = derive_seed(cfg.root_seed, "sweep", row.n, cell.seed_index);
    const Prior sample = sample_empirical(truth, row.n, row.cell_seed);
    std::vector<std::size_t> labels(sample.labels().begin(),
                                    sample.labels().end());
    std::sort(labels.begin(), labels.end());
    row.distinct = static_cast<std::size_t>(
        std::unique(labels.begin(), labels.end()) - labels.begin());

    const RegConfig reg{row.lambda};
    const BayesAdaptiveMdp model(sample, cfg.horizon, cfg.node_cap);
    const Solution erm = solve_exact(model, reg);
    const Policy moved =
        transfer_policy(erm.policy, model.space(), true_model.space());
    row.optimal_loss = optimal;
    row.erm_loss = loss(true_model, moved, RegConfig{0.0});
    row.regret = row.erm_loss - optimal;

    BoundInputs in;
    in.c_max = truth.c_max();
    in.horizon = static_cast<double>(cfg.horizon);
    in.n_actions = static_cast<double>(truth.n_actions());
    in.lambda = row.lambda;
    in.n_samples = static_cast<double>(row.n);
    in.delta_conf = cfg.delta_conf;
    in.p_min = truth.p_min();
    in.b_loss = in.c_max * in.horizon;
    row.naive = naive_bound(in, history_count);

    const double nan = std::nan("");
    row.kappa_gen = row.finite_gen = row.d_empirical = row.d_cap = nan;
    row.max_gap = row.kappa_bound = nan;
    if (row.lambda <= 0.0) return;

    std::vector<Policy> policies{erm.policy, model.uniform_policy()};
    std::vector<StabilityReport> reports;
    if (cfg.stability && row.n >= 2) {
      for (std::size_t j = 0; j < row.n; ++j) {
        policies.push_back(leave_one_out(model, reg, j));
        reports.push_back(
            stability_check(model, erm, reg, j, &policies.back()));
      }
    }
    const DEstimate D = estimate_D(model, policies);
    row.d_empirical = D.d;
    row.d_cap = D.cap;
    in.d_const = D.d;
    in.q_const = D.q;
    const GeneralizationBounds cb = generalization_bounds(in);
    row.kappa_gen = cb.kappa_gen;
    row.finite_gen = cb.finite_gen;
    if (!reports.empty()) {
      row.max_gap = 0.0;
      for (const auto& r : reports) {
        row.max_gap = std::max(row.max_gap, r.max_gap());
        row.sandwich_pass = row.sandwich_pass && r.pass();
      }
      row.kappa_bound = kappa_stability_bound(in);
      row.kappa_pass = row.max_gap <= row.kappa_bound + 1e-9;
    }
  });
  return rows;
}

}  // namespace brl
