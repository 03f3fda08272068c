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

#pragma once

#include <cstdint>
#include <vector>

#include "brl/bayes_dp.hpp"

namespace brl {

/// solve_exact on the empirical prior's history space.
Policy erm_policy(const BayesAdaptiveMdp& sample_model, RegConfig reg);

/// Minimizer of the empirical loss with member j removed, carried to the full
/// sample's history space (uniform where the reduced space has no node).
Policy leave_one_out(const BayesAdaptiveMdp& sample_model, RegConfig reg,
                     std::size_t j);

struct StabilityReport {
  std::size_t j = 0;
  double delta = 0.0;        // L^lambda(pi^{\j}) - L^lambda(pi*), full sample
  double lower_qg = 0.0;     // (lambda/2) sum_h vis(h) ||pi^{\j} - pi*||^2
  double upper_lip = 0.0;    // w_j C_max T sqrt(A) sum_h vis_{M_j}(h) ||.||
  std::vector<double> per_mdp_gap;  // L_{M'}(pi^{\j}) - L_{M'}(pi*), per member
  double policy_distance = 0.0;     // sum_h vis(h) ||pi^{\j} - pi*||
  double member_gap = 0.0;          // per_mdp_gap[j]
  bool lower_pass = false;
  bool upper_pass = false;

  double max_gap() const;
  bool pass() const noexcept { return lower_pass && upper_pass; }
};

/// Both sides of the leave-one-out sandwich for member j. `optimum` must be
/// solve_exact(sample_model, reg). When `loo` is given it is used as pi^{\j}.
StabilityReport stability_check(const BayesAdaptiveMdp& sample_model,
                                const Solution& optimum, RegConfig reg,
                                std::size_t j, const Policy* loo = nullptr);
StabilityReport stability_check(const BayesAdaptiveMdp& sample_model,
                                RegConfig reg, std::size_t j);

struct DEstimate {
  double d = 1.0;    // max node-wise member visitation ratio
  double cap = 1.0;  // q_ratio^T
  double q = 1.0;
};

/// Ratio convention: 0/0 = 1, x/0 = +inf. Members are compared pairwise on
/// `model`'s history space for every policy in `policies`.
DEstimate estimate_D(const BayesAdaptiveMdp& model,
                     const std::vector<Policy>& policies);

struct BoundInputs {
  double d_const = 1.0;
  double q_const = 1.0;
  double c_max = 1.0;
  double horizon = 1.0;
  double n_actions = 2.0;
  double lambda = 1.0;
  double n_samples = 1.0;
  double delta_conf = 0.1;
  double p_min = 1.0;
  double b_loss = 1.0;  // C_max T
};

/// sqrt(2 ln(2 |H| / delta) C_max^2 T^2 / N) with ln |H| = history_count ln A.
double naive_bound(const BoundInputs& in, double history_count);

enum class StabilityKind { kPointwise, kUniform };

/// Pointwise: sqrt((B^2 + 12 B N beta) / (2 N delta)).
/// Uniform: 2 beta + (4 N beta + B) sqrt(ln(1/delta) / (2 N)).
double bousquet_bound(const BoundInputs& in, double beta, StabilityKind kind);

/// High-probability bounds on the regularized ERM's generalization gap.
struct GeneralizationBounds {
  double kappa = 0.0;  // 2 D^2 C_max^2 T^2 A
  /// 2 lambda T + 2 kappa / (lambda N)
  ///   + (4 kappa / lambda + 3 C_max T) sqrt(ln(1/delta) / (2 N))
  double kappa_gen = 0.0;
  /// Finite families: 2 lambda T
  ///   + sqrt(C^2 T^2 / (2 N delta) + 48 C^3 T^3 A / (2 delta lambda N P_min))
  double finite_gen = 0.0;
  double example_rate = 0.0;  // finite_gen at lambda = N^{-1/3}
};

GeneralizationBounds generalization_bounds(const BoundInputs& in);

/// kappa / (lambda N).
double kappa_stability_bound(const BoundInputs& in);
/// 4 C_max^2 T^2 A / (lambda N p), p the member's empirical frequency.
double finite_member_bound(const BoundInputs& in, double frequency);
/// 2 D C_max T sqrt(A) / (lambda N).
double distance_bound(const BoundInputs& in);

struct SweepConfig {
  std::vector<std::size_t> n_list{2, 4, 8};
  std::vector<double> lambda_list{0.0, 0.1, 1.0};
  std::size_t seeds = 3;
  std::size_t horizon = 2;
  double delta_conf = 0.1;
  std::uint64_t root_seed = 0;
  std::size_t workers = 1;
  std::size_t node_cap = kDefaultNodeCap;
  bool stability = true;  // also run leave-one-out per cell (lambda > 0)
};

struct SweepRow {
  std::size_t n = 0;
  double lambda = 0.0;
  std::size_t seed_index = 0;
  std::uint64_t cell_seed = 0;
  std::size_t distinct = 0;
  double regret = 0.0;
  double erm_loss = 0.0;
  double optimal_loss = 0.0;
  double naive = 0.0;
  double kappa_gen = 0.0;
  double finite_gen = 0.0;
  double d_empirical = 0.0;
  double d_cap = 0.0;
  double max_gap = 0.0;
  double kappa_bound = 0.0;
  bool sandwich_pass = true;
  bool kappa_pass = true;
};

/// One row per (N, lambda, seed index), ordered by that key regardless of the
/// worker count. Samples are shared across lambda for a given (N, seed).
std::vector<SweepRow> generalization_experiment(const Prior& truth,
                                                const SweepConfig& cfg);

}  // namespace brl
