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

#include <iosfwd>
#include <span>
#include <vector>

#include "brl/history.hpp"

namespace brl {

/// R(p) = 1/2 ||p||^2, weighted by lambda.
struct RegConfig {
  double lambda = 0.0;
};

double regularizer(std::span<const double> p) noexcept;

/// One value per history node.
using ValueVector = std::vector<double>;

/// V^pi by backward induction. Costs and regularization are incurred at every
/// node, including the length-T ones, so a trajectory pays T + 1 terms.
ValueVector evaluate(const BayesAdaptiveMdp& model, const Policy& policy,
                     RegConfig reg);

/// mu^T V: the root-weighted value.
double loss(const BayesAdaptiveMdp& model, std::span<const double> values);
double loss(const BayesAdaptiveMdp& model, const Policy& policy, RegConfig reg);

/// Unregularized Q(h, a) = E[C | h, a] + sum over children of P * V(child).
void action_values(const BayesAdaptiveMdp& model,
                   std::span<const double> values, std::size_t node,
                   std::span<double> q);

struct Solution {
  Policy policy;
  ValueVector values;
  double loss = 0.0;
};

/// Per node, minimizes <p, Q> + lambda R(p) over the simplex. For lambda > 0
/// this is the projection of -Q / lambda; for lambda = 0 the lowest-index
/// argmin action.
Solution solve_exact(const BayesAdaptiveMdp& model, RegConfig reg);

/// For every node of `dst`, the matching node of `src` (same states, actions
/// and costs), or -1 when `src` has no such history.
std::vector<long long> match_nodes(const HistorySpace& dst,
                                   const HistorySpace& src);

/// Carries a policy to another history space; unmatched nodes act uniformly.
Policy transfer_policy(const Policy& policy, const HistorySpace& src,
                       const HistorySpace& dst);

/// Unregularized loss of `policy` minus the Bayes-optimal loss on `model`.
double regret(const BayesAdaptiveMdp& model, const Policy& policy);
double regret(const BayesAdaptiveMdp& model, const Policy& policy,
              double optimal_loss);

/// Loss of `policy` on the single MDP `member`, evaluated on `space`:
/// sum_h vis_M(h) (sum_a pi(a|h) C_M(s, a) + lambda R(pi(h))).
double member_loss(const HistorySpace& space, const TabularMdp& member,
                   const CostSet& costs, const Policy& policy, RegConfig reg);

/// CSV with columns node,t,state,value,p_0..p_{A-1}.
void write_policy_values_csv(std::ostream& out, const HistorySpace& space,
                             const Policy& policy,
                             std::span<const double> values);

}  // namespace brl
