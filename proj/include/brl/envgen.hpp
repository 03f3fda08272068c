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

#include "brl/mdp.hpp"

namespace brl {

inline constexpr std::size_t kDefaultMemberCap = std::size_t{1} << 16;

/// The 2^T-member family whose trajectories trace a T-bit identifier.
///
/// States: s_0 = 0 and s_t^b = 1 + 2 (t - 1) + b for t = 1..T, b in {0, 1}.
/// From any layer t - 1 state, member x moves to s_t^{x_t} with probability
/// 1 - eps and to the other layer-t state with probability eps, whatever the
/// action. Bit t of x is (x >> (T - t)) & 1. Costs are {0, 1} and are zero
/// except at layer T, where a_0 costs f(x) and a_1 costs 1 - f(x). Layer-T
/// states loop on themselves. eps = eps_prime / 2^T and H = T.
struct LowerBoundSpec {
  std::size_t horizon = 1;
  double eps_prime = 0.1;
  std::vector<std::uint8_t> f;  // f[x] in {0, 1}, size 2^T
  std::size_t member_cap = kDefaultMemberCap;

  double eps() const noexcept;
};

Prior lower_bound_family(const LowerBoundSpec& spec);

/// Bit t (1-based) of identifier x under horizon T.
inline std::size_t identifier_bit(std::size_t x, std::size_t t,
                                  std::size_t horizon) noexcept {
  return (x >> (horizon - t)) & 1u;
}

/// State index of s_t^b.
inline std::size_t layer_state(std::size_t t, std::size_t b) noexcept {
  return t == 0 ? 0 : 1 + 2 * (t - 1) + b;
}

struct LowerBoundResult {
  double regret = 0.0;
  double unseen_fraction = 0.0;
  double bound_expression = 0.0;  // 0.5 phi - eps' (1 + 0.5 phi)
  double optimal_loss = 0.0;
  double erm_loss = 0.0;
  std::size_t unseen = 0;
  std::vector<std::uint8_t> f;
};

/// Samples N identifiers, fits the lambda = 0 ERM policy (uniform off its
/// support), then labels every unseen identifier against the action that
/// policy takes at the end of the identifier's noiseless trace (f = 1 where
/// it is uniform). Seen identifiers get random labels. Returns the exact
/// regret on the full family.
LowerBoundResult lower_bound_experiment(std::size_t horizon, double eps_prime,
                                        std::size_t n, std::uint64_t seed,
                                        std::size_t member_cap =
                                            kDefaultMemberCap);

/// Gated-chain family. States (s, u) = u * S + s for u = 0..k copy the base
/// MDP; gate g_i is state (k + 1) S + i - 1. From (s, u) with u < k every
/// action enters g_{u+1} with probability 1/4 and otherwise follows the base
/// kernel (scaled by 3/4) inside level u. Leaving g_i lands in level i, so a
/// gate is entered at most once and the gate subset at most k times per
/// episode. Members differ only in the gate rows and gate costs, which are
/// random per variant. Returned in joint form with uniform weights.
Prior restricted_difference_family(const TabularMdp& base, const CostSet& costs,
                                   std::size_t k, std::size_t variants,
                                   std::uint64_t seed);

struct RandomPriorShape {
  std::size_t n_states = 2;
  std::size_t n_actions = 2;
  std::vector<double> cost_values{0.0, 1.0};
  double c_max = 1.0;
  std::size_t horizon = 2;
  std::size_t members = 2;
  /// Next states per row with positive mass; 0 means all states.
  std::size_t support = 0;
};

/// Symmetric-Dirichlet transition rows, uniform random cost indices, init at
/// state 0, uniform weights.
Prior random_prior(const RandomPriorShape& shape, double concentration,
                   std::uint64_t seed);

}  // namespace brl
