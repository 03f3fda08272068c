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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "brl/mdp.hpp"

namespace brl {

inline constexpr std::size_t kDefaultNodeCap = 5'000'000;
inline constexpr std::uint32_t kNoParent = 0xffffffffu;

struct HistoryStep {
  std::size_t state = 0;
  std::size_t action = 0;
  std::size_t cost = 0;  // index into the CostSet
};

/// h_t = (s_0, a_0, c_0, ..., s_t): t steps followed by a final state.
struct History {
  std::vector<HistoryStep> steps;
  std::size_t final_state = 0;

  std::size_t length() const noexcept { return steps.size(); }
};

struct HistoryNode {
  std::uint32_t parent = kNoParent;
  std::uint32_t state = 0;
  std::uint16_t t = 0;
  std::uint16_t action = 0;  // action/cost leading into this node; 0 at roots
  std::uint16_t cost = 0;
};

struct NodeRange {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t size() const noexcept { return last - first; }
};

/// All histories of length 0..T that have positive probability under the
/// prior, stored as a tree in breadth-first order.
///
/// Children of (node, action) occupy a contiguous index range and are ordered
/// by (cost index, next state). Node indices therefore increase with t, and
/// every child index is larger than its parent's.
class HistorySpace {
 public:
  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t mdp_horizon() const noexcept { return mdp_horizon_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t n_states() const noexcept { return n_states_; }
  std::size_t n_actions() const noexcept { return n_actions_; }
  std::size_t n_costs() const noexcept { return n_costs_; }

  const HistoryNode& node(std::size_t i) const { return nodes_[i]; }
  std::size_t depth_begin(std::size_t t) const { return depth_begin_.at(t); }
  std::size_t depth_end(std::size_t t) const { return depth_begin_.at(t + 1); }
  std::size_t n_roots() const noexcept { return depth_begin_[1]; }
  std::span<const double> root_weights() const noexcept {
    return root_weights_;
  }

  NodeRange children(std::size_t node, std::size_t action) const {
    const std::size_t k = node * n_actions_ + action;
    return {first_child_[k], first_child_[k + 1]};
  }

  /// True when the transition taken at step t replaces the next state by a
  /// fresh draw from init (only when T exceeds the MDP horizon H).
  bool resets_after(std::size_t t) const noexcept;

  History history(std::size_t node) const;
  std::optional<std::size_t> find_child(std::size_t node, std::size_t action,
                                        std::size_t cost,
                                        std::size_t next) const;
  std::optional<std::size_t> find(const History& h) const;

 private:
  friend HistorySpace enumerate(const Prior&, std::size_t, std::size_t);

  std::size_t horizon_ = 0;
  std::size_t mdp_horizon_ = 1;
  std::size_t n_states_ = 0;
  std::size_t n_actions_ = 0;
  std::size_t n_costs_ = 0;
  std::vector<HistoryNode> nodes_;
  std::vector<std::uint32_t> first_child_;
  std::vector<std::size_t> depth_begin_;
  std::vector<double> root_weights_;
};

/// Builds the reachable history tree. A history is kept iff some member with
/// positive weight gives it positive probability. Throws a capacity error
/// when more than `node_cap` nodes would be needed.
HistorySpace enumerate(const Prior& prior, std::size_t horizon,
                       std::size_t node_cap = kDefaultNodeCap);

/// P(c, s' | s, a) for one member at step t, applying the reset rule.
double outcome_prob(const TabularMdp& mdp, bool reset, std::size_t s,
                    std::size_t a, std::size_t c, std::size_t next);

/// Policy-free environment factor P_init(s_0) * prod_t P(s_{t+1}, c_t | s_t, a_t).
/// `space_horizon` selects the reset rule.
double likelihood(const History& h, const TabularMdp& mdp,
                  std::size_t space_horizon);

/// P(M | h_t) for every node, one row of prior-member weights per node.
class PosteriorTable {
 public:
  PosteriorTable() = default;
  PosteriorTable(std::size_t n_nodes, std::size_t n_members)
      : n_members_(n_members), p_(n_nodes * n_members, 0.0) {}

  std::size_t n_members() const noexcept { return n_members_; }
  std::span<const double> row(std::size_t node) const {
    return {p_.data() + node * n_members_, n_members_};
  }
  std::span<double> row(std::size_t node) {
    return {p_.data() + node * n_members_, n_members_};
  }

 private:
  std::size_t n_members_ = 0;
  std::vector<double> p_;
};

/// Child posterior = parent posterior reweighted by one step's joint
/// probability, renormalized. A zero normalizer throws an internal error.
PosteriorTable posteriors(const HistorySpace& space, const Prior& prior);

/// Posterior-mixed distribution over outcomes (c, s'), laid out c * S + s'.
std::vector<double> step_kernel(const HistorySpace& space,
                                const PosteriorTable& post, const Prior& prior,
                                std::size_t node, std::size_t action);

/// One probability vector over actions per history node.
class Policy {
 public:
  Policy() = default;
  Policy(std::size_t n_nodes, std::size_t n_actions)
      : n_actions_(n_actions), p_(n_nodes * n_actions, 0.0) {}

  static Policy uniform(std::size_t n_nodes, std::size_t n_actions);

  std::size_t size() const noexcept {
    return n_actions_ ? p_.size() / n_actions_ : 0;
  }
  std::size_t n_actions() const noexcept { return n_actions_; }
  std::span<const double> row(std::size_t node) const {
    return {p_.data() + node * n_actions_, n_actions_};
  }
  std::span<double> row(std::size_t node) {
    return {p_.data() + node * n_actions_, n_actions_};
  }
  std::span<const double> flat() const noexcept { return p_; }

  /// Every row nonnegative and summing to one within `tol`.
  bool is_valid(double tol = 1e-10) const;

 private:
  std::size_t n_actions_ = 0;
  std::vector<double> p_;
};

/// The Bayes-adaptive MDP over a prior: history tree, posteriors, and the
/// cached posterior step kernel and posterior-mean costs.
class BayesAdaptiveMdp {
 public:
  BayesAdaptiveMdp(Prior prior, std::size_t horizon,
                   std::size_t node_cap = kDefaultNodeCap);

  const Prior& prior() const noexcept { return prior_; }
  const HistorySpace& space() const noexcept { return space_; }
  const PosteriorTable& posterior() const noexcept { return post_; }
  std::size_t size() const noexcept { return space_.size(); }
  std::size_t horizon() const noexcept { return space_.horizon(); }
  std::size_t n_actions() const noexcept { return space_.n_actions(); }
  double c_max() const noexcept { return prior_.c_max(); }

  /// P(c, s' | h, a) of the edge that leads into `child` (child is not a root).
  double edge_prob(std::size_t child) const { return edge_prob_[child]; }
  /// E_{M | h} C_M(s, a).
  double mean_cost(std::size_t node, std::size_t action) const {
    return mean_cost_[node * space_.n_actions() + action];
  }

  Policy uniform_policy() const {
    return Policy::uniform(space_.size(), space_.n_actions());
  }

 private:
  Prior prior_;
  HistorySpace space_;
  PosteriorTable post_;
  std::vector<double> edge_prob_;
  std::vector<double> mean_cost_;
};

/// mu^T (I - P^pi)^{-1}: the probability of reaching each node under the
/// posterior-mixed dynamics. Computed by a forward pass.
std::vector<double> visitation(const BayesAdaptiveMdp& model,
                               const Policy& policy);

/// The same for a single member M, i.e. mu^T (I - P_M^pi)^{-1} on this space.
std::vector<double> member_visitation(const HistorySpace& space,
                                      const TabularMdp& member,
                                      const Policy& policy);

/// One node per line: index t parent action cost state mass. Parent, action
/// and cost are -1 at roots.
void write_space_dump(std::ostream& out, const HistorySpace& space,
                      std::span<const double> mass);

}  // namespace brl
