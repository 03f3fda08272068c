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

#include "brl/history.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "brl/error.hpp"
#include "brl/prior_io.hpp"

namespace brl {

bool HistorySpace::resets_after(std::size_t t) const noexcept {
  return horizon_ > mdp_horizon_ && (t + 1) % mdp_horizon_ == 0;
}

History HistorySpace::history(std::size_t node) const {
  History h;
  h.final_state = nodes_.at(node).state;
  std::vector<HistoryStep> rev;
  std::size_t cur = node;
  while (nodes_[cur].parent != kNoParent) {
    const HistoryNode& n = nodes_[cur];
    rev.push_back({nodes_[n.parent].state, n.action, n.cost});
    cur = n.parent;
  }
  h.steps.assign(rev.rbegin(), rev.rend());
  return h;
}

std::optional<std::size_t> HistorySpace::find_child(std::size_t node,
                                                    std::size_t action,
                                                    std::size_t cost,
                                                    std::size_t next) const {
  if (node >= size() || action >= n_actions_) return std::nullopt;
  const NodeRange r = children(node, action);
  for (std::size_t c = r.first; c < r.last; ++c)
    if (nodes_[c].cost == cost && nodes_[c].state == next) return c;
  return std::nullopt;
}

std::optional<std::size_t> HistorySpace::find(const History& h) const {
  const std::size_t s0 = h.steps.empty() ? h.final_state : h.steps[0].state;
  std::optional<std::size_t> cur;
  for (std::size_t r = 0; r < n_roots(); ++r)
    if (nodes_[r].state == s0) cur = r;
  for (std::size_t i = 0; cur && i < h.steps.size(); ++i) {
    const std::size_t next =
        i + 1 < h.steps.size() ? h.steps[i + 1].state : h.final_state;
    cur = find_child(*cur, h.steps[i].action, h.steps[i].cost, next);
  }
  return cur;
}

double outcome_prob(const TabularMdp& mdp, bool reset, std::size_t s,
                    std::size_t a, std::size_t c, std::size_t next) {
  if (reset) return mdp.cost_prob(s, a, c) * mdp.init()[next];
  return mdp.joint(s, a, c, next);
}

HistorySpace enumerate(const Prior& prior, std::size_t horizon,
                       std::size_t node_cap) {
  require(horizon < 0xffff, "horizon too large");
  HistorySpace sp;
  sp.horizon_ = horizon;
  sp.mdp_horizon_ = prior.horizon();
  sp.n_states_ = prior.n_states();
  sp.n_actions_ = prior.n_actions();
  sp.n_costs_ = prior.n_costs();
  const std::size_t S = sp.n_states_, A = sp.n_actions_, C = sp.n_costs_;
  const std::size_t K = prior.size();
  const std::size_t cap = std::min<std::size_t>(node_cap, kNoParent - 1);
  auto capacity_error = [&] {
    fail(ErrorCode::kCapacity,
         "history space exceeds the node cap of " + std::to_string(node_cap));
  };

  // alive[i * K + m]: member m has positive weight and gives node i positive
  // likelihood. Only the current depth and the next are kept.
  std::vector<std::uint8_t> alive, next_alive;
  sp.depth_begin_.push_back(0);
  for (std::size_t s = 0; s < S; ++s) {
    if (prior.init()[s] <= 0.0) continue;
    if (sp.nodes_.size() + 1 > cap) capacity_error();
    sp.nodes_.push_back({kNoParent, static_cast<std::uint32_t>(s), 0, 0, 0});
    sp.root_weights_.push_back(prior.init()[s]);
    for (std::size_t m = 0; m < K; ++m)
      alive.push_back(prior.weight(m) > 0.0 ? 1 : 0);
  }
  sp.depth_begin_.push_back(sp.nodes_.size());

  for (std::size_t t = 0; t < horizon; ++t) {
    const bool reset = sp.resets_after(t);
    const std::size_t begin = sp.depth_begin_[t], end = sp.depth_begin_[t + 1];
    next_alive.clear();
    for (std::size_t n = begin; n < end; ++n) {
      const std::uint8_t* live = alive.data() + (n - begin) * K;
      const std::size_t s = sp.nodes_[n].state;
      for (std::size_t a = 0; a < A; ++a) {
        sp.first_child_.push_back(static_cast<std::uint32_t>(sp.nodes_.size()));
        for (std::size_t c = 0; c < C; ++c)
          for (std::size_t next = 0; next < S; ++next) {
            bool any = false;
            const std::size_t mark = next_alive.size();
            for (std::size_t m = 0; m < K; ++m) {
              const bool ok =
                  live[m] &&
                  outcome_prob(prior.member(m), reset, s, a, c, next) > 0.0;
              next_alive.push_back(ok ? 1 : 0);
              any = any || ok;
            }
            if (!any) {
              next_alive.resize(mark);
              continue;
            }
            if (sp.nodes_.size() + 1 > cap) capacity_error();
            sp.nodes_.push_back({static_cast<std::uint32_t>(n),
                                 static_cast<std::uint32_t>(next),
                                 static_cast<std::uint16_t>(t + 1),
                                 static_cast<std::uint16_t>(a),
                                 static_cast<std::uint16_t>(c)});
          }
      }
    }
    sp.depth_begin_.push_back(sp.nodes_.size());
    alive.swap(next_alive);
  }
  // Leaves (and everything when horizon == 0) have empty child ranges.
  while (sp.first_child_.size() < sp.nodes_.size() * A + 1)
    sp.first_child_.push_back(static_cast<std::uint32_t>(sp.nodes_.size()));
  return sp;
}

double likelihood(const History& h, const TabularMdp& mdp,
                  std::size_t space_horizon) {
  const std::size_t H = mdp.horizon();
  const std::size_t s0 = h.steps.empty() ? h.final_state : h.steps[0].state;
  double p = mdp.init()[s0];
  for (std::size_t t = 0; t < h.steps.size(); ++t) {
    const std::size_t next =
        t + 1 < h.steps.size() ? h.steps[t + 1].state : h.final_state;
    const bool reset = space_horizon > H && (t + 1) % H == 0;
    p *= outcome_prob(mdp, reset, h.steps[t].state, h.steps[t].action,
                      h.steps[t].cost, next);
  }
  return p;
}

PosteriorTable posteriors(const HistorySpace& space, const Prior& prior) {
  const std::size_t K = prior.size();
  PosteriorTable post(space.size(), K);
  for (std::size_t r = 0; r < space.n_roots(); ++r) {
    auto row = post.row(r);
    for (std::size_t m = 0; m < K; ++m) row[m] = prior.weight(m);
  }
  for (std::size_t n = space.n_roots(); n < space.size(); ++n) {
    const HistoryNode& node = space.node(n);
    const HistoryNode& parent = space.node(node.parent);
    const bool reset = space.resets_after(parent.t);
    auto prow = post.row(node.parent);
    auto row = post.row(n);
    double z = 0.0;
    for (std::size_t m = 0; m < K; ++m) {
      row[m] = prow[m] * outcome_prob(prior.member(m), reset, parent.state,
                                      node.action, node.cost, node.state);
      z += row[m];
    }
    if (!(z > 0.0))
      fail(ErrorCode::kInternal,
           "zero posterior normalizer at node " + std::to_string(n));
    for (double& x : row) x /= z;
  }
  return post;
}

std::vector<double> step_kernel(const HistorySpace& space,
                                const PosteriorTable& post, const Prior& prior,
                                std::size_t node, std::size_t action) {
  const HistoryNode& n = space.node(node);
  require(n.t < space.horizon(), "step kernel requested at a terminal node");
  const std::size_t S = space.n_states(), C = space.n_costs();
  const bool reset = space.resets_after(n.t);
  std::vector<double> out(C * S, 0.0);
  auto w = post.row(node);
  for (std::size_t m = 0; m < prior.size(); ++m) {
    if (w[m] == 0.0) continue;
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t next = 0; next < S; ++next)
        out[c * S + next] +=
            w[m] * outcome_prob(prior.member(m), reset, n.state, action, c,
                                next);
  }
  return out;
}

Policy Policy::uniform(std::size_t n_nodes, std::size_t n_actions) {
  Policy p(n_nodes, n_actions);
  const double u = 1.0 / static_cast<double>(n_actions);
  for (double& x : p.p_) x = u;
  return p;
}

bool Policy::is_valid(double tol) const {
  for (std::size_t n = 0; n < size(); ++n) {
    double s = 0.0;
    for (double x : row(n)) {
      if (!(x >= -tol)) return false;
      s += x;
    }
    if (std::abs(s - 1.0) > tol) return false;
  }
  return true;
}

BayesAdaptiveMdp::BayesAdaptiveMdp(Prior prior, std::size_t horizon,
                                   std::size_t node_cap)
    : prior_(std::move(prior)),
      space_(enumerate(prior_, horizon, node_cap)),
      post_(posteriors(space_, prior_)) {
  const std::size_t N = space_.size(), A = space_.n_actions();
  const std::size_t K = prior_.size();
  edge_prob_.assign(N, 0.0);
  mean_cost_.assign(N * A, 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    const HistoryNode& node = space_.node(n);
    auto w = post_.row(n);
    for (std::size_t a = 0; a < A; ++a) {
      double e = 0.0;
      for (std::size_t m = 0; m < K; ++m)
        if (w[m] != 0.0)
          e += w[m] * prior_.member(m).expected_cost(node.state, a,
                                                     prior_.costs());
      mean_cost_[n * A + a] = e;
    }
    if (node.t == space_.horizon()) continue;
    const bool reset = space_.resets_after(node.t);
    for (std::size_t a = 0; a < A; ++a) {
      const NodeRange r = space_.children(n, a);
      for (std::size_t c = r.first; c < r.last; ++c) {
        const HistoryNode& ch = space_.node(c);
        double p = 0.0;
        for (std::size_t m = 0; m < K; ++m)
          if (w[m] != 0.0)
            p += w[m] * outcome_prob(prior_.member(m), reset, node.state, a,
                                     ch.cost, ch.state);
        edge_prob_[c] = p;
      }
    }
  }
}

std::vector<double> visitation(const BayesAdaptiveMdp& model,
                               const Policy& policy) {
  const HistorySpace& sp = model.space();
  std::vector<double> mass(sp.size(), 0.0);
  for (std::size_t r = 0; r < sp.n_roots(); ++r) mass[r] = sp.root_weights()[r];
  for (std::size_t n = 0; n < sp.depth_begin(sp.horizon()); ++n) {
    auto pi = policy.row(n);
    for (std::size_t a = 0; a < sp.n_actions(); ++a) {
      const double pa = mass[n] * pi[a];
      const NodeRange r = sp.children(n, a);
      for (std::size_t c = r.first; c < r.last; ++c)
        mass[c] = pa * model.edge_prob(c);
    }
  }
  return mass;
}

std::vector<double> member_visitation(const HistorySpace& sp,
                                      const TabularMdp& member,
                                      const Policy& policy) {
  std::vector<double> mass(sp.size(), 0.0);
  for (std::size_t r = 0; r < sp.n_roots(); ++r)
    mass[r] = member.init()[sp.node(r).state];
  for (std::size_t n = 0; n < sp.depth_begin(sp.horizon()); ++n) {
    if (mass[n] == 0.0) continue;
    const HistoryNode& node = sp.node(n);
    const bool reset = sp.resets_after(node.t);
    auto pi = policy.row(n);
    for (std::size_t a = 0; a < sp.n_actions(); ++a) {
      const double pa = mass[n] * pi[a];
      const NodeRange r = sp.children(n, a);
      for (std::size_t c = r.first; c < r.last; ++c) {
        const HistoryNode& ch = sp.node(c);
        mass[c] =
            pa * outcome_prob(member, reset, node.state, a, ch.cost, ch.state);
      }
    }
  }
  return mass;
}

void write_space_dump(std::ostream& out, const HistorySpace& space,
                      std::span<const double> mass) {
  for (std::size_t i = 0; i < space.size(); ++i) {
    const HistoryNode& n = space.node(i);
    const bool root = n.parent == kNoParent;
    out << i << ' ' << n.t << ' '
        << (root ? -1 : static_cast<long long>(n.parent)) << ' '
        << (root ? -1 : static_cast<int>(n.action)) << ' '
        << (root ? -1 : static_cast<int>(n.cost)) << ' ' << n.state << ' '
        << format_real(i < mass.size() ? mass[i] : 0.0) << '\n';
  }
}

}  // namespace brl
