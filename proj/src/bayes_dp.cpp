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

#include "brl/bayes_dp.hpp"

#include <algorithm>
#include <ostream>

#include "brl/error.hpp"
#include "brl/prior_io.hpp"
#include "brl/simplex.hpp"

namespace brl {

double regularizer(std::span<const double> p) noexcept {
  double s = 0.0;
  for (double x : p) s += x * x;
  return 0.5 * s;
}

void action_values(const BayesAdaptiveMdp& model,
                   std::span<const double> values, std::size_t node,
                   std::span<double> q) {
  const HistorySpace& sp = model.space();
  const bool terminal = sp.node(node).t == sp.horizon();
  for (std::size_t a = 0; a < sp.n_actions(); ++a) {
    double v = model.mean_cost(node, a);
    if (!terminal) {
      const NodeRange r = sp.children(node, a);
      for (std::size_t c = r.first; c < r.last; ++c)
        v += model.edge_prob(c) * values[c];
    }
    q[a] = v;
  }
}

ValueVector evaluate(const BayesAdaptiveMdp& model, const Policy& policy,
                     RegConfig reg) {
  require(policy.size() == model.size() &&
              policy.n_actions() == model.n_actions(),
          "policy does not match the history space");
  const std::size_t A = model.n_actions();
  ValueVector v(model.size(), 0.0);
  std::vector<double> q(A);
  for (std::size_t n = model.size(); n-- > 0;) {
    action_values(model, v, n, q);
    auto pi = policy.row(n);
    double x = 0.0;
    for (std::size_t a = 0; a < A; ++a) x += pi[a] * q[a];
    if (reg.lambda != 0.0) x += reg.lambda * regularizer(pi);
    v[n] = x;
  }
  return v;
}

double loss(const BayesAdaptiveMdp& model, std::span<const double> values) {
  const HistorySpace& sp = model.space();
  double l = 0.0;
  for (std::size_t r = 0; r < sp.n_roots(); ++r)
    l += sp.root_weights()[r] * values[r];
  return l;
}

double loss(const BayesAdaptiveMdp& model, const Policy& policy,
            RegConfig reg) {
  return loss(model, evaluate(model, policy, reg));
}

Solution solve_exact(const BayesAdaptiveMdp& model, RegConfig reg) {
  require(reg.lambda >= 0.0, "lambda must be nonnegative");
  const std::size_t A = model.n_actions();
  Solution sol{Policy(model.size(), A), ValueVector(model.size(), 0.0), 0.0};
  std::vector<double> q(A), scaled(A);
  for (std::size_t n = model.size(); n-- > 0;) {
    action_values(model, sol.values, n, q);
    auto pi = sol.policy.row(n);
    if (reg.lambda > 0.0) {
      for (std::size_t a = 0; a < A; ++a) scaled[a] = -q[a] / reg.lambda;
      project_simplex(scaled, pi);
      double x = reg.lambda * regularizer(pi);
      for (std::size_t a = 0; a < A; ++a) x += pi[a] * q[a];
      sol.values[n] = x;
    } else {
      std::size_t best = 0;
      for (std::size_t a = 1; a < A; ++a)
        if (q[a] < q[best]) best = a;
      pi[best] = 1.0;
      sol.values[n] = q[best];
    }
  }
  sol.loss = loss(model, sol.values);
  return sol;
}

std::vector<long long> match_nodes(const HistorySpace& dst,
                                   const HistorySpace& src) {
  require(dst.n_actions() == src.n_actions() &&
              dst.n_states() == src.n_states(),
          "history spaces have different shapes");
  std::vector<long long> map(dst.size(), -1);
  for (std::size_t r = 0; r < dst.n_roots(); ++r)
    for (std::size_t q = 0; q < src.n_roots(); ++q)
      if (src.node(q).state == dst.node(r).state)
        map[r] = static_cast<long long>(q);
  for (std::size_t n = dst.n_roots(); n < dst.size(); ++n) {
    const HistoryNode& node = dst.node(n);
    const long long p = map[node.parent];
    if (p < 0 || node.t > src.horizon()) continue;
    if (auto c = src.find_child(static_cast<std::size_t>(p), node.action,
                                node.cost, node.state))
      map[n] = static_cast<long long>(*c);
  }
  return map;
}

Policy transfer_policy(const Policy& policy, const HistorySpace& src,
                       const HistorySpace& dst) {
  require(policy.size() == src.size(), "policy does not match its space");
  const std::size_t A = dst.n_actions();
  Policy out = Policy::uniform(dst.size(), A);
  const auto map = match_nodes(dst, src);
  for (std::size_t n = 0; n < dst.size(); ++n) {
    if (map[n] < 0) continue;
    auto from = policy.row(static_cast<std::size_t>(map[n]));
    std::copy(from.begin(), from.end(), out.row(n).begin());
  }
  return out;
}

double regret(const BayesAdaptiveMdp& model, const Policy& policy,
              double optimal_loss) {
  return loss(model, policy, RegConfig{0.0}) - optimal_loss;
}

double regret(const BayesAdaptiveMdp& model, const Policy& policy) {
  return regret(model, policy, solve_exact(model, RegConfig{0.0}).loss);
}

double member_loss(const HistorySpace& space, const TabularMdp& member,
                   const CostSet& costs, const Policy& policy, RegConfig reg) {
  const auto vis = member_visitation(space, member, policy);
  const std::size_t A = space.n_actions();
  double l = 0.0;
  for (std::size_t n = 0; n < space.size(); ++n) {
    if (vis[n] == 0.0) continue;
    auto pi = policy.row(n);
    const std::size_t s = space.node(n).state;
    double x = reg.lambda * regularizer(pi);
    for (std::size_t a = 0; a < A; ++a)
      x += pi[a] * member.expected_cost(s, a, costs);
    l += vis[n] * x;
  }
  return l;
}

void write_policy_values_csv(std::ostream& out, const HistorySpace& space,
                             const Policy& policy,
                             std::span<const double> values) {
  out << "node,t,state,value";
  for (std::size_t a = 0; a < policy.n_actions(); ++a) out << ",p_" << a;
  out << '\n';
  for (std::size_t n = 0; n < space.size(); ++n) {
    out << n << ',' << space.node(n).t << ',' << space.node(n).state << ','
        << format_real(values[n]);
    for (double p : policy.row(n)) out << ',' << format_real(p);
    out << '\n';
  }
}

}  // namespace brl
