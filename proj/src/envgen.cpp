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

#include "brl/envgen.hpp"

#include <algorithm>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <cmath>
#include <numeric>

#include "brl/bayes_dp.hpp"
#include "brl/error.hpp"
#include "brl/rng.hpp"

namespace brl {
namespace {

std::vector<double> dirichlet(Rng& rng, std::size_t n, double concentration) {
  boost::random::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> x(n);
  double total = 0.0;
  for (double& v : x) {
    v = gamma(rng);
    total += v;
  }
  if (!(total > 0.0)) {
    // Tiny concentrations can underflow every draw; fall back to a vertex.
    boost::random::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::fill(x.begin(), x.end(), 0.0);
    x[pick(rng)] = 1.0;
    return x;
  }
  for (double& v : x) v /= total;
  return x;
}

std::size_t lb_members(const LowerBoundSpec& spec) {
  require(spec.horizon >= 1, "lower-bound horizon must be at least 1");
  require(spec.eps_prime > 0.0 && spec.eps_prime < 1.0,
          "eps_prime must lie in (0, 1)");
  if (spec.horizon >= 63 ||
      (std::size_t{1} << spec.horizon) > spec.member_cap)
    fail(ErrorCode::kCapacity, "lower-bound family exceeds the member cap of " +
                                   std::to_string(spec.member_cap));
  return std::size_t{1} << spec.horizon;
}

}  // namespace

double LowerBoundSpec::eps() const noexcept {
  return eps_prime / std::ldexp(1.0, static_cast<int>(horizon));
}

Prior lower_bound_family(const LowerBoundSpec& spec) {
  const std::size_t K = lb_members(spec);
  require(spec.f.size() == K, "f must have one entry per identifier");
  const std::size_t T = spec.horizon;
  const std::size_t S = 2 * T + 1, A = 2;
  const double eps = spec.eps();
  CostSet costs({0.0, 1.0}, 1.0);
  std::vector<MdpPtr> members;
  members.reserve(K);
  for (std::size_t x = 0; x < K; ++x) {
    require(spec.f[x] <= 1, "f values must be 0 or 1");
    MdpData d;
    d.n_states = S;
    d.n_actions = A;
    d.horizon = T;
    d.init.assign(S, 0.0);
    d.init[0] = 1.0;
    d.cost_index.assign(S * A, 0);
    d.trans.assign(S * A * S, 0.0);
    for (std::size_t t = 1; t <= T; ++t) {
      const std::size_t bit = identifier_bit(x, t, T);
      const std::size_t from_first = layer_state(t - 1, 0);
      const std::size_t from_last = t == 1 ? 0 : layer_state(t - 1, 1);
      for (std::size_t s = from_first; s <= from_last; ++s)
        for (std::size_t a = 0; a < A; ++a) {
          double* row = d.trans.data() + (s * A + a) * S;
          row[layer_state(t, bit)] = 1.0 - eps;
          row[layer_state(t, 1 - bit)] = eps;
        }
    }
    for (std::size_t b = 0; b < 2; ++b) {
      const std::size_t s = layer_state(T, b);
      for (std::size_t a = 0; a < A; ++a) d.trans[(s * A + a) * S + s] = 1.0;
      d.cost_index[s * A + 0] = spec.f[x];
      d.cost_index[s * A + 1] = 1 - spec.f[x];
    }
    members.push_back(std::make_shared<const TabularMdp>(std::move(d), costs));
  }
  return Prior(std::move(members), std::vector<double>(K, 1.0 / K), costs);
}

LowerBoundResult lower_bound_experiment(std::size_t horizon, double eps_prime,
                                        std::size_t n, std::uint64_t seed,
                                        std::size_t member_cap) {
  require(n >= 1, "sample size must be at least 1");
  LowerBoundSpec spec{horizon, eps_prime, {}, member_cap};
  const std::size_t K = lb_members(spec);
  const std::size_t T = horizon;
  Rng root = Rng::from_seed(seed);

  Rng label_rng = root.substream("lower_bound_f");
  spec.f.resize(K);
  for (auto& v : spec.f) v = static_cast<std::uint8_t>(label_rng() >> 63);

  // Draw identifiers; only seen labels influence the ERM policy.
  const Prior provisional = lower_bound_family(spec);
  const Prior sample =
      sample_empirical(provisional, n, root.substream("lower_bound_sample").key());
  std::vector<bool> seen(K, false);
  for (std::size_t i = 0; i < sample.size(); ++i) seen[sample.label(i)] = true;

  const BayesAdaptiveMdp sample_model(sample, T);
  const Solution erm = solve_exact(sample_model, RegConfig{0.0});

  // The adversary walks each unseen identifier's noiseless trace following
  // the ERM's own actions and labels x against its final choice.
  LowerBoundResult res;
  const auto& sp = sample_model.space();
  for (std::size_t x = 0; x < K; ++x) {
    if (seen[x]) continue;
    ++res.unseen;
    std::optional<std::size_t> node = 0;
    for (std::size_t t = 1; node && t <= T; ++t) {
      auto pi = erm.policy.row(*node);
      const std::size_t a = pi[1] > pi[0] ? 1 : 0;
      node = sp.find_child(*node, a, 0, layer_state(t, identifier_bit(x, t, T)));
    }
    std::uint8_t label = 1;
    if (node) {
      auto pi = erm.policy.row(*node);
      if (pi[0] != pi[1]) label = pi[0] > pi[1] ? 1 : 0;
    }
    spec.f[x] = label;
  }

  const Prior truth = lower_bound_family(spec);
  const BayesAdaptiveMdp true_model(truth, T);
  const Solution best = solve_exact(true_model, RegConfig{0.0});
  const Policy moved = transfer_policy(erm.policy, sp, true_model.space());
  res.optimal_loss = best.loss;
  res.erm_loss = loss(true_model, moved, RegConfig{0.0});
  res.regret = res.erm_loss - res.optimal_loss;
  res.unseen_fraction = static_cast<double>(res.unseen) / static_cast<double>(K);
  res.bound_expression = 0.5 * res.unseen_fraction -
                         eps_prime * (1.0 + 0.5 * res.unseen_fraction);
  res.f = std::move(spec.f);
  return res;
}

Prior restricted_difference_family(const TabularMdp& base, const CostSet& costs,
                                   std::size_t k, std::size_t variants,
                                   std::uint64_t seed) {
  require(variants >= 1, "need at least one variant");
  require(base.n_costs() == costs.size(), "cost set does not match the base");
  const std::size_t Sb = base.n_states(), A = base.n_actions(),
                    C = costs.size();
  const std::size_t S = (k + 1) * Sb + k;
  const auto gate = [&](std::size_t i) { return (k + 1) * Sb + i - 1; };
  constexpr double kGate = 0.25;
  Rng root = Rng::from_seed(seed).substream("restricted_difference");

  std::vector<MdpPtr> members;
  for (std::size_t v = 0; v < variants; ++v) {
    Rng rng = root.substream(v);
    MdpData d;
    d.n_states = S;
    d.n_actions = A;
    d.horizon = base.horizon();
    d.init.assign(S, 0.0);
    for (std::size_t s = 0; s < Sb; ++s) d.init[s] = base.init()[s];
    d.joint.assign(S * A * C * S, 0.0);
    auto cell = [&](std::size_t s, std::size_t a, std::size_t c,
                    std::size_t next) -> double& {
      return d.joint[((s * A + a) * C + c) * S + next];
    };
    for (std::size_t u = 0; u <= k; ++u)
      for (std::size_t s = 0; s < Sb; ++s)
        for (std::size_t a = 0; a < A; ++a) {
          const std::size_t from = u * Sb + s;
          const double keep = u < k ? 1.0 - kGate : 1.0;
          auto row = base.joint_row(s, a);
          for (std::size_t c = 0; c < C; ++c)
            for (std::size_t n = 0; n < Sb; ++n)
              cell(from, a, c, u * Sb + n) = keep * row[c * Sb + n];
          if (u < k) {
            // Entering the gate emits the same cost distribution.
            for (std::size_t c = 0; c < C; ++c)
              cell(from, a, c, gate(u + 1)) = kGate * base.cost_prob(s, a, c);
          }
        }
    boost::random::uniform_int_distribution<std::size_t> pick_cost(0, C - 1);
    for (std::size_t i = 1; i <= k; ++i)
      for (std::size_t a = 0; a < A; ++a) {
        const std::size_t c = pick_cost(rng);
        const auto next = dirichlet(rng, Sb, 1.0);
        for (std::size_t n = 0; n < Sb; ++n) cell(gate(i), a, c, i * Sb + n) = next[n];
      }
    members.push_back(std::make_shared<const TabularMdp>(std::move(d), costs));
  }
  return Prior(std::move(members),
               std::vector<double>(variants, 1.0 / variants), costs);
}

Prior random_prior(const RandomPriorShape& shape, double concentration,
                   std::uint64_t seed) {
  require(shape.n_states >= 1 && shape.n_actions >= 1,
          "states and actions must be positive");
  require(shape.members >= 1, "need at least one member");
  require(shape.horizon >= 1, "horizon must be at least 1");
  require(concentration > 0.0, "concentration must be positive");
  require(shape.support <= shape.n_states, "support exceeds the state count");
  CostSet costs(shape.cost_values, shape.c_max);
  const std::size_t S = shape.n_states, A = shape.n_actions;
  const std::size_t width = shape.support == 0 ? S : shape.support;
  Rng root = Rng::from_seed(seed).substream("random_prior");
  boost::random::uniform_int_distribution<std::size_t> pick_cost(
      0, costs.size() - 1);
  std::vector<MdpPtr> members;
  for (std::size_t m = 0; m < shape.members; ++m) {
    Rng rng = root.substream(m);
    MdpData d;
    d.n_states = S;
    d.n_actions = A;
    d.horizon = shape.horizon;
    d.init.assign(S, 0.0);
    d.init[0] = 1.0;
    d.cost_index.resize(S * A);
    d.trans.assign(S * A * S, 0.0);
    std::vector<std::size_t> order(S);
    for (std::size_t sa = 0; sa < S * A; ++sa) {
      d.cost_index[sa] = pick_cost(rng);
      std::iota(order.begin(), order.end(), 0);
      // Partial Fisher-Yates picks the supported next states.
      for (std::size_t i = 0; i < width; ++i) {
        boost::random::uniform_int_distribution<std::size_t> pick(i, S - 1);
        std::swap(order[i], order[pick(rng)]);
      }
      const auto w = dirichlet(rng, width, concentration);
      for (std::size_t i = 0; i < width; ++i)
        d.trans[sa * S + order[i]] = w[i];
    }
    members.push_back(std::make_shared<const TabularMdp>(std::move(d), costs));
  }
  return Prior(std::move(members),
               std::vector<double>(shape.members, 1.0 / shape.members),
               std::move(costs));
}

}  // namespace brl
