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

#include <cmath>

#include "brl/bayes_dp.hpp"
#include "brl/error.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace brl;
using testing::data;
using testing::make_mdp;

namespace {

Prior zero_cost(std::size_t A, std::size_t H) {
  CostSet costs({0.0}, 1.0);
  std::vector<std::size_t> idx(2 * A, 0);
  std::vector<double> trans;
  for (std::size_t i = 0; i < 2 * A; ++i) trans.insert(trans.end(), {0.5, 0.5});
  return testing::one(data(2, A, H, {1.0, 0.0}, idx, trans), costs);
}

}  // namespace

TEST_CASE("zero costs") {
  BayesAdaptiveMdp m(zero_cost(3, 2), 2);
  auto v0 = evaluate(m, m.uniform_policy(), {0.0});
  for (double v : v0) CHECK(v == 0.0);
  const double lambda = 0.7;
  auto v = evaluate(m, m.uniform_policy(), {lambda});
  CHECK(v[0] == doctest::Approx(3 * lambda / (2 * 3)).epsilon(1e-14));
  CHECK(loss(m, v) == doctest::Approx(v[0]).epsilon(1e-15));
}

TEST_CASE("single-member loss is the expected cost of the MDP") {
  Prior p = oracle::small_prior(3, 2, 3, 2, 1, 0, 17);
  BayesAdaptiveMdp m(p, 2);
  Policy pi = oracle::random_policy(m, 3);
  CHECK(loss(m, pi, {0.0}) ==
        doctest::Approx(oracle::trajectory_loss(m, 0, pi, 0.0)).epsilon(1e-12));
}

TEST_CASE("empirical loss is the mean of member losses") {
  Prior p = oracle::small_prior(3, 2, 2, 2, 3, 0, 21);
  for (double lambda : {0.0, 0.5}) {
    BayesAdaptiveMdp m(p, 3);
    Policy pi = oracle::random_policy(m, 4);
    double mean = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      const double direct = oracle::trajectory_loss(m, j, pi, lambda);
      const double lib = member_loss(m.space(), p.member(j), p.costs(), pi,
                                     {lambda});
      CHECK(std::abs(direct - lib) <= 1e-12);
      mean += direct / 3.0;
    }
    CHECK(std::abs(loss(m, pi, {lambda}) - mean) <= 1e-12);
  }
}

TEST_CASE("backward induction matches a dense linear solve") {
  Prior p = oracle::small_prior(3, 2, 2, 2, 2, 0, 33);
  BayesAdaptiveMdp m(p, 3);
  for (std::uint64_t k = 0; k < 3; ++k) {
    Policy pi = oracle::random_policy(m, k);
    auto v = evaluate(m, pi, {0.3});
    auto d = oracle::dense_values(m, pi, 0.3);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(std::abs(v[i] - d[i]) <= 1e-9);
  }
}

TEST_CASE("root value matches simulated returns") {
  Prior p = oracle::small_prior(2, 2, 2, 2, 2, 0, 8);
  BayesAdaptiveMdp m(p, 2);
  Policy pi = oracle::random_policy(m, 2);
  const double lambda = 0.5;
  const double exact = loss(m, pi, {lambda});
  const std::size_t n = 1000000;
  auto sim = oracle::simulate(m, pi, lambda, n, 4);
  CHECK(std::abs(sim.mean_return - exact) <=
        3.0 * sim.return_stddev / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("deterministic chain picks the cheap action") {
  CostSet costs({0.0, 0.25, 1.0}, 1.0);
  // State 0 -> 1 -> 2 -> 2. Action 1 is cheaper at 0 and 2, action 0 at 1.
  Prior p = testing::one(data(3, 2, 3, {1.0, 0.0, 0.0}, {2, 1, 0, 2, 1, 0},
                              {0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1}),
                         costs);
  BayesAdaptiveMdp m(p, 3);
  Solution sol = solve_exact(m, {0.0});
  CHECK(sol.loss == doctest::Approx(0.25 + 0.0 + 0.0 + 0.0));
  CHECK(sol.policy.row(0)[1] == 1.0);
  CHECK(sol.policy.row(1)[0] == 1.0);
}

TEST_CASE("huge lambda makes the optimum uniform") {
  Prior p = oracle::small_prior(3, 3, 2, 2, 2, 0, 3);
  BayesAdaptiveMdp m(p, 2);
  Solution sol = solve_exact(m, {1e6});
  for (std::size_t i = 0; i < m.size(); ++i)
    for (double x : sol.policy.row(i)) CHECK(std::abs(x - 1.0 / 3) <= 1e-5);
}

TEST_CASE("exact solve equals brute-force enumeration") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 10; ++seed) {
    Prior p = oracle::small_prior(2, 2, 2, 2, 2, 1, 1000 + seed);
    BayesAdaptiveMdp m(p, 2);
    if (m.size() > 16) continue;
    auto bf = oracle::brute_force(p, 2);
    CHECK(bf.decision_points == m.size());
    CHECK(std::abs(solve_exact(m, {0.0}).loss - bf.best_loss) <= 1e-9);
    ++checked;
  }
}

TEST_CASE("exact solve beats random policies") {
  Prior p = oracle::small_prior(3, 2, 2, 2, 3, 0, 77);
  BayesAdaptiveMdp m(p, 2);
  for (double lambda : {0.0, 0.2, 2.0}) {
    Solution sol = solve_exact(m, {lambda});
    CHECK(sol.policy.is_valid());
    for (std::uint64_t k = 0; k < 20; ++k)
      CHECK(sol.loss <= loss(m, oracle::random_policy(m, k), {lambda}) + 1e-12);
  }
}

TEST_CASE("regret") {
  Prior p = oracle::small_prior(2, 2, 2, 2, 2, 0, 12);
  BayesAdaptiveMdp m(p, 2);
  CHECK(std::abs(regret(m, solve_exact(m, {0.0}).policy)) <= 1e-14);

  // Bandit: action 1 always costs 1, action 0 costs 0.
  CostSet costs({0.0, 1.0}, 1.0);
  Prior bandit = testing::one(data(1, 2, 2, {1.0}, {0, 1}, {1.0, 1.0}), costs);
  BayesAdaptiveMdp b(bandit, 2);
  Policy worst(b.size(), 2);
  for (std::size_t i = 0; i < b.size(); ++i) worst.row(i)[1] = 1.0;
  CHECK(regret(b, worst) == doctest::Approx(3.0));
}

TEST_CASE("policy transfer between spaces") {
  Prior p = oracle::small_prior(3, 2, 2, 2, 3, 2, 44);
  BayesAdaptiveMdp full(p, 2);
  BayesAdaptiveMdp part(p.single(0), 2);
  Policy pi = oracle::random_policy(part, 1);
  Policy moved = transfer_policy(pi, part.space(), full.space());
  auto match = match_nodes(full.space(), part.space());
  for (std::size_t i = 0; i < full.size(); ++i) {
    auto row = moved.row(i);
    if (match[i] < 0) {
      for (double x : row) CHECK(x == 0.5);
    } else {
      auto src = pi.row(static_cast<std::size_t>(match[i]));
      for (std::size_t a = 0; a < 2; ++a) CHECK(row[a] == src[a]);
    }
  }
  // Member 0 only visits matched nodes, so its loss is unchanged.
  CHECK(std::abs(member_loss(full.space(), p.member(0), p.costs(), moved, {0.1}) -
                 loss(part, pi, {0.1})) <= 1e-12);
}

TEST_CASE("ERM from one sample on a two-member prior") {
  Prior p = oracle::small_prior(2, 2, 2, 2, 2, 0, 61);
  BayesAdaptiveMdp truth(p, 2);
  BayesAdaptiveMdp sample(p.single(1), 2);
  Policy erm = transfer_policy(solve_exact(sample, {0.0}).policy, sample.space(),
                               truth.space());
  const double direct = 0.5 * oracle::trajectory_loss(truth, 0, erm, 0.0) +
                        0.5 * oracle::trajectory_loss(truth, 1, erm, 0.0);
  const Policy opt = solve_exact(truth, {0.0}).policy;
  const double best = 0.5 * oracle::trajectory_loss(truth, 0, opt, 0.0) +
                      0.5 * oracle::trajectory_loss(truth, 1, opt, 0.0);
  CHECK(std::abs(regret(truth, erm) - (direct - best)) <= 1e-9);
  CHECK(regret(truth, erm) >= -1e-12);
}
