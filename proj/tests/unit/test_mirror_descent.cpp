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

#include "brl/error.hpp"
#include "brl/mirror_descent.hpp"
#include "brl/rng.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace brl;
using testing::data;

namespace {

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

Prior zero_cost_prior() {
  CostSet costs({0.0}, 1.0);
  return testing::one(data(2, 2, 2, {1.0, 0.0}, {0, 0, 0, 0},
                           {0.5, 0.5, 0.2, 0.8, 0.6, 0.4, 1.0, 0.0}),
                      costs);
}

}  // namespace

TEST_CASE("simplex projection examples") {
  auto p = project_simplex(std::vector<double>{0.3, 0.7});
  CHECK(p[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.7).epsilon(1e-15));
  p = project_simplex(std::vector<double>{0.0, 0.0});
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.5);

  std::vector<double> v{1.2, 0.4, -0.1};
  auto lib = project_simplex(v);
  auto grid = oracle::grid_projection3(v, 1e-4);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(lib[i] - grid[i]) <= 2e-4);
}

TEST_CASE("simplex projection matches the grid oracle on random inputs") {
  Rng rng = Rng::from_seed(5);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> v(3);
    for (double& x : v) x = 3.0 * rng.uniform() - 1.0;
    auto lib = project_simplex(v);
    auto grid = oracle::grid_projection3(v, 1e-3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(lib[i] - grid[i]) <= 2e-3);
  }
}

TEST_CASE("simplex projection is idempotent and nonexpansive") {
  Rng rng = Rng::from_seed(6);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 5;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = 4.0 * rng.uniform() - 2.0;
      b[i] = 4.0 * rng.uniform() - 2.0;
    }
    auto pa = project_simplex(a), pb = project_simplex(b);
    double sum = 0.0;
    for (double x : pa) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    auto again = project_simplex(pa);
    CHECK(dist2(again, pa) <= 1e-26);
    CHECK(dist2(pa, pb) <= dist2(a, b) + 1e-12);
  }
}

TEST_CASE("uniform trust-region step") {
  SUBCASE("constant q keeps the uniform policy") {
    BayesAdaptiveMdp m(zero_cost_prior(), 2);
    Policy next = utrpo_step(m, m.uniform_policy(), {1.0}, 0.3);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (double x : next.row(i)) CHECK(x == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("vanishing step leaves the policy unchanged") {
    Prior p = oracle::small_prior(2, 2, 2, 2, 2, 0, 4);
    BayesAdaptiveMdp m(p, 2);
    Policy pi = oracle::random_policy(m, 1);
    Policy next = utrpo_step(m, pi, {1.0}, 1e-12);
    for (std::size_t i = 0; i < m.size(); ++i)
      CHECK(dist2(next.row(i), pi.row(i)) <= 1e-20);
  }
  SUBCASE("hand node matches the grid minimizer") {
    // At a length-T node of a one-state bandit, q equals the immediate cost.
    CostSet costs({0.0, 1.0}, 1.0);
    Prior bandit = testing::one(data(1, 2, 1, {1.0}, {1, 0}, {1.0, 1.0}), costs);
    BayesAdaptiveMdp m(bandit, 1);
    const std::size_t leaf = m.space().depth_begin(1);
    Policy next = utrpo_step(m, m.uniform_policy(), {1.0}, 0.5);
    // proj((-0.25, 0.25)) shifts both coordinates up by 0.5.
    CHECK(next.row(leaf)[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(next.row(leaf)[1] == doctest::Approx(0.75).epsilon(1e-15));
    const std::vector<double> pk{0.5, 0.5}, q{1.0, 0.0};
    const double alpha = 0.5, lambda = 1.0;
    auto objective = [&](const std::vector<double>& p) {
      double v = 0.0;
      for (std::size_t a = 0; a < 2; ++a)
        v += alpha * (q[a] + lambda * pk[a]) * p[a] +
             0.5 * (p[a] - pk[a]) * (p[a] - pk[a]);
      return v;
    };
    auto grid = oracle::grid_argmin2(objective, 1e-4);
    CHECK(std::abs(grid[0] - next.row(leaf)[0]) <= 2e-4);
  }
}

TEST_CASE("step rows stay normalized along a run") {
  Prior p = oracle::small_prior(3, 3, 2, 2, 2, 0, 8);
  BayesAdaptiveMdp m(p, 2);
  auto trace = utrpo_run(m, {0.5}, StepSchedule::harmonic(0.5), 50);
  for (const Policy& pi : trace.policies)
    for (std::size_t i = 0; i < m.size(); ++i) {
      double s = 0.0;
      for (double x : pi.row(i)) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
        s += x;
      }
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
}

TEST_CASE("run bookkeeping") {
  BayesAdaptiveMdp m(zero_cost_prior(), 2);
  auto trace = utrpo_run(m, {0.5}, StepSchedule::harmonic(0.5), 0);
  CHECK(trace.policies.size() == 1);
  CHECK(trace.alphas.empty());
  CHECK(StepSchedule::harmonic(2.0).alpha(0) == doctest::Approx(0.25));
  CHECK(StepSchedule::list({0.1, 0.2}).alpha(5) == 0.2);
}

TEST_CASE("zero-cost instance converges to uniform") {
  BayesAdaptiveMdp m(zero_cost_prior(), 2);
  Policy start(m.size(), 2);
  for (std::size_t i = 0; i < m.size(); ++i) start.row(i)[0] = 1.0;
  auto trace = utrpo_run(m, {0.5}, StepSchedule::harmonic(0.5), 500, start);
  const Policy& last = trace.policies.back();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (double x : last.row(i)) CHECK(std::abs(x - 0.5) <= 1e-3);
  const double exact = solve_exact(m, {0.5}).loss;
  auto rate = check_rate(m, trace, StepSchedule::harmonic(0.5), exact, {0.5});
  CHECK(rate.pass);
}

TEST_CASE("descent reaches the exact optimum") {
  Prior p = oracle::small_prior(3, 2, 2, 2, 2, 0, 15);
  BayesAdaptiveMdp m(p, 2);
  for (double lambda : {0.1, 1.0}) {
    auto sched = StepSchedule::harmonic(lambda);
    auto trace = utrpo_run(m, {lambda}, sched, 500);
    const Solution sol = solve_exact(m, {lambda});
    for (std::size_t k = 0; k + 1 < trace.losses.size(); ++k)
      CHECK(trace.losses[k + 1] <= trace.losses[k] + 1e-10);
    CHECK(trace.losses.back() - sol.loss <=
          std::max(1e-6, rate_bound(m, {lambda}, 500)));
    CHECK(check_rate(m, trace, sched, sol.loss, {lambda}).pass);
    auto fund = check_fundamental(m, trace, sol.policy, {lambda}, 100);
    CHECK(fund.pass);
    CHECK(fund.min_residual_short <= fund.min_residual);
  }
}

TEST_CASE("fundamental inequality with the iterate as reference") {
  Prior p = oracle::small_prior(2, 2, 2, 2, 2, 0, 19);
  BayesAdaptiveMdp m(p, 2);
  auto trace = utrpo_run(m, {1.0}, StepSchedule::harmonic(1.0), 1);
  auto rep = check_fundamental(m, trace, trace.policies[0], {1.0});
  CHECK(rep.pass);
  CHECK(rep.min_residual >= 0.0);
}

TEST_CASE("rate check refuses other schedules") {
  BayesAdaptiveMdp m(zero_cost_prior(), 2);
  auto sched = StepSchedule::constant(0.9);
  auto trace = utrpo_run(m, {1.0}, sched, 3);
  CHECK_THROWS_AS(check_rate(m, trace, sched, 0.0, {1.0}), Error);
}

TEST_CASE("quadratic growth") {
  Prior p = oracle::small_prior(3, 2, 2, 2, 2, 0, 23);
  BayesAdaptiveMdp m(p, 2);
  const Solution sol = solve_exact(m, {0.4});
  auto self = check_quadratic_growth(m, sol.policy, sol, {0.4});
  CHECK(self.lhs == 0.0);
  CHECK(std::abs(self.rhs) <= 1e-12);
  CHECK(self.pass);
  CHECK(check_quadratic_growth(m, m.uniform_policy(), sol, {0.4}).pass);
  for (std::uint64_t k = 0; k < 100; ++k)
    CHECK(check_quadratic_growth(m, oracle::random_policy(m, k), sol, {0.4}).pass);
}
