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

#include "brl/envgen.hpp"
#include "brl/error.hpp"
#include "brl/history.hpp"
#include "brl/stability.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace brl;

namespace {

LowerBoundSpec spec(std::size_t T, double eps_prime) {
  LowerBoundSpec s;
  s.horizon = T;
  s.eps_prime = eps_prime;
  s.f.assign(std::size_t{1} << T, 0);
  for (std::size_t x = 0; x < s.f.size(); ++x) s.f[x] = x % 3 == 0;
  return s;
}

}  // namespace

TEST_CASE("smallest lower-bound family") {
  Prior p = lower_bound_family(spec(1, 0.1));
  CHECK(p.size() == 2);
  CHECK(p.n_states() == 3);
  BayesAdaptiveMdp m(p, 1);
  CHECK(m.space().depth_end(0) - m.space().depth_begin(0) == 1);
}

TEST_CASE("identifier trajectories") {
  const auto s = spec(3, 0.5);
  Prior p = lower_bound_family(s);
  REQUIRE(p.size() == 8);
  const double eps = 0.5 / 8;
  for (std::size_t x = 0; x < 8; ++x) {
    History h;
    std::size_t prev = 0;
    for (std::size_t t = 1; t <= 3; ++t) {
      h.steps.push_back({prev, 0, 0});
      prev = layer_state(t, identifier_bit(x, t, 3));
    }
    h.final_state = prev;
    CHECK(likelihood(h, p.member(x), 3) ==
          doctest::Approx(std::pow(1 - eps, 3)).epsilon(1e-14));
  }
  BayesAdaptiveMdp m(p, 3);
  CHECK(solve_exact(m, {0.0}).loss <= 0.5);
}

TEST_CASE("lower-bound experiment") {
  auto all = lower_bound_experiment(3, 0.1, 400, 1);
  CHECK(all.unseen == 0);
  CHECK(all.regret <= 0.1);

  auto r = lower_bound_experiment(4, 0.1, 16, 3);
  CHECK(r.unseen_fraction == doctest::Approx(r.unseen / 16.0));
  CHECK(r.regret > 0.3 * r.unseen_fraction - 0.1);
  auto again = lower_bound_experiment(4, 0.1, 16, 3);
  CHECK(again.regret == r.regret);
  CHECK(again.f == r.f);
}

TEST_CASE("restricted difference family") {
  Prior base = oracle::small_prior(2, 2, 2, 2, 1, 0, 3);
  Prior one = restricted_difference_family(base.member(0), base.costs(), 1, 1, 5);
  CHECK(one.size() == 1);
  BayesAdaptiveMdp m1(one, 2);
  CHECK(estimate_D(m1, {m1.uniform_policy()}).d == 1.0);

  Prior closed = restricted_difference_family(base.member(0), base.costs(), 0, 3, 5);
  BayesAdaptiveMdp m0(closed, 3);
  for (std::size_t i = 0; i < m0.size(); ++i)
    for (std::size_t k = 0; k < 3; ++k)
      CHECK(m0.posterior().row(i)[k] == doctest::Approx(1.0 / 3).epsilon(1e-14));

  Prior two = restricted_difference_family(base.member(0), base.costs(), 1, 2, 5);
  BayesAdaptiveMdp m2(two, 2);
  auto d = estimate_D(m2, {m2.uniform_policy()});
  CHECK(d.d >= 1.0);
  CHECK(d.d <= d.cap * (1 + 1e-12));
}

TEST_CASE("random prior generator") {
  RandomPriorShape shape;
  shape.n_states = 4;
  shape.members = 2;
  Prior flat = random_prior(shape, 1e6, 1);
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t n = 0; n < 4; ++n)
        CHECK(std::abs(flat.member(0).trans(s, a, n) - 0.25) < 0.01);

  shape.members = 1;
  CHECK(random_prior(shape, 1.0, 2).size() == 1);

  shape.members = 3;
  shape.support = 2;
  Prior a = random_prior(shape, 1.0, 9), b = random_prior(shape, 1.0, 9);
  for (std::size_t m = 0; m < 3; ++m)
    for (std::size_t s = 0; s < 4; ++s)
      for (std::size_t act = 0; act < 2; ++act) {
        int nonzero = 0;
        for (std::size_t n = 0; n < 4; ++n) {
          CHECK(a.member(m).trans(s, act, n) == b.member(m).trans(s, act, n));
          nonzero += a.member(m).trans(s, act, n) > 0.0;
        }
        CHECK(nonzero <= 2);
      }
  CHECK_THROWS_AS(random_prior(shape, 0.0, 1), Error);
}
