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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "brl/brl.h"
#include "brl/mirror_descent.hpp"
#include "brl/stability.hpp"
#include "oracles.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Criterion 1: lambda = 0 exact solve against exhaustive enumeration.
Outcome exact_vs_brute_force() {
  const auto t0 = Clock::now();
  std::size_t instances = 0, largest = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; instances < 60 && seed < 10000; ++seed) {
    const std::size_t members = 1 + seed % 3;
    const brl::Prior p = oracle::small_prior(2, 2, 2, 2, members, 1, seed);
    const brl::BayesAdaptiveMdp model(p, 2);
    if (model.size() > 20) continue;
    const auto bf = oracle::brute_force(p, 2);
    if (bf.decision_points != model.size()) return {false, "decision count mismatch"};
    worst = std::max(worst,
                     std::abs(brl::solve_exact(model, {0.0}).loss - bf.best_loss));
    largest = std::max(largest, model.size());
    ++instances;
  }
  const double secs = seconds_since(t0);
  return {instances >= 50 && worst <= 1e-9 && secs < 10.0,
          "instances=" + std::to_string(instances) +
              " max_nodes=" + std::to_string(largest) +
              " max_abs_diff=" + fmt("%.3g", worst) + " seconds=" + fmt("%.2f", secs)};
}

// Criterion 2: backward induction against a dense LU solve.
Outcome bellman_identity() {
  struct Shape {
    std::size_t states, costs, horizon, members;
  };
  const Shape shapes[] = {{2, 2, 3, 2}, {3, 2, 2, 3}, {3, 2, 3, 2}, {3, 2, 3, 3}};
  double worst = 0.0;
  std::size_t checks = 0, largest = 0;
  for (std::size_t i = 0; i < std::size(shapes); ++i) {
    const Shape& s = shapes[i];
    const brl::Prior p =
        oracle::small_prior(s.states, 2, s.costs, s.horizon, s.members, 0, 500 + i);
    const brl::BayesAdaptiveMdp model(p, s.horizon);
    if (model.size() > 2000) continue;
    largest = std::max(largest, model.size());
    for (std::uint64_t k = 0; k < 10; ++k) {
      const brl::Policy pi = oracle::random_policy(model, 1000 * i + k);
      const double lambda = 0.1 * static_cast<double>(k);
      const auto v = brl::evaluate(model, pi, {lambda});
      const auto d = oracle::dense_values(model, pi, lambda);
      for (std::size_t n = 0; n < model.size(); ++n)
        worst = std::max(worst, std::abs(v[n] - d[n]));
      ++checks;
    }
  }
  return {checks >= 10 && worst <= 1e-9,
          "policy_checks=" + std::to_string(checks) +
              " max_nodes=" + std::to_string(largest) +
              " max_abs_diff=" + fmt("%.3g", worst)};
}

brl::Prior instance(std::size_t i) {
  const std::size_t horizon = 2 + i % 2;
  const std::size_t states = i % 3 == 2 ? 3 : 2;
  return oracle::small_prior(states, 2, 2, horizon, 2 + i % 2, 0, 7000 + i);
}

// Criterion 3: convergence of the uniform trust-region iteration.
Outcome convergence() {
  const auto t0 = Clock::now();
  std::size_t runs = 0, failures = 0;
  double worst_gap_ratio = 0.0, worst_increase = -1.0;
  for (std::size_t i = 0; i < 20; ++i) {
    const brl::Prior p = instance(i);
    const brl::BayesAdaptiveMdp model(p, p.horizon());
    for (double lambda : {0.1, 1.0}) {
      const brl::RegConfig reg{lambda};
      const auto sched = brl::StepSchedule::harmonic(lambda);
      const auto trace = brl::utrpo_run(model, reg, sched, 1000);
      const double exact = brl::solve_exact(model, reg).loss;
      const double gap = trace.losses.back() - exact;
      const double tol = std::max(1e-6, brl::rate_bound(model, reg, 1000));
      double increase = -1.0;
      for (std::size_t k = 0; k + 1 < trace.losses.size(); ++k)
        increase = std::max(increase, trace.losses[k + 1] - trace.losses[k]);
      const auto rate = brl::check_rate(model, trace, sched, exact, reg);
      const bool ok = gap <= tol && increase <= 1e-10 && rate.pass;
      failures += ok ? 0 : 1;
      worst_gap_ratio = std::max(worst_gap_ratio, gap / tol);
      worst_increase = std::max(worst_increase, increase);
      ++runs;
    }
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && runs >= 20 && secs < 120.0,
          "runs=" + std::to_string(runs) + " failures=" + std::to_string(failures) +
              " max_gap_over_tol=" + fmt("%.3g", worst_gap_ratio) +
              " max_step_increase=" + fmt("%.3g", worst_increase) +
              " seconds=" + fmt("%.2f", secs)};
}

// Criterion 4: three-point inequality with the 1 / (1 - alpha lambda) step term.
Outcome fundamental_inequality() {
  double worst = INFINITY;
  std::size_t instances = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    const brl::Prior p = instance(i);
    const brl::BayesAdaptiveMdp model(p, p.horizon());
    const double lambda = i % 2 ? 1.0 : 0.1;
    const brl::RegConfig reg{lambda};
    const auto trace = brl::utrpo_run(
        model, reg, brl::StepSchedule::harmonic(lambda), 200);
    std::vector<brl::Policy> refs{brl::solve_exact(model, reg).policy};
    for (std::uint64_t r = 0; r < 5; ++r)
      refs.push_back(oracle::random_policy(model, 31 * i + r));
    for (const auto& ref : refs)
      worst = std::min(worst,
                       brl::check_fundamental(model, trace, ref, reg, 200).min_residual);
    ++instances;
  }
  return {worst >= -1e-8, "instances=" + std::to_string(instances) +
                              " references=6 min_residual=" + fmt("%.3g", worst)};
}

// Criterion 5: quadratic growth around the regularized optimum.
Outcome quadratic_growth() {
  std::size_t cells = 0, failures = 0;
  double worst = INFINITY;
  for (std::size_t i = 0; i < 20; ++i) {
    const brl::Prior p = instance(i);
    const brl::BayesAdaptiveMdp model(p, p.horizon());
    for (double lambda : {0.1, 1.0}) {
      const brl::RegConfig reg{lambda};
      const auto opt = brl::solve_exact(model, reg);
      for (std::uint64_t d = 0; d < 6; ++d) {
        const brl::Policy pi0 =
            d == 0 ? model.uniform_policy() : oracle::random_policy(model, 97 * i + d);
        const auto rep = brl::check_quadratic_growth(model, pi0, opt, reg);
        // Independent right-hand side from per-member trajectory recursion.
        double rhs = 0.0;
        for (std::size_t m = 0; m < p.size(); ++m)
          rhs += p.weight(m) * (oracle::trajectory_loss(model, m, pi0, lambda) -
                                oracle::trajectory_loss(model, m, opt.policy, lambda));
        const bool ok = rep.lhs <= rhs + 1e-9 && std::abs(rhs - rep.rhs) <= 1e-9;
        failures += ok ? 0 : 1;
        worst = std::min(worst, rhs - rep.lhs);
        ++cells;
      }
    }
  }
  return {failures == 0 && cells >= 200,
          "cells=" + std::to_string(cells) + " failures=" + std::to_string(failures) +
              " min_margin=" + fmt("%.3g", worst)};
}

struct SandwichTotals {
  std::size_t cells = 0, failures = 0;
  double lower_margin = INFINITY, upper_margin = INFINITY, oracle_diff = 0.0;
  double gap_margin = INFINITY;
};

// Runs every (sample, lambda, j) cell; optionally also checks the per-member
// gap bound kappa / (lambda N) with empirically estimated D.
void sandwich_cells(const brl::Prior& truth, std::size_t n, std::uint64_t seed,
                    bool check_gap_bound, SandwichTotals& tot) {
  const brl::Prior sample = brl::sample_empirical(truth, n, seed);
  const brl::BayesAdaptiveMdp model(sample, truth.horizon());
  for (double lambda : {0.1, 1.0, 10.0}) {
    const brl::RegConfig reg{lambda};
    const auto opt = brl::solve_exact(model, reg);
    std::vector<brl::Policy> policies{opt.policy, model.uniform_policy()};
    std::vector<brl::StabilityReport> reps;
    for (std::size_t j = 0; j < n; ++j) {
      policies.push_back(brl::leave_one_out(model, reg, j));
      reps.push_back(brl::stability_check(model, opt, reg, j, &policies.back()));
    }
    double kappa_bound = INFINITY;
    if (check_gap_bound) {
      brl::BoundInputs in;
      in.d_const = brl::estimate_D(model, policies).d;
      in.c_max = sample.c_max();
      in.horizon = static_cast<double>(truth.horizon());
      in.n_actions = static_cast<double>(sample.n_actions());
      in.lambda = lambda;
      in.n_samples = static_cast<double>(n);
      kappa_bound = brl::kappa_stability_bound(in);
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto& r = reps[j];
      const brl::Policy& loo = policies[2 + j];
      double delta = 0.0, max_gap = -INFINITY;
      for (std::size_t m = 0; m < n; ++m) {
        const double gap = oracle::trajectory_loss(model, m, loo, lambda) -
                           oracle::trajectory_loss(model, m, opt.policy, lambda);
        delta += sample.weight(m) * gap;
        max_gap = std::max(max_gap, gap);
      }
      tot.oracle_diff = std::max({tot.oracle_diff, std::abs(delta - r.delta),
                                  std::abs(max_gap - r.max_gap())});
      bool ok = r.lower_qg <= delta + 1e-9 && delta >= -1e-10 &&
                delta <= r.upper_lip + 1e-9;
      tot.lower_margin = std::min(tot.lower_margin, delta - r.lower_qg);
      tot.upper_margin = std::min(tot.upper_margin, r.upper_lip - delta);
      if (check_gap_bound) {
        ok = max_gap <= kappa_bound + 1e-9;
        tot.gap_margin = std::min(tot.gap_margin, kappa_bound - max_gap);
      }
      tot.failures += ok ? 0 : 1;
      ++tot.cells;
    }
  }
}

// Criterion 6: lower_qg <= Delta <= upper_lip.
Outcome stability_sandwich() {
  SandwichTotals tot;
  for (std::size_t n = 2; n <= 5; ++n)
    for (std::uint64_t s = 0; s < 5; ++s) {
      const brl::Prior truth = oracle::small_prior(2, 2, 2, 2, 6, 0, 8000 + 10 * n + s);
      sandwich_cells(truth, n, s, false, tot);
    }
  return {tot.failures == 0 && tot.cells >= 200 && tot.oracle_diff <= 1e-9,
          "cells=" + std::to_string(tot.cells) +
              " failures=" + std::to_string(tot.failures) +
              " min_lower_margin=" + fmt("%.3g", tot.lower_margin) +
              " min_upper_margin=" + fmt("%.3g", tot.upper_margin) +
              " oracle_diff=" + fmt("%.3g", tot.oracle_diff)};
}

// Criterion 7: per-member gap bound on smoothed priors.
Outcome stability_bound() {
  SandwichTotals tot;
  for (std::size_t n = 2; n <= 5; ++n)
    for (std::uint64_t s = 0; s < 3; ++s) {
      const brl::Prior truth = brl::smooth(
          oracle::small_prior(2, 2, 2, 2, 6, 0, 9000 + 10 * n + s), 0.3);
      sandwich_cells(truth, n, s, true, tot);
    }
  return {tot.failures == 0 && tot.cells >= 100,
          "cells=" + std::to_string(tot.cells) +
              " failures=" + std::to_string(tot.failures) +
              " min_bound_margin=" + fmt("%.3g", tot.gap_margin)};
}

// Criterion 8: visitation masses against simulated frequencies.
Outcome visitation_monte_carlo() {
  const std::size_t episodes = 1000000;
  std::size_t nodes = 0, outside = 0;
  double worst = 0.0, sum_z2 = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const brl::Prior p = oracle::small_prior(2, 2, 2, 2, 2, 0, 600 + i);
    const brl::BayesAdaptiveMdp model(p, 2);
    const brl::Policy pi = oracle::random_policy(model, 50 + i);
    const auto vis = brl::visitation(model, pi);
    const auto sim = oracle::simulate(model, pi, 0.0, episodes, 70 + i);
    for (std::size_t n = 0; n < model.size(); ++n) {
      const double sigma =
          std::sqrt(vis[n] * (1.0 - vis[n]) / static_cast<double>(episodes));
      const double dev = std::abs(sim.frequency[n] - vis[n]);
      const double z = sigma > 0.0 ? dev / sigma : (dev > 1e-12 ? INFINITY : 0.0);
      worst = std::max(worst, z);
      if (sigma > 0.0) sum_z2 += z * z;
      outside += z > 3.0 ? 1 : 0;
      ++nodes;
    }
  }
  return {outside == 0, "instances=5 nodes=" + std::to_string(nodes) +
                            " outside_3sigma=" + std::to_string(outside) +
                            " max_z=" + fmt("%.3f", worst) +
                            " mean_z2=" + fmt("%.3f", sum_z2 / nodes)};
}

double column(const brl_table* t, std::size_t row, const std::string& name) {
  for (std::size_t c = 0; c < brl_table_cols(t); ++c)
    if (name == brl_table_column(t, c)) {
      double v = NAN;
      brl_table_get(t, row, c, &v);
      return v;
    }
  return NAN;
}

// Criterion 9: lower-bound family demonstration.
Outcome lower_bound() {
  const auto t0 = Clock::now();
  brl_lowerbound_spec spec{4, 0.1, 16, 100, 2024, 1.0, 0.1, 0, 0};
  brl_table* t = nullptr;
  int all_pass = 0;
  if (brl_run_lowerbound(&spec, &t, &all_pass) != BRL_OK)
    return {false, std::string("error: ") + brl_last_error()};
  std::size_t passed = 0;
  double mean_regret = 0.0;
  for (std::size_t r = 0; r < brl_table_rows(t); ++r) {
    passed += column(t, r, "regret") > column(t, r, "bound_expression") ? 1 : 0;
    mean_regret += column(t, r, "regret") / 100.0;
  }
  const double naive = column(t, 0, "naive_bound");
  const double finite_gen = column(t, 0, "finite_gen_bound");
  const double ct = column(t, 0, "c_max_t");
  brl_table_free(t);
  const double secs = seconds_since(t0);
  const bool ok = passed >= 95 && std::isfinite(finite_gen) && naive > ct && secs < 300.0;
  return {ok && all_pass == 1,
          "runs_above_expression=" + std::to_string(passed) + "/100" +
              " mean_regret=" + fmt("%.4f", mean_regret) +
              " naive=" + fmt("%.4g", naive) + " c_max_T=" + fmt("%.4g", ct) +
              " finite_gen=" + fmt("%.4g", finite_gen) + " seconds=" + fmt("%.2f", secs)};
}

// Criterion 10: bound calculators against hand-derived values.
Outcome bound_calculators() {
  struct Case {
    brl_bound_spec spec;
    const char* bound;
    double want;
  };
  // naive: two deterministic policies (one node, two actions).
  const Case cases[] = {
      {{1.0, 1.0, 1.0, 2.0, 1.0, 8.0, 0.5, 1.0, 0.0, 1.0}, "naive", 0.72101},
      {{1.0, 1.0, 1.0, 2.0, 1.0, 100.0, 0.1, 1.0, 0.01, 1.0},
       "bousquet_uniform", 0.55651},
      {{1.0, 1.0, 2.0, 2.0, 1.0, 100.0, 0.25, 0.25, 0.0, 1.0}, "finite_gen", 11.8435},
      {{1.0, 1.0, 1.0, 2.0, 1.0, 50.0, 0.2, 1.0, 0.0, 1.0}, "bousquet_pointwise",
       std::sqrt(1.0 / (2.0 * 50.0 * 0.2))},
  };
  double worst = 0.0;
  for (const Case& c : cases) {
    brl_table* t = nullptr;
    if (brl_run_bounds(&c.spec, &t) != BRL_OK) return {false, brl_last_error()};
    // Rows are (name, value); the name column is text.
    double got = NAN;
    const char* order[] = {"naive", "bousquet_pointwise", "bousquet_uniform",
                           "kappa", "kappa_gen", "finite_gen"};
    for (std::size_t r = 0; r < 6 && r < brl_table_rows(t); ++r)
      if (std::string(order[r]) == c.bound) brl_table_get(t, r, 1, &got);
    brl_table_free(t);
    worst = std::max(worst, std::abs(got - c.want) / c.want);
  }
  return {worst <= 1e-4, "cases=4 max_rel_err=" + fmt("%.3g", worst)};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_suite(const std::filesystem::path& dir, std::size_t workers) {
  std::filesystem::create_directories(dir);
  auto path = [&](const char* name) { return (dir / name).string(); };
  const double costs[] = {0.0, 0.5, 1.0};
  brl_random_spec rs{3, 2, costs, 3, 1.0, 2, 4, 0, 1.0};
  brl_prior* prior = nullptr;
  if (brl_prior_random(&rs, 42, &prior) != BRL_OK) return false;
  bool ok = brl_prior_save(prior, path("prior.txt").c_str()) == BRL_OK;
  brl_model* model = nullptr;
  brl_policy* policy = nullptr;
  ok = ok && brl_model_build(prior, 2, 0, &model) == BRL_OK;
  ok = ok && brl_model_solve(model, 0.5, &policy, nullptr) == BRL_OK;
  ok = ok && brl_model_write_policy(model, policy, 0.5, path("policy.csv").c_str()) ==
                 BRL_OK;
  brl_table *t = nullptr, *u = nullptr;
  int pass = 0;
  const size_t ns[] = {2, 3, 4};
  const double lambdas[] = {0.0, 0.3, 1.0};
  brl_sweep_spec sweep{ns, 3, lambdas, 3, 2, 2, 0.1, 42, workers, 0, 1};
  if (ok && brl_run_sweep(prior, &sweep, &t, &pass) == BRL_OK) {
    ok = brl_table_write(t, path("sweep.csv").c_str(), 0) == BRL_OK;
    brl_table_free(t);
  } else {
    ok = false;
  }
  brl_prior* sample = nullptr;
  ok = ok && brl_prior_sample(prior, 4, 42, &sample) == BRL_OK;
  if (ok && brl_run_stability(sample, 2, lambdas + 1, 2, 0, workers, &t, &pass) ==
                BRL_OK) {
    ok = brl_table_write(t, path("stability.csv").c_str(), 0) == BRL_OK;
    brl_table_free(t);
  } else {
    ok = false;
  }
  brl_convergence_spec conv{2, 0.5, 300, 100, 5, 20, 42, 0};
  if (ok && brl_run_convergence(prior, &conv, &t, &u, &pass) == BRL_OK) {
    ok = brl_table_write(t, path("trace.csv").c_str(), 0) == BRL_OK &&
         brl_table_write(u, path("report.csv").c_str(), 0) == BRL_OK;
    brl_table_free(t);
    brl_table_free(u);
  } else {
    ok = false;
  }
  brl_lowerbound_spec lb{3, 0.1, 8, 20, 42, 1.0, 0.1, 0, workers};
  if (ok && brl_run_lowerbound(&lb, &t, &pass) == BRL_OK) {
    ok = brl_table_write(t, path("lowerbound.csv").c_str(), 0) == BRL_OK;
    brl_table_free(t);
  } else {
    ok = false;
  }
  brl_policy_free(policy);
  brl_model_free(model);
  brl_prior_free(sample);
  brl_prior_free(prior);
  return ok;
}

// Criterion 11: repeated runs with one seed give identical bytes.
Outcome determinism() {
  const std::filesystem::path a = "acceptance_run_a", b = "acceptance_run_b";
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
  if (!write_suite(a, 1) || !write_suite(b, 4))
    return {false, std::string("suite error: ") + brl_last_error()};
  std::size_t files = 0, differ = 0;
  for (const auto& entry : std::filesystem::directory_iterator(a)) {
    const auto name = entry.path().filename();
    ++files;
    differ += slurp(a / name) == slurp(b / name) ? 0 : 1;
  }
  return {files == 7 && differ == 0,
          "files=" + std::to_string(files) + " differing=" + std::to_string(differ) +
              " workers=1,4"};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, exact_vs_brute_force}, {2, bellman_identity},
      {3, convergence},          {4, fundamental_inequality},
      {5, quadratic_growth},     {6, stability_sandwich},
      {7, stability_bound},      {8, visitation_monte_carlo},
      {9, lower_bound},          {10, bound_calculators},
      {11, determinism},
  };
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s %s\n", id, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
