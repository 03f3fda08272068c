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

#include "brl/mirror_descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "brl/error.hpp"
#include "brl/prior_io.hpp"

namespace brl {
namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double sq_norm(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

}  // namespace

StepSchedule StepSchedule::harmonic(double lambda) {
  require(lambda > 0.0, "harmonic schedule needs lambda > 0");
  StepSchedule s;
  s.kind_ = Kind::kHarmonic;
  s.lambda_ = lambda;
  return s;
}

StepSchedule StepSchedule::constant(double alpha) {
  require(alpha > 0.0, "step size must be positive");
  StepSchedule s;
  s.kind_ = Kind::kConstant;
  s.constant_ = alpha;
  return s;
}

StepSchedule StepSchedule::list(std::vector<double> alphas) {
  require(!alphas.empty(), "step list must be nonempty");
  for (double a : alphas) require(a > 0.0, "step size must be positive");
  StepSchedule s;
  s.kind_ = Kind::kList;
  s.list_ = std::move(alphas);
  return s;
}

double StepSchedule::alpha(std::size_t k) const {
  switch (kind_) {
    case Kind::kHarmonic:
      return 1.0 / (lambda_ * static_cast<double>(k + 2));
    case Kind::kConstant:
      return constant_;
    case Kind::kList:
      return list_[std::min(k, list_.size() - 1)];
  }
  return 0.0;
}

Policy utrpo_step(const BayesAdaptiveMdp& model, const Policy& pi_k,
                  std::span<const double> values, RegConfig reg,
                  double alpha) {
  const double al = alpha * reg.lambda;
  require(alpha > 0.0 && al > 0.0 && al < 1.0,
          "step requires 0 < alpha * lambda < 1");
  const std::size_t A = model.n_actions();
  Policy next(model.size(), A);
  std::vector<double> q(A), target(A);
  for (std::size_t n = 0; n < model.size(); ++n) {
    action_values(model, values, n, q);
    auto pi = pi_k.row(n);
    for (std::size_t a = 0; a < A; ++a)
      target[a] = (1.0 - al) * pi[a] - alpha * q[a];
    project_simplex(target, next.row(n));
  }
  return next;
}

Policy utrpo_step(const BayesAdaptiveMdp& model, const Policy& pi_k,
                  RegConfig reg, double alpha) {
  return utrpo_step(model, pi_k, evaluate(model, pi_k, reg), reg, alpha);
}

IterateTrace utrpo_run(const BayesAdaptiveMdp& model, RegConfig reg,
                       const StepSchedule& schedule, std::size_t iterations,
                       std::optional<Policy> pi_0) {
  IterateTrace tr;
  Policy pi = pi_0 ? std::move(*pi_0) : model.uniform_policy();
  require(pi.size() == model.size() && pi.n_actions() == model.n_actions(),
          "initial policy does not match the history space");
  require(pi.is_valid(), "initial policy rows must lie in the simplex");
  ValueVector v = evaluate(model, pi, reg);
  for (std::size_t k = 0;; ++k) {
    tr.losses.push_back(loss(model, v));
    tr.policies.push_back(pi);
    tr.values.push_back(v);
    if (k == iterations) break;
    const double alpha = schedule.alpha(k);
    tr.alphas.push_back(alpha);
    pi = utrpo_step(model, pi, v, reg, alpha);
    v = evaluate(model, pi, reg);
  }
  return tr;
}

double lipschitz_constant(const BayesAdaptiveMdp& model) {
  return model.c_max() * static_cast<double>(model.horizon()) *
         static_cast<double>(model.n_actions());
}

FundamentalReport check_fundamental(const BayesAdaptiveMdp& model,
                                    const IterateTrace& trace,
                                    const Policy& reference, RegConfig reg,
                                    std::size_t k_max) {
  require(reference.size() == model.size(),
          "reference policy does not match the history space");
  FundamentalReport rep;
  rep.lipschitz = lipschitz_constant(model);
  rep.min_residual = std::numeric_limits<double>::infinity();
  rep.min_residual_short = rep.min_residual;
  const double L2 = rep.lipschitz * rep.lipschitz;
  const std::size_t A = model.n_actions();
  const std::size_t K = std::min(k_max, trace.alphas.size());
  std::vector<double> q(A);
  for (std::size_t k = 0; k < K; ++k) {
    const double alpha = trace.alphas[k];
    const double al = alpha * reg.lambda;
    const Policy& pk = trace.policies[k];
    const Policy& pk1 = trace.policies[k + 1];
    const ValueVector& vk = trace.values[k];
    double kmin = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < model.size(); ++n) {
      action_values(model, vk, n, q);
      auto pi = reference.row(n);
      double tv = reg.lambda * regularizer(pi);
      for (std::size_t a = 0; a < A; ++a) tv += pi[a] * q[a];
      const double lhs = alpha * (vk[n] - tv);
      const double common =
          0.5 * (1.0 - al) * sq_dist(pi, pk.row(n)) -
          0.5 * sq_dist(pi, pk1.row(n)) +
          0.5 * al * (sq_norm(pk.row(n)) - sq_norm(pk1.row(n)));
      const double r_long = common + alpha * alpha * L2 / (2.0 * (1.0 - al)) - lhs;
      const double r_short = common + alpha * alpha * L2 / 2.0 - lhs;
      if (r_long < rep.min_residual) {
        rep.min_residual = r_long;
        rep.worst_k = k;
        rep.worst_node = n;
      }
      rep.min_residual_short = std::min(rep.min_residual_short, r_short);
      kmin = std::min(kmin, r_long);
    }
    rep.per_k.push_back(kmin);
  }
  if (K == 0) rep.min_residual = rep.min_residual_short = 0.0;
  rep.pass = rep.min_residual >= -1e-8;
  return rep;
}

double rate_bound(const BayesAdaptiveMdp& model, RegConfig reg,
                  std::size_t k) {
  const double T = static_cast<double>(model.horizon());
  const double B = (T + 1.0) / 2.0;
  const double c = model.c_max();
  const double kk = static_cast<double>(k);
  return (reg.lambda * reg.lambda * B + c * c * T * T * T) * std::log(kk) /
         (reg.lambda * kk);
}

RateReport check_rate(const BayesAdaptiveMdp& model, const IterateTrace& trace,
                      const StepSchedule& schedule, double exact_loss,
                      RegConfig reg) {
  require(schedule.kind() == StepSchedule::Kind::kHarmonic,
          "rate check requires the harmonic step schedule");
  require(reg.lambda > 0.0, "rate check requires lambda > 0");
  RateReport rep;
  const double T = static_cast<double>(model.horizon());
  const double c = model.c_max();
  rep.b_const = (T + 1.0) / 2.0;
  rep.bound = reg.lambda * reg.lambda * rep.b_const + c * c * T * T * T;
  rep.ratios.assign(trace.losses.size(), std::nan(""));
  for (std::size_t k = 2; k < trace.losses.size(); ++k) {
    const double kk = static_cast<double>(k);
    rep.ratios[k] =
        (trace.losses[k] - exact_loss) * reg.lambda * kk / std::log(kk);
    rep.max_ratio = std::max(rep.max_ratio, rep.ratios[k]);
  }
  rep.pass = rep.max_ratio <= rep.bound;
  return rep;
}

QuadraticGrowthReport check_quadratic_growth(const BayesAdaptiveMdp& model,
                                             const Policy& pi_0,
                                             const Solution& optimum,
                                             RegConfig reg) {
  require(reg.lambda > 0.0, "quadratic growth requires lambda > 0");
  QuadraticGrowthReport rep;
  const auto vis = visitation(model, pi_0);
  double weighted = 0.0;
  for (std::size_t n = 0; n < model.size(); ++n)
    if (vis[n] != 0.0)
      weighted += vis[n] * sq_dist(pi_0.row(n), optimum.policy.row(n));
  rep.lhs = 0.5 * reg.lambda * weighted;
  rep.rhs = loss(model, pi_0, reg) - optimum.loss;
  rep.pass = rep.lhs <= rep.rhs + 1e-9;
  return rep;
}

QuadraticGrowthReport check_quadratic_growth(const BayesAdaptiveMdp& model,
                                             const Policy& pi_0,
                                             RegConfig reg) {
  return check_quadratic_growth(model, pi_0, solve_exact(model, reg), reg);
}

void write_trace_csv(std::ostream& out, const IterateTrace& trace,
                     const FundamentalReport* fundamental,
                     const RateReport* rate) {
  const double nan = std::nan("");
  out << "k,alpha,loss,min_fundamental_residual,rate_ratio\n";
  for (std::size_t k = 0; k < trace.losses.size(); ++k) {
    const double alpha = k < trace.alphas.size() ? trace.alphas[k] : nan;
    const double fr = fundamental && k < fundamental->per_k.size()
                          ? fundamental->per_k[k]
                          : nan;
    const double rr = rate && k < rate->ratios.size() ? rate->ratios[k] : nan;
    out << k << ',' << format_real(alpha) << ',' << format_real(trace.losses[k])
        << ',' << format_real(fr) << ',' << format_real(rr) << '\n';
  }
}

}  // namespace brl
