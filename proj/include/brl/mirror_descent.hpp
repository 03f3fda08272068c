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
#include <iosfwd>
#include <optional>
#include <vector>

#include "brl/bayes_dp.hpp"
#include "brl/simplex.hpp"

namespace brl {

class StepSchedule {
 public:
  enum class Kind { kHarmonic, kConstant, kList };

  /// alpha_k = 1 / (lambda (k + 2)).
  static StepSchedule harmonic(double lambda);
  static StepSchedule constant(double alpha);
  /// Steps past the end of the list repeat its last entry.
  static StepSchedule list(std::vector<double> alphas);

  Kind kind() const noexcept { return kind_; }
  double alpha(std::size_t k) const;

 private:
  Kind kind_ = Kind::kHarmonic;
  double lambda_ = 1.0;
  double constant_ = 0.0;
  std::vector<double> list_;
};

/// One uniform trust-region step at every node:
/// pi_{k+1}(h) = proj((1 - alpha lambda) pi_k(h) - alpha q_k(h)).
/// `values` must be V^{pi_k}. Requires 0 < alpha lambda < 1.
Policy utrpo_step(const BayesAdaptiveMdp& model, const Policy& pi_k,
                  std::span<const double> values, RegConfig reg, double alpha);
Policy utrpo_step(const BayesAdaptiveMdp& model, const Policy& pi_k,
                  RegConfig reg, double alpha);

struct IterateTrace {
  std::vector<Policy> policies;     // pi_0 .. pi_K
  std::vector<ValueVector> values;  // V^{pi_k}
  std::vector<double> losses;
  std::vector<double> alphas;       // alpha_0 .. alpha_{K-1}
};

IterateTrace utrpo_run(const BayesAdaptiveMdp& model, RegConfig reg,
                       const StepSchedule& schedule, std::size_t iterations,
                       std::optional<Policy> pi_0 = std::nullopt);

/// L = C_max T |A|.
double lipschitz_constant(const BayesAdaptiveMdp& model);

struct FundamentalReport {
  double min_residual = 0.0;         // step term alpha^2 L^2 / (2 (1 - alpha lambda))
  double min_residual_short = 0.0;   // step term alpha^2 L^2 / 2
  std::size_t worst_k = 0;
  std::size_t worst_node = 0;
  std::vector<double> per_k;         // min residual over nodes, long form
  double lipschitz = 0.0;
  bool pass = false;
};

/// Residual RHS - LHS of the per-node three-point inequality for every
/// k < min(k_max, K) against `reference`. PASS iff min residual >= -1e-8.
FundamentalReport check_fundamental(const BayesAdaptiveMdp& model,
                                    const IterateTrace& trace,
                                    const Policy& reference, RegConfig reg,
                                    std::size_t k_max = SIZE_MAX);

struct RateReport {
  double max_ratio = 0.0;   // max_{k >= 2} (loss_k - exact) lambda k / ln k
  double bound = 0.0;       // lambda^2 B + C_max^2 T^3
  double b_const = 0.0;     // B = (T + 1) / 2
  std::vector<double> ratios;  // per k, NaN for k < 2
  bool pass = false;
};

/// Requires a trace produced with the harmonic schedule.
RateReport check_rate(const BayesAdaptiveMdp& model, const IterateTrace& trace,
                      const StepSchedule& schedule, double exact_loss,
                      RegConfig reg);

/// rate bound (lambda^2 B + C_max^2 T^3) ln k / (lambda k).
double rate_bound(const BayesAdaptiveMdp& model, RegConfig reg, std::size_t k);

struct QuadraticGrowthReport {
  double lhs = 0.0;  // (lambda / 2) sum_h vis^{pi_0}(h) ||pi_0(h) - pi*(h)||^2
  double rhs = 0.0;  // loss(pi_0) - loss(pi*)
  bool pass = false;
};

QuadraticGrowthReport check_quadratic_growth(const BayesAdaptiveMdp& model,
                                             const Policy& pi_0,
                                             const Solution& optimum,
                                             RegConfig reg);
QuadraticGrowthReport check_quadratic_growth(const BayesAdaptiveMdp& model,
                                             const Policy& pi_0, RegConfig reg);

/// Columns k,alpha,loss,min_fundamental_residual,rate_ratio.
void write_trace_csv(std::ostream& out, const IterateTrace& trace,
                     const FundamentalReport* fundamental,
                     const RateReport* rate);

}  // namespace brl
