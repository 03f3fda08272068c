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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace brl {

/// Probability rows must sum to one within this tolerance.
inline constexpr double kProbTolerance = 1e-12;
/// Rows further than this from one are rejected instead of renormalized.
inline constexpr double kRenormalizeLimit = 1e-6;

/// The finite set of cost values, strictly increasing inside [0, c_max].
class CostSet {
 public:
  CostSet(std::vector<double> values, double c_max);

  std::size_t size() const noexcept { return values_.size(); }
  double value(std::size_t i) const { return values_.at(i); }
  double c_max() const noexcept { return c_max_; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool operator==(const CostSet&) const = default;

 private:
  std::vector<double> values_;
  double c_max_;
};

/// Unchecked MDP description, as read from disk or built by a generator.
///
/// Two forms are supported. In the deterministic-cost form `cost_index` and
/// `trans` are filled and `joint` is empty. In the joint form `joint` holds a
/// full distribution over (cost index, next state) for every (state, action)
/// and the other two tables are ignored.
struct MdpData {
  std::size_t n_states = 0;
  std::size_t n_actions = 0;
  std::size_t horizon = 1;
  std::vector<double> init;              // [s]
  std::vector<std::size_t> cost_index;   // [s * A + a]
  std::vector<double> trans;             // [(s * A + a) * S + s']
  std::vector<double> joint;             // [((s * A + a) * C + c) * S + s']

  bool is_joint() const noexcept { return !joint.empty(); }
};

/// Returns std::nullopt when every invariant holds, else a message naming the
/// first violated field.
std::optional<std::string> validate(const MdpData& mdp, const CostSet& costs);

/// An immutable tabular MDP. The joint kernel P(s', c | s, a) is always
/// materialized; for the deterministic-cost form it is
/// P(s' | s, a) * 1[c = C(s, a)].
class TabularMdp {
 public:
  /// Renormalizes rows whose sum is off by more than kProbTolerance and
  /// throws if any row is off by more than kRenormalizeLimit.
  TabularMdp(MdpData data, const CostSet& costs);

  std::size_t n_states() const noexcept { return data_.n_states; }
  std::size_t n_actions() const noexcept { return data_.n_actions; }
  std::size_t n_costs() const noexcept { return n_costs_; }
  std::size_t horizon() const noexcept { return data_.horizon; }
  std::span<const double> init() const noexcept { return data_.init; }
  bool is_joint() const noexcept { return data_.is_joint(); }

  /// Distribution over outcomes (c, s') laid out as c * S + s'.
  std::span<const double> joint_row(std::size_t s, std::size_t a) const;
  double joint(std::size_t s, std::size_t a, std::size_t c,
               std::size_t next) const;
  double trans(std::size_t s, std::size_t a, std::size_t next) const;
  double cost_prob(std::size_t s, std::size_t a, std::size_t c) const;
  double expected_cost(std::size_t s, std::size_t a,
                       const CostSet& costs) const;

  /// Only meaningful for the deterministic-cost form.
  std::optional<std::size_t> cost_index(std::size_t s, std::size_t a) const;

  const MdpData& data() const noexcept { return data_; }

 private:
  MdpData data_;
  std::size_t n_costs_;
  std::vector<double> joint_;
};

using MdpPtr = std::shared_ptr<const TabularMdp>;

/// A weighted finite collection of MDPs sharing (S, A, costs, init, H).
///
/// `labels` identify members across priors: a sample drawn from a prior keeps
/// the source index of each draw, so duplicates and unseen members can be
/// recognized downstream.
class Prior {
 public:
  Prior(std::vector<MdpPtr> members, std::vector<double> weights,
        CostSet costs, std::vector<std::size_t> labels = {});

  std::size_t size() const noexcept { return members_.size(); }
  const TabularMdp& member(std::size_t i) const { return *members_.at(i); }
  const MdpPtr& member_ptr(std::size_t i) const { return members_.at(i); }
  double weight(std::size_t i) const { return weights_.at(i); }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t label(std::size_t i) const { return labels_.at(i); }
  std::span<const std::size_t> labels() const noexcept { return labels_; }
  const CostSet& costs() const noexcept { return costs_; }

  std::size_t n_states() const noexcept { return members_.front()->n_states(); }
  std::size_t n_actions() const noexcept {
    return members_.front()->n_actions();
  }
  std::size_t n_costs() const noexcept { return costs_.size(); }
  std::size_t horizon() const noexcept { return members_.front()->horizon(); }
  std::span<const double> init() const noexcept {
    return members_.front()->init();
  }
  double c_max() const noexcept { return costs_.c_max(); }
  double p_min() const noexcept;

  /// The prior with member j removed and the remaining weights renormalized.
  Prior without(std::size_t j) const;
  /// A one-member prior holding member i.
  Prior single(std::size_t i) const;

 private:
  std::vector<MdpPtr> members_;
  std::vector<double> weights_;
  CostSet costs_;
  std::vector<std::size_t> labels_;
};

/// N i.i.d. draws (with replacement, by weight), each with weight 1/N.
Prior sample_empirical(const Prior& prior, std::size_t n, std::uint64_t seed);

/// Mixes every joint row with the uniform distribution over (c, s'):
/// P -> (1 - alpha) P + alpha / (|S| |C|). Returns a joint-form MDP.
TabularMdp smooth(const TabularMdp& mdp, double alpha, const CostSet& costs);
Prior smooth(const Prior& prior, double alpha);

/// sup over member pairs and (s, a, c, s') of the joint-kernel ratio, with
/// 0/0 = 1 and x/0 = +inf.
double q_ratio(const Prior& prior);

}  // namespace brl
