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

#include "brl/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "brl/error.hpp"
#include "brl/rng.hpp"

namespace brl {
namespace {

double row_sum(std::span<const double> row) {
  double s = 0.0;
  for (double p : row) s += p;
  return s;
}

std::optional<std::string> check_row(std::span<const double> row,
                                     const std::string& name, double tol) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!(row[i] >= 0.0) || !std::isfinite(row[i])) {
      std::ostringstream os;
      os << name << " has invalid entry " << row[i] << " at " << i;
      return os.str();
    }
  }
  const double s = row_sum(row);
  if (std::abs(s - 1.0) > tol) {
    std::ostringstream os;
    os << name << " sums to " << s;
    return os.str();
  }
  return std::nullopt;
}

std::string sa_name(const char* table, std::size_t s, std::size_t a) {
  std::ostringstream os;
  os << table << "[" << s << "][" << a << "]";
  return os.str();
}

std::optional<std::string> validate_with(const MdpData& m,
                                         const CostSet& costs, double tol) {
  const std::size_t S = m.n_states, A = m.n_actions, C = costs.size();
  if (S == 0) return "n_states must be positive";
  if (A == 0) return "n_actions must be positive";
  if (m.horizon < 1) return "horizon must be at least 1";
  if (m.init.size() != S) return "init has wrong length";
  if (auto v = check_row(m.init, "init", tol)) return v;
  if (m.is_joint()) {
    if (m.joint.size() != S * A * C * S) return "joint has wrong size";
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t a = 0; a < A; ++a) {
        std::span<const double> row(m.joint.data() + (s * A + a) * C * S,
                                    C * S);
        if (auto v = check_row(row, sa_name("joint", s, a), tol)) return v;
      }
    return std::nullopt;
  }
  if (m.cost_index.size() != S * A) return "cost_index has wrong size";
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t a = 0; a < A; ++a)
      if (m.cost_index[s * A + a] >= C)
        return sa_name("cost_index", s, a) + " out of range";
  if (m.trans.size() != S * A * S) return "trans has wrong size";
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t a = 0; a < A; ++a) {
      std::span<const double> row(m.trans.data() + (s * A + a) * S, S);
      if (auto v = check_row(row, sa_name("trans", s, a), tol)) return v;
    }
  return std::nullopt;
}

void renormalize(std::span<double> row) {
  const double s = row_sum(row);
  if (std::abs(s - 1.0) > kProbTolerance)
    for (double& p : row) p /= s;
}

}  // namespace

CostSet::CostSet(std::vector<double> values, double c_max)
    : values_(std::move(values)), c_max_(c_max) {
  require(!values_.empty(), "cost set must be nonempty");
  require(std::isfinite(c_max_) && c_max_ >= 0.0, "c_max must be >= 0");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    require(values_[i] >= 0.0 && values_[i] <= c_max_,
            "cost values must lie in [0, c_max]");
    if (i > 0)
      require(values_[i] > values_[i - 1],
              "cost values must be strictly increasing");
  }
}

std::optional<std::string> validate(const MdpData& mdp, const CostSet& costs) {
  return validate_with(mdp, costs, kProbTolerance);
}

TabularMdp::TabularMdp(MdpData data, const CostSet& costs)
    : data_(std::move(data)), n_costs_(costs.size()) {
  if (auto v = validate_with(data_, costs, kRenormalizeLimit))
    fail(ErrorCode::kParameter, "invalid MDP: " + *v);
  const std::size_t S = data_.n_states, A = data_.n_actions, C = n_costs_;
  renormalize(data_.init);
  if (data_.is_joint()) {
    for (std::size_t sa = 0; sa < S * A; ++sa)
      renormalize(std::span<double>(data_.joint.data() + sa * C * S, C * S));
    joint_ = data_.joint;
  } else {
    for (std::size_t sa = 0; sa < S * A; ++sa)
      renormalize(std::span<double>(data_.trans.data() + sa * S, S));
    joint_.assign(S * A * C * S, 0.0);
    for (std::size_t sa = 0; sa < S * A; ++sa) {
      const std::size_t c = data_.cost_index[sa];
      for (std::size_t n = 0; n < S; ++n)
        joint_[(sa * C + c) * S + n] = data_.trans[sa * S + n];
    }
  }
}

std::span<const double> TabularMdp::joint_row(std::size_t s,
                                              std::size_t a) const {
  const std::size_t width = n_costs_ * n_states();
  return {joint_.data() + (s * n_actions() + a) * width, width};
}

double TabularMdp::joint(std::size_t s, std::size_t a, std::size_t c,
                         std::size_t next) const {
  return joint_row(s, a)[c * n_states() + next];
}

double TabularMdp::trans(std::size_t s, std::size_t a, std::size_t next) const {
  auto row = joint_row(s, a);
  double p = 0.0;
  for (std::size_t c = 0; c < n_costs_; ++c) p += row[c * n_states() + next];
  return p;
}

double TabularMdp::cost_prob(std::size_t s, std::size_t a,
                             std::size_t c) const {
  auto row = joint_row(s, a);
  double p = 0.0;
  for (std::size_t n = 0; n < n_states(); ++n) p += row[c * n_states() + n];
  return p;
}

double TabularMdp::expected_cost(std::size_t s, std::size_t a,
                                 const CostSet& costs) const {
  double e = 0.0;
  for (std::size_t c = 0; c < n_costs_; ++c)
    e += costs.value(c) * cost_prob(s, a, c);
  return e;
}

std::optional<std::size_t> TabularMdp::cost_index(std::size_t s,
                                                  std::size_t a) const {
  if (is_joint()) return std::nullopt;
  return data_.cost_index.at(s * n_actions() + a);
}

Prior::Prior(std::vector<MdpPtr> members, std::vector<double> weights,
             CostSet costs, std::vector<std::size_t> labels)
    : members_(std::move(members)),
      weights_(std::move(weights)),
      costs_(std::move(costs)),
      labels_(std::move(labels)) {
  require(!members_.empty(), "prior must have at least one member");
  require(weights_.size() == members_.size(),
          "prior weights and members differ in length");
  if (labels_.empty()) {
    labels_.resize(members_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) labels_[i] = i;
  }
  require(labels_.size() == members_.size(),
          "prior labels and members differ in length");
  if (auto v = check_row(weights_, "weights", kRenormalizeLimit))
    fail(ErrorCode::kParameter, "invalid prior: " + *v);
  renormalize(weights_);
  const TabularMdp& first = *members_.front();
  for (const auto& m : members_) {
    require(m != nullptr, "null prior member");
    require(m->n_states() == first.n_states() &&
                m->n_actions() == first.n_actions() &&
                m->horizon() == first.horizon() &&
                m->n_costs() == costs_.size(),
            "prior members disagree on (S, A, C, H)");
    require(std::equal(m->init().begin(), m->init().end(),
                       first.init().begin()),
            "prior members disagree on init");
  }
}

double Prior::p_min() const noexcept {
  return *std::min_element(weights_.begin(), weights_.end());
}

Prior Prior::without(std::size_t j) const {
  require(j < size(), "member index out of range");
  require(size() >= 2, "cannot remove the only member");
  std::vector<MdpPtr> m;
  std::vector<double> w;
  std::vector<std::size_t> l;
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (i == j) continue;
    m.push_back(members_[i]);
    w.push_back(weights_[i]);
    l.push_back(labels_[i]);
    total += weights_[i];
  }
  require(total > 0.0, "remaining members have zero weight");
  for (double& x : w) x /= total;
  return Prior(std::move(m), std::move(w), costs_, std::move(l));
}

Prior Prior::single(std::size_t i) const {
  return Prior({member_ptr(i)}, {1.0}, costs_, {labels_.at(i)});
}

Prior sample_empirical(const Prior& prior, std::size_t n, std::uint64_t seed) {
  require(n >= 1, "sample size must be at least 1");
  Rng rng = Rng::from_seed(seed).substream("sample_empirical");
  std::vector<MdpPtr> members;
  std::vector<std::size_t> labels;
  members.reserve(n);
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = rng.categorical(prior.weights());
    members.push_back(prior.member_ptr(k));
    labels.push_back(prior.label(k));
  }
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  return Prior(std::move(members), std::move(weights), prior.costs(),
               std::move(labels));
}

TabularMdp smooth(const TabularMdp& mdp, double alpha, const CostSet& costs) {
  require(alpha > 0.0 && alpha < 1.0, "smoothing alpha must be in (0, 1)");
  const std::size_t S = mdp.n_states(), A = mdp.n_actions(), C = costs.size();
  MdpData out;
  out.n_states = S;
  out.n_actions = A;
  out.horizon = mdp.horizon();
  out.init.assign(mdp.init().begin(), mdp.init().end());
  out.joint.resize(S * A * C * S);
  const double floor = alpha / static_cast<double>(S * C);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t a = 0; a < A; ++a) {
      auto row = mdp.joint_row(s, a);
      double* dst = out.joint.data() + (s * A + a) * C * S;
      for (std::size_t i = 0; i < C * S; ++i)
        dst[i] = (1.0 - alpha) * row[i] + floor;
    }
  return TabularMdp(std::move(out), costs);
}

Prior smooth(const Prior& prior, double alpha) {
  std::vector<MdpPtr> members;
  for (std::size_t i = 0; i < prior.size(); ++i)
    members.push_back(std::make_shared<const TabularMdp>(
        smooth(prior.member(i), alpha, prior.costs())));
  return Prior(std::move(members),
               std::vector<double>(prior.weights().begin(),
                                   prior.weights().end()),
               prior.costs(),
               std::vector<std::size_t>(prior.labels().begin(),
                                        prior.labels().end()));
}

double q_ratio(const Prior& prior) {
  const std::size_t S = prior.n_states(), A = prior.n_actions();
  double q = 1.0;
  for (std::size_t i = 0; i < prior.size(); ++i)
    for (std::size_t j = 0; j < prior.size(); ++j) {
      if (i == j) continue;
      for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a) {
          auto num = prior.member(i).joint_row(s, a);
          auto den = prior.member(j).joint_row(s, a);
          for (std::size_t o = 0; o < num.size(); ++o) {
            if (num[o] == 0.0) continue;  // 0/0 = 1 and 0/x = 0
            if (den[o] == 0.0) return std::numeric_limits<double>::infinity();
            q = std::max(q, num[o] / den[o]);
          }
        }
    }
  return q;
}

}  // namespace brl
