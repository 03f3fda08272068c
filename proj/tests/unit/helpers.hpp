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

#include <memory>
#include <vector>

#include "brl/mdp.hpp"

namespace testing {

inline brl::MdpPtr make_mdp(brl::MdpData d, const brl::CostSet& costs) {
  return std::make_shared<const brl::TabularMdp>(std::move(d), costs);
}

/// Deterministic-cost MDP from flat tables.
inline brl::MdpData data(std::size_t S, std::size_t A, std::size_t H,
                         std::vector<double> init,
                         std::vector<std::size_t> cost_index,
                         std::vector<double> trans) {
  brl::MdpData d;
  d.n_states = S;
  d.n_actions = A;
  d.horizon = H;
  d.init = std::move(init);
  d.cost_index = std::move(cost_index);
  d.trans = std::move(trans);
  return d;
}

inline brl::Prior one(const brl::MdpData& d, const brl::CostSet& costs) {
  return brl::Prior({make_mdp(d, costs)}, {1.0}, costs);
}

}  // namespace testing
