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

#include <iosfwd>
#include <string>

#include "brl/mdp.hpp"

namespace brl {

// Line-oriented text format for priors (a single MDP is a one-member prior).
//
//   brl-prior 1
//   states S
//   actions A
//   costs v_0 ... v_{C-1}
//   c_max X
//   horizon H
//   init p_0 ... p_{S-1}
//   members K
//   member k                  (repeated K times, k = 0..K-1)
//   weight w
//   label l
//   cost_table                then S lines of A cost indices
//   trans                     then S*A lines of S probabilities, row (s, a)
//   -- or, for joint-kernel members --
//   joint                     then S*A lines of C*S probabilities, c-major
//   end
//
// '#' starts a comment. Reals are written with 17 significant digits, so
// write followed by read reproduces every probability bit for bit.

void write_prior(std::ostream& out, const Prior& prior);
Prior read_prior(std::istream& in);

void save_prior(const std::string& path, const Prior& prior);
Prior load_prior(const std::string& path);

/// "%.17g" formatting shared by every text emitter.
std::string format_real(double x);

}  // namespace brl
