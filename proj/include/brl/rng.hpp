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
#include <limits>
#include <span>
#include <string_view>

namespace brl {

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based generator: the i-th output is mix64(key + i * golden_gamma).
///
/// A stream is fully described by its 64-bit key, so named substreams can be
/// derived without touching the parent's counter. Adding a new consumer with a
/// new name never shifts the values seen by existing consumers.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) noexcept : key_(key) {}

  /// Root stream for a user seed.
  static Rng from_seed(std::uint64_t seed) noexcept;

  Rng substream(std::string_view name) const noexcept;
  Rng substream(std::uint64_t index) const noexcept;

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Index drawn with probability proportional to `weights`; zero-weight
  /// entries are never returned. Weights must have a positive sum.
  std::size_t categorical(std::span<const double> weights) noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Seed for an experiment cell, derived by hashing (root, name, a, b).
std::uint64_t derive_seed(std::uint64_t root, std::string_view name,
                          std::uint64_t a = 0, std::uint64_t b = 0) noexcept;

}  // namespace brl
