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
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace brl {

using Cell = std::variant<std::int64_t, double, std::string>;

/// A rectangular result table with a fixed column order.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t n_rows() const noexcept { return rows_.size(); }
  const std::vector<Cell>& row(std::size_t i) const { return rows_.at(i); }

  /// Throws a parameter error when the width does not match.
  void add_row(std::vector<Cell> row);

  /// Header line plus one line per row; reals at 17 significant digits.
  void write_csv(std::ostream& out) const;
  /// One JSON object per row. Non-finite reals are written as strings.
  void write_jsonl(std::ostream& out) const;

  void save(const std::string& path, bool jsonl = false) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
/// thrown (lowest index) is rethrown after all threads finish.
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

/// std::thread::hardware_concurrency, at least 1.
std::size_t default_workers() noexcept;

}  // namespace brl
