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

#include "brl/table.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <ostream>
#include <thread>

#include "brl/error.hpp"
#include "brl/prior_io.hpp"

namespace brl {
namespace {

std::string csv_field(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_real(*d);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  require(row.size() == columns_.size(), "table row has the wrong width");
  rows_.push_back(std::move(row));
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i)
      out << (i ? "," : "") << csv_field(r[i]);
    out << '\n';
  }
}

void Table::write_jsonl(std::ostream& out) const {
  for (const auto& r : rows_) {
    // ordered_json keeps the documented column order.
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::string& key = columns_[i];
      if (const auto* n = std::get_if<std::int64_t>(&r[i])) {
        obj[key] = *n;
      } else if (const auto* d = std::get_if<double>(&r[i])) {
        if (std::isfinite(*d))
          obj[key] = nlohmann::ordered_json::parse(format_real(*d));
        else
          obj[key] = format_real(*d);
      } else {
        obj[key] = std::get<std::string>(r[i]);
      }
    }
    out << obj.dump() << '\n';
  }
}

void Table::save(const std::string& path, bool jsonl) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  if (jsonl)
    write_jsonl(out);
  else
    write_csv(out);
  if (!out) fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

std::size_t default_workers() noexcept {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace brl
