// Copyright 2026 The QTL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QTL_HARNESS_TABLE_HPP
#define QTL_HARNESS_TABLE_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qtl::harness {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Locale-independent, 17 significant digits.
std::string format_number(double value);

/// Named result table; serializes to RFC-4180 CSV and to JSON.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Run metadata written next to the CSV as <name>.meta.json when set.
  nlohmann::json meta;

  void add_row(std::vector<Cell> row);
  std::size_t column_index(const std::string& column) const;
  bool has_column(const std::string& column) const;
  std::vector<double> numeric_column(const std::string& column) const;

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

}  // namespace qtl::harness

#endif  // QTL_HARNESS_TABLE_HPP
