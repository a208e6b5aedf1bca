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

#include "qtl/harness/table.hpp"

#include <charconv>
#include <cmath>

#include "qtl/errors.hpp"

namespace qtl::harness {
namespace {

std::string quote_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return quote_field(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw Error(ErrorCode::Shape, "table '" + name + "': row width does not match header");
  rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& column) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == column) return i;
  throw Error(ErrorCode::Shape, "table '" + name + "' has no column '" + column + "'");
}

bool Table::has_column(const std::string& column) const {
  for (const auto& c : columns)
    if (c == column) return true;
  return false;
}

std::vector<double> Table::numeric_column(const std::string& column) const {
  const std::size_t idx = column_index(column);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const Cell& cell = row[idx];
    if (const auto* d = std::get_if<double>(&cell)) {
      out.push_back(*d);
    } else if (const auto* i = std::get_if<std::int64_t>(&cell)) {
      out.push_back(static_cast<double>(*i));
    } else {
      throw Error(ErrorCode::Shape, "column '" + column + "' is not numeric");
    }
  }
  return out;
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + quote_field(columns[i]);
  out += "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + render(row[i]);
    out += "\r\n";
  }
  return out;
}

nlohmann::json Table::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) std::visit([&](const auto& v) { r.push_back(v); }, cell);
    rows_json.push_back(std::move(r));
  }
  nlohmann::json out = {{"name", name}, {"columns", columns}, {"rows", std::move(rows_json)}};
  if (!meta.is_null()) out["meta"] = meta;
  return out;
}

}  // namespace qtl::harness
