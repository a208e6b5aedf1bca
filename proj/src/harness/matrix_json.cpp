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

#include "qtl/harness/matrix_json.hpp"

#include <string>

#include "qtl/errors.hpp"

namespace qtl::harness {

using nlohmann::json;

json matrix_to_json(const CMatrix& m) {
  json data = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      data.push_back(m(r, c).real());
      data.push_back(m(r, c).imag());
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("rows") || !doc.contains("cols") || !doc.contains("data"))
    throw Error(ErrorCode::Config, "matrix: expected an object with rows, cols and data");
  const auto& rows = doc.at("rows");
  const auto& cols = doc.at("cols");
  const auto& data = doc.at("data");
  if (!rows.is_number_integer() || !cols.is_number_integer() || rows.get<Index>() < 0 || cols.get<Index>() < 0 ||
      !data.is_array())
    throw Error(ErrorCode::Config, "matrix: rows and cols must be non-negative integers and data an array");
  const Index r = rows.get<Index>(), c = cols.get<Index>();
  if (data.size() != static_cast<std::size_t>(2 * r * c))
    throw Error(ErrorCode::Config, "matrix: data holds " + std::to_string(data.size()) + " numbers, expected " +
                                       std::to_string(2 * r * c));
  CMatrix m(r, c);
  std::size_t k = 0;
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < c; ++j, k += 2) {
      if (!data[k].is_number() || !data[k + 1].is_number())
        throw Error(ErrorCode::Config, "matrix: data[" + std::to_string(k) + "] is not a number");
      m(i, j) = Complex(data[k].get<double>(), data[k + 1].get<double>());
    }
  }
  return m;
}

}  // namespace qtl::harness
