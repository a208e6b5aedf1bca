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

#ifndef QTL_HARNESS_MATRIX_JSON_HPP
#define QTL_HARNESS_MATRIX_JSON_HPP

#include <json.hpp>

#include "qtl/hilbert.hpp"

namespace qtl::harness {

/// {"rows": r, "cols": c, "data": [re, im, re, im, ...]} in row-major order.
nlohmann::json matrix_to_json(const CMatrix& m);
/// Inverse of matrix_to_json. Throws Config on a malformed document.
CMatrix matrix_from_json(const nlohmann::json& doc);

}  // namespace qtl::harness

#endif  // QTL_HARNESS_MATRIX_JSON_HPP
