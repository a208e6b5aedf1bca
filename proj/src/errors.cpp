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

#include "qtl/errors.hpp"

namespace qtl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::Shape: return "shape";
    case ErrorCode::InvariantViolation: return "invariant-violation";
    case ErrorCode::NoCompatibleStates: return "no-compatible-states";
    case ErrorCode::Inconsistency: return "inconsistency";
    case ErrorCode::UnderdeterminedFit: return "underdetermined-fit";
    case ErrorCode::DegenerateInteraction: return "degenerate-interaction";
    case ErrorCode::CountOverflow: return "count-overflow";
    case ErrorCode::InvalidInitialState: return "invalid-initial-state";
    case ErrorCode::CutoffTooHot: return "cutoff-too-hot";
    case ErrorCode::Config: return "config";
    case ErrorCode::NoData: return "no-data";
  }
  return "unknown";
}

}  // namespace qtl
