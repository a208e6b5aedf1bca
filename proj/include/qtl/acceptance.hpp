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

#ifndef QTL_ACCEPTANCE_HPP
#define QTL_ACCEPTANCE_HPP

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace qtl {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

inline constexpr int kCriterionCount = 10;

/// Runs the numbered acceptance criteria (all of them when `only` is
/// empty), printing one "[PASS]" or "[FAIL]" line per criterion as it
/// completes.
std::vector<CriterionResult> run_acceptance(std::ostream& out, std::span<const int> only = {});

}  // namespace qtl

#endif  // QTL_ACCEPTANCE_HPP
