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

#ifndef QTL_HARNESS_RUN_HPP
#define QTL_HARNESS_RUN_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtl/harness/config.hpp"
#include "qtl/harness/table.hpp"

namespace qtl::harness {

/// One declared tolerance: `value relation threshold` must hold.
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<", "<=", ">="
  bool pass = false;
};

struct RunReport {
  nlohmann::json config;  // fully resolved, defaults included
  std::vector<Table> tables;
  std::vector<Check> checks;
  nlohmann::json summary;
  double wall_seconds = 0.0;

  bool passed() const;
  /// Deterministic part of the report: config, tables, checks, summary.
  nlohmann::json data_json() const;
  /// data_json() plus a volatile header (timestamp, wall-clock time).
  nlohmann::json to_json() const;
};

/// Dispatches to the owning module. Module errors are rethrown with the
/// experiment kind prefixed to the message.
RunReport run(const ExperimentConfig& config);

/// Writes report.json, <table>.csv, <table>.meta.json and, when `plots`
/// is set, an SVG for every plottable table. Returns the files written.
std::vector<std::filesystem::path> write_report(const RunReport& report, const std::filesystem::path& dir,
                                                bool plots);

}  // namespace qtl::harness

#endif  // QTL_HARNESS_RUN_HPP
