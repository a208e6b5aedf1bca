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

#ifndef QTL_HARNESS_CONFIG_HPP
#define QTL_HARNESS_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qtl/dynamics.hpp"
#include "qtl/hilbert.hpp"
#include "qtl/typicality.hpp"

namespace qtl::harness {

enum class ExperimentKind { Typicality, Scaling, Canonical, Grand, Thermalize, Horizon, OscillatorsCount };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_kind(std::string_view name);
const std::vector<ExperimentKind>& all_kinds();

struct LevelSpec {
  double energy = 0.0;
  std::optional<int> charge;
  std::uint64_t degeneracy = 1;
  bool operator==(const LevelSpec&) const = default;
};

struct TypicalityParams {
  std::vector<double> spectrum;  // eigenvalues of the diagonal observable
  std::size_t samples = 100000;
  std::vector<unsigned> moments{1};
  bool random_basis = false;  // also run the fixed-state, random-basis estimate
  bool variance = false;   // also run the variance-deviation estimate
  double tolerance_sigmas = 4.0;
  bool operator==(const TypicalityParams&) const = default;
};

struct ScalingParams {
  typicality::SpectrumFamily family = typicality::SpectrumFamily::Alternating;
  std::vector<Index> dims;
  std::size_t samples = 0;  // 0: 1e5 for n <= 64, 1e4 above
  bool monte_carlo = true;
  std::optional<double> expected_slope;
  double slope_tolerance = 0.005;
  double tolerance_sigmas = 4.0;
  bool operator==(const ScalingParams&) const = default;
};

struct CanonicalParams {
  std::vector<LevelSpec> spec_a;
  std::vector<LevelSpec> spec_b;
  double total_energy = 0.0;
  std::size_t samples = 1000;
  double match_tol = 1e-9;
  double tolerance_sigmas = 4.0;
  double off_block_tolerance = 1e-14;
  double fluctuation_factor = 2.0;
  std::uint64_t fluctuation_min_block = 50;
  bool operator==(const CanonicalParams&) const = default;
};

struct GrandParams {
  std::vector<LevelSpec> spec_a;
  std::vector<LevelSpec> spec_b;
  double total_energy = 0.0;
  int total_charge = 0;
  std::size_t samples = 1000;
  double match_tol = 1e-9;
  double tolerance_sigmas = 4.0;
  double exact_tolerance = 1e-10;  // relative, predicted-population fit
  bool operator==(const GrandParams&) const = default;
};

struct ThermalizeParams {
  std::vector<double> frequencies;
  double total_energy = 0.0;
  std::vector<int> initial;
  double epsilon = 0.1;
  std::vector<double> times;           // empty: 0..20 in steps of 0.5
  bool times_in_relaxation_units = true;
  std::size_t seeds = 1;
  dynamics::SpacingRule spacing = dynamics::SpacingRule::MeanLevelSpacing;
  std::size_t baseline_samples = 1000;
  std::optional<double> distance_threshold;  // default 2 / sqrt(shell dim)
  double mutual_information_tolerance = 0.25;  // relative to the Haar baseline
  bool operator==(const ThermalizeParams&) const = default;
};

struct HorizonParams {
  double mass = 0.0;
  std::vector<LevelSpec> levels;
  std::size_t observable_samples = 100;
  double distance_tolerance = 1e-10;
  double observable_tolerance = 1e-9;
  bool emit_density = false;  // include rho_outside in the summary
  bool operator==(const HorizonParams&) const = default;
};

struct CountParams {
  std::vector<double> frequencies;
  double total_energy = 0.0;
  double match_tol = 1e-9;
  std::uint64_t cap = dynamics::kDefaultCountCap;
  std::optional<std::uint64_t> expected;
  bool operator==(const CountParams&) const = default;
};

using ExperimentParams = std::variant<TypicalityParams, ScalingParams, CanonicalParams, GrandParams,
                                      ThermalizeParams, HorizonParams, CountParams>;

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Typicality;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  ExperimentParams params;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates a JSON experiment document. Unknown keys, missing
/// required fields and type mismatches raise Error(Config) naming the
/// offending path, e.g. "$.samlpes: unknown key".
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig parse_config_json(const nlohmann::json& doc);

/// Fully resolved config, defaults included; parse_config accepts it back.
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace qtl::harness

#endif  // QTL_HARNESS_CONFIG_HPP
