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

#ifndef QTL_HARNESS_PLOT_HPP
#define QTL_HARNESS_PLOT_HPP

#include <optional>
#include <string>
#include <string_view>

#include "qtl/harness/table.hpp"

namespace qtl::harness {

/// scaling: columns n and analytic_rms (mc_estimate optional).
/// trajectory: column t and one or more S_* columns.
/// populations: columns p_pred and p_obs_mean (E optional, used as labels).
enum class PlotKind { Scaling, Trajectory, Populations };

std::string_view to_string(PlotKind kind);

/// Standalone SVG 1.1 document. Throws NoData on an empty table and Shape
/// when required columns are missing.
std::string emit_plot(const Table& table, PlotKind kind);

/// Slope drawn on a scaling plot; empty for fewer than two usable points.
std::optional<double> scaling_plot_slope(const Table& table);

}  // namespace qtl::harness

#endif  // QTL_HARNESS_PLOT_HPP
