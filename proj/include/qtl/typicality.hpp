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

#ifndef QTL_TYPICALITY_HPP
#define QTL_TYPICALITY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qtl/hilbert.hpp"
#include "qtl/rng.hpp"

namespace qtl::typicality {

/// Deviation of pure-state expectations from the uniform (microcanonical)
/// average, analytic and sampled. All `*_rms` fields are on the RMS scale;
/// the mean-square estimate is kept alongside for moment comparisons.
struct DeviationReport {
  Index n = 0;
  unsigned moment_order = 1;
  double analytic_rms = 0.0;
  double mc_estimate = 0.0;
  double mc_standard_error = 0.0;
  double mc_mean_square = 0.0;
  double mc_mean_square_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Exact RMS of <psi|F|psi> - tr F/n over Haar-random psi:
/// sqrt((tr F^2/n - (tr F/n)^2) / (n+1)).
double typical_deviation_rms(const HermitianOperator& op);

/// Operator spread sqrt(tr F^2/n - (tr F/n)^2) and its eigenvalue bound
/// max |f_i|. Throws InvariantViolation if the bound fails.
struct SpreadBound {
  double spread = 0.0;
  double bound = 0.0;
};
SpreadBound spread_bound(const HermitianOperator& op);

/// Samples Haar states and reports the RMS deviation with a jackknife
/// error bar. Requires samples >= 2.
DeviationReport typical_deviation_mc(const HermitianOperator& op, std::size_t samples,
                                     RngStream& rng);

/// Fixed state, random basis: F = sum_i f_i |e_i><e_i| with {e_i} Haar.
DeviationReport random_basis_deviation_mc(const PureState& psi,
                                          std::span<const double> f_values,
                                          std::size_t samples, RngStream& rng);

/// RMS deviation of the pure-state variance <psi|(F - tr F/n)^2|psi> from
/// the uniform-ensemble variance.
double variance_deviation_rms(const HermitianOperator& op);
/// B = (F - (tr F/n) I)^2
HermitianOperator centered_square(const HermitianOperator& op);

/// Deviation of the m-th moment <psi|F^m|psi> from tr F^m / n.
DeviationReport moment_deviation(const HermitianOperator& op, unsigned m,
                                 std::size_t samples, RngStream& rng);

struct SphereMoments {
  Index n = 0;
  std::size_t samples = 0;
  double second = 0.0, second_error = 0.0;        // <|a_0|^2>
  double fourth = 0.0, fourth_error = 0.0;        // <|a_0|^4>
  double cross = 0.0, cross_error = 0.0;          // <|a_0|^2 |a_1|^2>
};
/// Empirical low moments of Haar amplitudes; n >= 2.
SphereMoments sphere_moments(Index n, std::size_t samples, RngStream& rng);

enum class SpectrumFamily { RankOneProjector, Alternating, Constant };

SpectrumFamily parse_family(std::string_view name);
std::string_view to_string(SpectrumFamily family);
std::vector<double> family_spectrum(SpectrumFamily family, Index n);

/// Samples used by default: 1e5 for n <= 64, 1e4 above.
std::size_t default_samples(Index n);

struct ScalingRow {
  Index n = 0;
  double analytic = 0.0;
  std::optional<DeviationReport> mc;
};

struct ScalingStudy {
  SpectrumFamily family{};
  std::vector<ScalingRow> rows;
  /// Slope of log(analytic) against log(n+1); empty when degenerate
  /// (some analytic value is zero) or fewer than two sizes.
  std::optional<double> slope;
  bool degenerate = false;
};

/// `samples == 0` selects default_samples(n); `with_monte_carlo = false`
/// fills only the analytic column.
ScalingStudy scaling_study(SpectrumFamily family, std::span<const Index> dims,
                           std::size_t samples, RngStream& rng,
                           bool with_monte_carlo = true);

}  // namespace qtl::typicality

#endif  // QTL_TYPICALITY_HPP
