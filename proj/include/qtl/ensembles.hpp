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

#ifndef QTL_ENSEMBLES_HPP
#define QTL_ENSEMBLES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qtl/hilbert.hpp"
#include "qtl/rng.hpp"
#include "qtl/stats.hpp"

namespace qtl::ensembles {

inline constexpr double kDefaultMatchTolerance = 1e-9;

struct SpectrumLevel {
  double energy = 0.0;
  std::optional<int> charge;
  std::uint64_t degeneracy = 1;
};

/// Conserved quantum numbers mapped to degeneracy counts; S = ln d.
/// Either every level carries a charge or none does.
class DegeneracySpectrum {
 public:
  explicit DegeneracySpectrum(std::vector<SpectrumLevel> levels);

  const std::vector<SpectrumLevel>& levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  const SpectrumLevel& operator[](std::size_t i) const { return levels_[i]; }
  bool charged() const noexcept { return charged_; }

  /// Sum of all degeneracies; the dimension of the full space.
  std::uint64_t total_dimension() const noexcept { return total_; }
  /// First basis index of level i in the concatenated level basis.
  std::uint64_t offset(std::size_t i) const { return offsets_.at(i); }
  double entropy(std::size_t i) const;

  std::optional<std::size_t> find(double energy, std::optional<int> charge,
                                  double tol = kDefaultMatchTolerance) const;

 private:
  std::vector<SpectrumLevel> levels_;
  std::vector<std::uint64_t> offsets_;
  std::uint64_t total_ = 0;
  bool charged_ = false;
};

/// One conserving product block |E_i>^k_A |E - E_i>^l_B; flat index of
/// (k, l) is offset + k * d_b + l.
struct ShellBlock {
  std::size_t a_level = 0;
  std::size_t b_level = 0;
  std::uint64_t d_a = 0;
  std::uint64_t d_b = 0;
  std::uint64_t offset = 0;
  std::uint64_t size() const noexcept { return d_a * d_b; }
};

struct BipartiteEnergyShell {
  double total_energy = 0.0;
  std::optional<int> total_charge;
  std::vector<ShellBlock> blocks;
  std::uint64_t n = 0;

  /// n_i: shell states whose A factor lies in A-level `a_level`.
  std::uint64_t level_count(std::size_t a_level) const;
  /// Distinct A levels with n_i > 0, ascending.
  std::vector<std::size_t> populated_levels() const;
};

BipartiteEnergyShell build_shell(const DegeneracySpectrum& spec_a, const DegeneracySpectrum& spec_b,
                                 double total_energy, std::optional<int> total_charge = std::nullopt,
                                 double match_tol = kDefaultMatchTolerance);

PureState sample_shell_state(const BipartiteEnergyShell& shell, RngStream& rng);

/// Reduced state of A on the concatenated basis of every spec_a level
/// (dimension spec_a.total_dimension()). Levels outside the shell get
/// zero blocks.
DensityMatrix reduce_to_A(const PureState& state, const BipartiteEnergyShell& shell,
                          const DegeneracySpectrum& spec_a);

/// Frobenius norm of everything outside the per-level diagonal blocks.
double off_block_norm(const DensityMatrix& rho_a, const DegeneracySpectrum& spec_a);

struct LevelPopulation {
  std::size_t a_level = 0;
  double energy = 0.0;
  std::optional<int> charge;
  std::uint64_t d_a = 0;
  std::uint64_t d_b = 0;  // summed over matching bath levels
  std::uint64_t n_i = 0;
  double p_observed = 0.0;
  double p_predicted = 0.0;
  double fluctuation_scale = 0.0;  // sqrt(n_i)/n
  double fluctuation_exact = 0.0;  // sqrt((n_i/n - (n_i/n)^2)/(n+1))
};

struct PopulationReport {
  std::uint64_t n = 0;
  std::vector<LevelPopulation> levels;
};

/// Throws Inconsistency if the populated blocks miss more than 1e-8 of the trace.
PopulationReport energy_populations(const DensityMatrix& rho_a, const BipartiteEnergyShell& shell,
                                    const DegeneracySpectrum& spec_a);
PopulationReport predicted_populations(const BipartiteEnergyShell& shell,
                                       const DegeneracySpectrum& spec_a);

/// Finite-difference slope of ln d along a sorted sequence of points,
/// evaluated at x0: central when x0 is an interior point, one-sided at an
/// end, bracketing-interval slope otherwise.
double log_degeneracy_slope(const std::vector<std::pair<double, double>>& points, double x0,
                            double tol = kDefaultMatchTolerance);

struct BathTemperature {
  double slope = 0.0;  // dS_B/dE = 1/T
  double temperature = 0.0;
  bool infinite = false;
  bool negative = false;
};

/// Requires at least two distinct bath energies.
BathTemperature bath_temperature(const DegeneracySpectrum& spec_b, double energy);

struct BathDerivatives {
  double d_energy = 0.0;  // dS_B/dE
  double d_charge = 0.0;  // dS_B/dQ
  double temperature() const { return 1.0 / d_energy; }
  double potential() const { return -d_charge / d_energy; }
};

/// Partial derivatives of ln d_B at (energy, charge) on a charged bath.
BathDerivatives bath_derivatives(const DegeneracySpectrum& spec_b, double energy, int charge);

struct FitSummary {
  double beta = 0.0;
  double beta_error = 0.0;
  double temperature = 0.0;
  double temperature_error = 0.0;
  std::optional<double> potential;
  std::optional<double> potential_error;
  std::optional<double> beta_potential;  // Phi/T, the charge coefficient
  std::optional<double> beta_potential_error;
  double residual_norm = 0.0;
  std::size_t levels_used = 0;
  double reference_beta = 0.0;
  std::optional<double> reference_potential;
  bool consistent = false;
};

/// Fits ln p(E_i) - S_A(E_i) = c - beta E_i over populated levels.
/// Inconsistency with 1/T is reported through `consistent`, not thrown.
FitSummary canonical_form_check(const PopulationReport& report, const DegeneracySpectrum& spec_a,
                                double temperature);

/// Fits ln p - S_A = c - beta E + (beta Phi) Q. Falls back to the
/// canonical fit (potential left empty) when every populated level has
/// the same charge.
FitSummary grand_form_check(const PopulationReport& report, const DegeneracySpectrum& spec_a,
                            const BathDerivatives& bath);

struct LevelSampleStats {
  double p_mean = 0.0;
  double p_std = 0.0;
  double p_mean_error = 0.0;
};

struct CanonicalExperiment {
  BipartiteEnergyShell shell;
  PopulationReport predicted;
  std::vector<LevelSampleStats> sampled;  // aligned with predicted.levels
  double max_off_block_norm = 0.0;
  BathTemperature bath;
  FitSummary predicted_fit;
  stats::Estimate sampled_beta;  // fit of mean populations, jackknife over states
  std::size_t samples = 0;
};

CanonicalExperiment canonical_experiment(const DegeneracySpectrum& spec_a,
                                         const DegeneracySpectrum& spec_b, double total_energy,
                                         std::size_t samples, RngStream& rng,
                                         double match_tol = kDefaultMatchTolerance);

struct GrandExperiment {
  BipartiteEnergyShell shell;
  PopulationReport predicted;
  std::vector<LevelSampleStats> sampled;
  BathDerivatives bath;
  FitSummary predicted_fit;
  stats::Estimate sampled_beta;
  std::optional<stats::Estimate> sampled_beta_potential;
  std::size_t samples = 0;
};

/// Charge-resolved shell check; `samples == 0` skips the sampled fit.
GrandExperiment grand_shell_check(const DegeneracySpectrum& spec_a, const DegeneracySpectrum& spec_b,
                                  double total_energy, int total_charge, RngStream& rng,
                                  std::size_t samples, double match_tol = kDefaultMatchTolerance);

}  // namespace qtl::ensembles

#endif  // QTL_ENSEMBLES_HPP
