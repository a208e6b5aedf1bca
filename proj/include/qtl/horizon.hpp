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

#ifndef QTL_HORIZON_HPP
#define QTL_HORIZON_HPP

#include <cstddef>
#include <vector>

#include "qtl/hilbert.hpp"
#include "qtl/rng.hpp"

// Units throughout: G = h = c = k_B = 1.
namespace qtl::horizon {

/// Truncated exterior mode spectrum: distinct ascending energies starting
/// with the vacuum (E = 0, d = 1). The last level is the cutoff.
class ModeSpectrum {
 public:
  explicit ModeSpectrum(std::vector<EnergyLevel> levels);

  const std::vector<EnergyLevel>& levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  Index dimension() const noexcept { return dimension_; }
  double cutoff() const { return levels_.back().energy; }
  /// Energy of every basis state (level i repeated d(E_i) times).
  std::vector<double> basis_energies() const;

 private:
  std::vector<EnergyLevel> levels_;
  Index dimension_ = 0;
};

/// Perfectly paired inside/outside state. The joint basis is
/// |inside a> |outside b> flattened as a * D + b, where a and b run over
/// the (level, degeneracy index) pairs of the mode spectrum; the inside
/// partner of exterior energy E_i carries energy -E_i.
class HorizonState {
 public:
  HorizonState(double mass, ModeSpectrum modes, PureState joint, double norm_squared);

  double mass() const noexcept { return mass_; }
  const ModeSpectrum& modes() const noexcept { return modes_; }
  const PureState& joint() const noexcept { return joint_; }
  /// N^2 = sum_i d(E_i) exp(-8 pi M E_i)
  double norm_squared() const noexcept { return norm_squared_; }
  Index mode_dimension() const noexcept { return modes_.dimension(); }

 private:
  double mass_;
  ModeSpectrum modes_;
  PureState joint_;
  double norm_squared_;
};

double hawking_temperature(double mass);

HorizonState hawking_state(double mass, const ModeSpectrum& modes);

DensityMatrix outside_density(const HorizonState& state);
DensityMatrix inside_density(const HorizonState& state);

/// Trace distance from rho_out to the Gibbs state at beta = 8 pi M.
double verify_blackbody(const DensityMatrix& rho_out, double mass, const ModeSpectrum& modes);

/// |<psi| I (x) A |psi> - tr(rho_out A)| for one exterior observable.
double observable_discrepancy(const HorizonState& state, const HermitianOperator& exterior);

/// Largest discrepancy over `samples` GUE exterior observables.
double outside_observable_equivalence(const HorizonState& state, std::size_t samples, RngStream& rng);

/// Exterior weight carried by the cutoff level, d(E_max) e^{-8 pi M E_max} / N^2.
double tail_weight(const HorizonState& state);

/// Largest |(E_inside + E_outside) amplitude| over the joint basis; zero
/// for a perfectly paired state.
double total_energy_residual(const HorizonState& state);

}  // namespace qtl::horizon

#endif  // QTL_HORIZON_HPP
