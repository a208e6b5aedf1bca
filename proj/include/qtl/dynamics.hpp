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

#ifndef QTL_DYNAMICS_HPP
#define QTL_DYNAMICS_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qtl/hilbert.hpp"
#include "qtl/rng.hpp"
#include "qtl/stats.hpp"

namespace qtl::dynamics {

inline constexpr double kDefaultMatchTolerance = 1e-9;
inline constexpr std::uint64_t kDefaultCountCap = 1'000'000'000'000ULL;
inline constexpr std::size_t kMaxShellStates = 8192;

/// Uncoupled oscillators with level energies i * omega_l (zero point
/// dropped). Oscillators are indexed from 0.
class OscillatorChain {
 public:
  explicit OscillatorChain(std::vector<double> frequencies);

  std::size_t size() const noexcept { return frequencies_.size(); }
  double frequency(std::size_t l) const { return frequencies_.at(l); }
  const std::vector<double>& frequencies() const noexcept { return frequencies_; }
  /// Highest occupation of oscillator l compatible with total energy E.
  int max_occupation(std::size_t l, double energy, double tol = kDefaultMatchTolerance) const;

 private:
  std::vector<double> frequencies_;
};

using Occupation = std::vector<int>;

/// Number of occupation tuples with sum_l omega_l i_l = E within match_tol.
/// Commensurate frequencies use an integer-lattice recurrence; otherwise
/// the tuples are enumerated. Throws CountOverflow past `cap`.
std::uint64_t count_states(std::span<const double> frequencies, double energy,
                           double match_tol = kDefaultMatchTolerance,
                           std::uint64_t cap = kDefaultCountCap);

/// Occupation tuples of a fixed-energy shell in lexicographic order.
class ShellBasis {
 public:
  ShellBasis(OscillatorChain chain, double energy, std::vector<Occupation> states);

  const OscillatorChain& chain() const noexcept { return chain_; }
  double energy() const noexcept { return energy_; }
  Index size() const noexcept { return static_cast<Index>(states_.size()); }
  const std::vector<Occupation>& states() const noexcept { return states_; }
  const Occupation& operator[](Index i) const { return states_.at(i); }
  std::optional<Index> index_of(const Occupation& occupation) const;

 private:
  OscillatorChain chain_;
  double energy_;
  std::vector<Occupation> states_;
  std::map<Occupation, Index> index_;
};

ShellBasis build_shell_basis(const OscillatorChain& chain, double energy,
                             double match_tol = kDefaultMatchTolerance);

/// epsilon * GUE on the shell: the unperturbed part is E * identity there
/// and only adds a global phase.
HermitianOperator perturbed_hamiltonian(const ShellBasis& basis, double epsilon, RngStream& rng);

enum class SpacingRule {
  MeanLevelSpacing,        // (max - min) / (n - 1)
  MeanNearestNeighborGap,  // average over levels of the distance to the closest other level
};

SpacingRule parse_spacing_rule(std::string_view name);
std::string_view to_string(SpacingRule rule);

double level_spacing(const HermitianOperator& h_int, SpacingRule rule = SpacingRule::MeanLevelSpacing);
/// hbar / Delta E with hbar = 1. Throws DegenerateInteraction on a zero
/// spectral width and InvalidDimension below two levels.
double relaxation_time(const HermitianOperator& h_int,
                       SpacingRule rule = SpacingRule::MeanLevelSpacing);

struct BoltzmannReference {
  DensityMatrix rho;                 // weights d_rest(E - omega_l i), normalized
  std::vector<double> degeneracies;  // d_rest(E - omega_l i), i = 0..max
  std::optional<double> beta;        // d ln d_rest / dE at E (finite difference)
  std::optional<DensityMatrix> exponential;  // e^{-beta omega_l i} / Z
};

BoltzmannReference boltzmann_reference(const OscillatorChain& chain, double energy, std::size_t l,
                                       double match_tol = kDefaultMatchTolerance);

/// Diagonal state with weights proportional to the given degeneracies.
DensityMatrix reference_from_degeneracies(std::span<const double> degeneracies);

/// Single-oscillator reduced states of a shell state.
std::vector<DensityMatrix> oscillator_marginals(const PureState& state, const ShellBasis& basis);

/// sum_l S(rho_l) - S(rho_total) for a pure state on a tensor product.
double mutual_information(const PureState& state, std::span<const Index> dims);
/// Same quantity for a state on a shell basis.
double shell_mutual_information(const PureState& state, const ShellBasis& basis);

struct TrajectoryPoint {
  double t = 0.0;
  std::vector<DensityMatrix> marginals;
  std::vector<double> entropies;
  double mutual_information = 0.0;
  double distance_to_reference = 0.0;  // rho of oscillator 0 vs boltzmann_reference
  double norm_drift = 0.0;
};

struct Trajectory {
  Index shell_dim = 0;
  double relaxation_time = 0.0;  // 0 when the shell has a single state
  std::vector<TrajectoryPoint> points;
};

/// Evolves the basis state `initial` under epsilon * GUE on the shell and
/// samples marginals, entropies and the distance of oscillator 0 to its
/// reference at every requested time. Throws InvalidInitialState if the
/// tuple is not in the shell.
Trajectory thermalization_run(const OscillatorChain& chain, double energy, const Occupation& initial,
                              double epsilon, std::span<const double> times, RngStream& rng,
                              SpacingRule rule = SpacingRule::MeanLevelSpacing);

/// Time average of the oscillator-l marginal over points with t in [from, to].
DensityMatrix average_marginal(const Trajectory& trajectory, std::size_t l, double from, double to);

/// Haar-state baseline on a shell: mean mutual information and mean
/// distance of oscillator 0 to its reference.
struct ShellBaseline {
  stats::Estimate mutual_information;
  stats::Estimate distance_to_reference;
  std::size_t samples = 0;
};
ShellBaseline haar_shell_baseline(const ShellBasis& basis, std::size_t samples, RngStream& rng);

}  // namespace qtl::dynamics

#endif  // QTL_DYNAMICS_HPP
