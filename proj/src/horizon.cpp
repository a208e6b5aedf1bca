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

#include "qtl/horizon.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qtl::horizon {
namespace {

void require_mass(double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw Error(ErrorCode::InvalidParameter, "black-hole mass must be positive and finite");
}

// Joint amplitudes as a D x D matrix, rows inside, columns outside.
CMatrix amplitude_matrix(const HorizonState& state) {
  const Index d = state.mode_dimension();
  return Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      state.joint().amplitudes().data(), d, d);
}

}  // namespace

ModeSpectrum::ModeSpectrum(std::vector<EnergyLevel> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw Error(ErrorCode::InvalidParameter, "mode spectrum is empty");
  if (levels_.front().energy != 0.0 || levels_.front().degeneracy != 1)
    throw Error(ErrorCode::InvalidParameter, "mode spectrum must start with the vacuum (E = 0, d = 1)");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i].degeneracy < 1) throw Error(ErrorCode::InvalidParameter, "mode degeneracy must be >= 1");
    if (!std::isfinite(levels_[i].energy)) throw Error(ErrorCode::InvalidParameter, "mode energy must be finite");
    if (i > 0 && !(levels_[i].energy > levels_[i - 1].energy))
      throw Error(ErrorCode::InvalidParameter, "mode energies must be distinct and ascending");
    dimension_ += static_cast<Index>(levels_[i].degeneracy);
  }
}

std::vector<double> ModeSpectrum::basis_energies() const {
  std::vector<double> out;
  out.reserve(dimension_);
  for (const auto& level : levels_)
    for (std::uint64_t k = 0; k < level.degeneracy; ++k) out.push_back(level.energy);
  return out;
}

HorizonState::HorizonState(double mass, ModeSpectrum modes, PureState joint, double norm_squared)
    : mass_(mass), modes_(std::move(modes)), joint_(std::move(joint)), norm_squared_(norm_squared) {
  const Index d = modes_.dimension();
  if (joint_.dim() != d * d) throw Error(ErrorCode::Shape, "joint state does not match the mode spectrum");
}

double hawking_temperature(double mass) {
  require_mass(mass);
  return 1.0 / (8.0 * std::numbers::pi * mass);
}

HorizonState hawking_state(double mass, const ModeSpectrum& modes) {
  require_mass(mass);
  const Index d = modes.dimension();
  const auto energies = modes.basis_energies();
  double norm_squared = 0.0;
  for (double e : energies) norm_squared += std::exp(-8.0 * std::numbers::pi * mass * e);
  if (!(norm_squared > 0.0) || !std::isfinite(norm_squared))
    throw Error(ErrorCode::CutoffTooHot, "every mode weight underflowed");

  const double norm = std::sqrt(norm_squared);
  CVector joint = CVector::Zero(d * d);
  for (Index a = 0; a < d; ++a)
    joint(a * d + a) = std::exp(-4.0 * std::numbers::pi * mass * energies[a]) / norm;
  return HorizonState(mass, modes, PureState(std::move(joint)), norm_squared);
}

DensityMatrix outside_density(const HorizonState& state) {
  const Index d = state.mode_dimension();
  const Index dims[] = {d, d};
  const Index keep[] = {1};
  return partial_trace(state.joint(), dims, keep);
}

DensityMatrix inside_density(const HorizonState& state) {
  const Index d = state.mode_dimension();
  const Index dims[] = {d, d};
  const Index keep[] = {0};
  return partial_trace(state.joint(), dims, keep);
}

double verify_blackbody(const DensityMatrix& rho_out, double mass, const ModeSpectrum& modes) {
  require_mass(mass);
  if (rho_out.dim() != modes.dimension())
    throw Error(ErrorCode::Shape, "exterior state does not match the mode spectrum");
  const double beta = 8.0 * std::numbers::pi * mass;
  return trace_distance(rho_out, gibbs_state(modes.levels(), beta));
}

double observable_discrepancy(const HorizonState& state, const HermitianOperator& exterior) {
  const Index d = state.mode_dimension();
  if (exterior.dim() != d) throw Error(ErrorCode::Shape, "exterior observable has the wrong dimension");
  // <psi| I (x) A |psi> = sum_a sum_{b,b'} conj(psi_{a b}) A_{b b'} psi_{a b'}
  const CMatrix psi = amplitude_matrix(state);
  const Complex joint_value = (psi.conjugate() * exterior.entries() * psi.transpose()).trace();
  const double reduced_value = expectation(outside_density(state), exterior);
  return std::abs(joint_value.real() - reduced_value);
}

double outside_observable_equivalence(const HorizonState& state, std::size_t samples, RngStream& rng) {
  if (samples < 1) throw Error(ErrorCode::InvalidParameter, "need at least one observable sample");
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s)
    worst = std::max(worst, observable_discrepancy(state, sample_gue(state.mode_dimension(), 1.0, rng)));
  return worst;
}

double tail_weight(const HorizonState& state) {
  const auto& top = state.modes().levels().back();
  return static_cast<double>(top.degeneracy) *
         std::exp(-8.0 * std::numbers::pi * state.mass() * top.energy) / state.norm_squared();
}

double total_energy_residual(const HorizonState& state) {
  const Index d = state.mode_dimension();
  const auto energies = state.modes().basis_energies();
  double worst = 0.0;
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) {
      const double total = -energies[a] + energies[b];
      worst = std::max(worst, std::abs(total * state.joint()[a * d + b]));
    }
  return worst;
}

}  // namespace qtl::horizon
