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

#ifndef QTL_HILBERT_HPP
#define QTL_HILBERT_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qtl/errors.hpp"
#include "qtl/rng.hpp"

namespace qtl {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kUnitarityTolerance = 1e-10;
inline constexpr double kNegativeEigenvalueFloor = -1e-10;

/// Unit-norm amplitude vector over an indexed basis.
class PureState {
 public:
  /// Throws InvalidDimension for empty input and InvariantViolation if the
  /// norm differs from one by more than kNormTolerance.
  explicit PureState(CVector amplitudes);

  /// Rescales `raw` to unit norm. Throws InvalidParameter on a zero vector.
  static PureState normalized(CVector raw);
  static PureState basis_state(Index n, Index k);

  Index dim() const noexcept { return amplitudes_.size(); }
  const CVector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](Index i) const { return amplitudes_(i); }

 private:
  CVector amplitudes_;
};

struct Eigensystem {
  RVector values;   // ascending
  CMatrix vectors;  // orthonormal columns
};

/// Dense self-adjoint matrix. Construction checks Hermiticity and then
/// stores the exactly Hermitian part.
class HermitianOperator {
 public:
  explicit HermitianOperator(CMatrix entries);

  static HermitianOperator diagonal(std::span<const double> values);
  static HermitianOperator identity(Index n);

  Index dim() const noexcept { return entries_.rows(); }
  const CMatrix& entries() const noexcept { return entries_; }
  bool is_diagonal() const noexcept { return diagonal_; }

  double trace() const;
  /// Cached eigensystem if present, otherwise a freshly computed one.
  std::shared_ptr<const Eigensystem> eigensystem() const;
  /// Copy of this operator with the eigensystem cache filled.
  HermitianOperator diagonalized() const;

  HermitianOperator power(unsigned m) const;
  HermitianOperator shifted(double c) const;
  HermitianOperator scaled(double c) const;
  /// U^dagger F U.
  HermitianOperator conjugated(const CMatrix& unitary) const;

 private:
  CMatrix entries_;
  bool diagonal_ = false;
  std::shared_ptr<const Eigensystem> eigen_;
};

/// Positive semidefinite, unit-trace matrix. Construction checks
/// Hermiticity and trace; positivity is checked where spectra are used.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix entries);

  static DensityMatrix diagonal(std::span<const double> probabilities);

  Index dim() const noexcept { return entries_.rows(); }
  const CMatrix& entries() const noexcept { return entries_; }
  Complex operator()(Index r, Index c) const { return entries_(r, c); }

  /// Eigenvalues ascending, clamped at zero. Throws InvariantViolation if
  /// any is below kNegativeEigenvalueFloor.
  RVector eigenvalues() const;

 private:
  CMatrix entries_;
};

/// Unitary matrix whose columns form an orthonormal basis.
class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(CMatrix columns);

  Index dim() const noexcept { return columns_.rows(); }
  const CMatrix& columns() const noexcept { return columns_; }
  double unitarity_defect() const;

 private:
  CMatrix columns_;
};

struct EnergyLevel {
  double energy = 0.0;
  std::uint64_t degeneracy = 1;
};

PureState sample_uniform_state(Index n, RngStream& rng);
OrthonormalBasis sample_haar_basis(Index n, RngStream& rng);
HermitianOperator sample_gue(Index n, double scale, RngStream& rng);

double expectation(const PureState& state, const HermitianOperator& op);
/// tr(rho A)
double expectation(const DensityMatrix& rho, const HermitianOperator& op);

DensityMatrix density_of(const PureState& state);

/// Reduced density matrix on the factors listed in `keep` (kept factors
/// appear in ascending factor order). Factor 0 is the most significant
/// index of the row-major flattening.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Index> dims,
                            std::span<const Index> keep);
/// Same contraction computed from the amplitudes, never forming |psi><psi|.
DensityMatrix partial_trace(const PureState& state, std::span<const Index> dims,
                            std::span<const Index> keep);

/// Nats; 0 ln 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);
double shannon_entropy(std::span<const double> probabilities);

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Diagonal thermal state; each level contributes `degeneracy` basis
/// states, ordered as listed.
DensityMatrix gibbs_state(std::span<const EnergyLevel> levels, double beta);

/// exp(-i H t) |psi0> with hbar = 1, via the spectral decomposition of H.
PureState evolve(const HermitianOperator& hamiltonian, const PureState& psi0, double t);

}  // namespace qtl

#endif  // QTL_HILBERT_HPP
