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

#include "qtl/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qtl {
namespace {

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() == 0) throw Error(ErrorCode::InvalidDimension, std::string(what) + " is empty");
  if (m.rows() != m.cols()) throw Error(ErrorCode::Shape, std::string(what) + " is not square");
}

void require_hermitian(const CMatrix& m, const char* what) {
  const double defect = max_abs(m - m.adjoint());
  if (defect > kHermiticityTolerance * std::max(1.0, max_abs(m)))
    throw Error(ErrorCode::InvariantViolation,
                std::string(what) + " is not Hermitian (defect " + std::to_string(defect) + ")");
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

struct FactorLayout {
  std::vector<Index> kept_of;    // full index -> kept flat index
  std::vector<Index> traced_of;  // full index -> traced flat index
  Index kept_dim = 1;
  Index traced_dim = 1;
};

FactorLayout layout_for(Index total, std::span<const Index> dims, std::span<const Index> keep) {
  if (keep.empty()) throw Error(ErrorCode::InvalidParameter, "partial_trace: empty keep set");
  Index product = 1;
  for (Index d : dims) {
    if (d < 1) throw Error(ErrorCode::Shape, "partial_trace: factor dimension < 1");
    product *= d;
  }
  if (product != total) throw Error(ErrorCode::Shape, "partial_trace: dims do not multiply to matrix size");
  std::vector<bool> kept(dims.size(), false);
  for (Index k : keep) {
    if (k < 0 || k >= static_cast<Index>(dims.size()))
      throw Error(ErrorCode::InvalidParameter, "partial_trace: keep index out of range");
    kept[k] = true;
  }

  FactorLayout layout;
  for (std::size_t f = 0; f < dims.size(); ++f)
    (kept[f] ? layout.kept_dim : layout.traced_dim) *= dims[f];
  layout.kept_of.resize(total);
  layout.traced_of.resize(total);
  for (Index full = 0; full < total; ++full) {
    Index rest = full;
    Index kept_stride = 1, traced_stride = 1, k_idx = 0, t_idx = 0;
    for (std::size_t f = dims.size(); f-- > 0;) {
      const Index digit = rest % dims[f];
      rest /= dims[f];
      if (kept[f]) {
        k_idx += digit * kept_stride;
        kept_stride *= dims[f];
      } else {
        t_idx += digit * traced_stride;
        traced_stride *= dims[f];
      }
    }
    layout.kept_of[full] = k_idx;
    layout.traced_of[full] = t_idx;
  }
  return layout;
}

}  // namespace

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 1) throw Error(ErrorCode::InvalidDimension, "state dimension must be >= 1");
  const double defect = std::abs(amplitudes_.squaredNorm() - 1.0);
  if (!(defect <= kNormTolerance))
    throw Error(ErrorCode::InvariantViolation, "state is not normalized (defect " + std::to_string(defect) + ")");
}

PureState PureState::normalized(CVector raw) {
  const double norm = raw.norm();
  if (raw.size() < 1) throw Error(ErrorCode::InvalidDimension, "state dimension must be >= 1");
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw Error(ErrorCode::InvalidParameter, "cannot normalize a zero or non-finite vector");
  raw /= norm;
  return PureState(std::move(raw));
}

PureState PureState::basis_state(Index n, Index k) {
  if (n < 1) throw Error(ErrorCode::InvalidDimension, "state dimension must be >= 1");
  if (k < 0 || k >= n) throw Error(ErrorCode::InvalidParameter, "basis index out of range");
  CVector v = CVector::Zero(n);
  v(k) = 1.0;
  return PureState(std::move(v));
}

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(CMatrix entries) {
  require_square(entries, "operator");
  require_hermitian(entries, "operator");
  entries_ = hermitian_part(entries);
  const CMatrix off = entries_ - CMatrix(entries_.diagonal().asDiagonal());
  diagonal_ = off.isZero(0.0);
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values) {
  CVector d(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) d(i) = values[i];
  return HermitianOperator(CMatrix(d.asDiagonal()));
}

HermitianOperator HermitianOperator::identity(Index n) {
  if (n < 1) throw Error(ErrorCode::InvalidDimension, "operator dimension must be >= 1");
  return HermitianOperator(CMatrix::Identity(n, n));
}

double HermitianOperator::trace() const { return entries_.trace().real(); }

std::shared_ptr<const Eigensystem> HermitianOperator::eigensystem() const {
  if (eigen_) return eigen_;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::InvariantViolation, "eigendecomposition failed");
  return std::make_shared<const Eigensystem>(Eigensystem{solver.eigenvalues(), solver.eigenvectors()});
}

HermitianOperator HermitianOperator::diagonalized() const {
  HermitianOperator copy = *this;
  copy.eigen_ = eigensystem();
  return copy;
}

HermitianOperator HermitianOperator::power(unsigned m) const {
  if (m == 0) return identity(dim());
  if (diagonal_) {
    CVector d = entries_.diagonal();
    for (Index i = 0; i < d.size(); ++i) d(i) = std::pow(d(i).real(), static_cast<double>(m));
    return HermitianOperator(CMatrix(d.asDiagonal()));
  }
  CMatrix result = entries_;
  for (unsigned k = 1; k < m; ++k) result = result * entries_;
  return HermitianOperator(hermitian_part(result));
}

HermitianOperator HermitianOperator::shifted(double c) const {
  CMatrix m = entries_;
  m.diagonal().array() += c;
  return HermitianOperator(std::move(m));
}

HermitianOperator HermitianOperator::scaled(double c) const {
  return HermitianOperator(CMatrix(entries_ * c));
}

HermitianOperator HermitianOperator::conjugated(const CMatrix& unitary) const {
  if (unitary.rows() != dim() || unitary.cols() != dim())
    throw Error(ErrorCode::Shape, "conjugation by a unitary of the wrong size");
  return HermitianOperator(hermitian_part(unitary.adjoint() * entries_ * unitary));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(CMatrix entries) {
  require_square(entries, "density matrix");
  require_hermitian(entries, "density matrix");
  const double trace_defect = std::abs(entries.trace() - Complex(1.0, 0.0));
  if (!(trace_defect <= kNormTolerance))
    throw Error(ErrorCode::InvariantViolation,
                "density matrix trace differs from 1 by " + std::to_string(trace_defect));
  entries_ = hermitian_part(entries);
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities) {
  CVector d(probabilities.size());
  for (std::size_t i = 0; i < probabilities.size(); ++i) d(i) = probabilities[i];
  return DensityMatrix(CMatrix(d.asDiagonal()));
}

RVector DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_, Eigen::EigenvaluesOnly);
  RVector values = solver.eigenvalues();
  if (values.minCoeff() < kNegativeEigenvalueFloor)
    throw Error(ErrorCode::InvariantViolation,
                "density matrix has eigenvalue " + std::to_string(values.minCoeff()));
  return values.cwiseMax(0.0);
}

// ---------------------------------------------------------------------------
// OrthonormalBasis

OrthonormalBasis::OrthonormalBasis(CMatrix columns) : columns_(std::move(columns)) {
  require_square(columns_, "basis");
  const double defect = unitarity_defect();
  if (!(defect < kUnitarityTolerance))
    throw Error(ErrorCode::InvariantViolation, "basis is not orthonormal (defect " + std::to_string(defect) + ")");
}

double OrthonormalBasis::unitarity_defect() const {
  const Index n = columns_.rows();
  return (columns_.adjoint() * columns_ - CMatrix::Identity(n, n)).norm();
}

// ---------------------------------------------------------------------------
// Sampling

PureState sample_uniform_state(Index n, RngStream& rng) {
  if (n < 1) throw Error(ErrorCode::InvalidDimension, "sample_uniform_state: n must be >= 1");
  CVector v(n);
  for (Index i = 0; i < n; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(i) = Complex(re, im);
  }
  return PureState::normalized(std::move(v));
}

OrthonormalBasis sample_haar_basis(Index n, RngStream& rng) {
  if (n < 1) throw Error(ErrorCode::InvalidDimension, "sample_haar_basis: n must be >= 1");
  CMatrix g(n, n);
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < n; ++r) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(r, c) = Complex(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix& packed = qr.matrixQR();
  // Fix the QR phase freedom so R has a positive real diagonal.
  for (Index c = 0; c < n; ++c) {
    const Complex r = packed(c, c);
    const double mag = std::abs(r);
    if (mag > 0.0) q.col(c) *= r / mag;
  }
  return OrthonormalBasis(std::move(q));
}

HermitianOperator sample_gue(Index n, double scale, RngStream& rng) {
  if (n < 1) throw Error(ErrorCode::InvalidDimension, "sample_gue: n must be >= 1");
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidParameter, "sample_gue: scale must be positive");
  const double off = scale / std::sqrt(2.0);
  CMatrix h(n, n);
  for (Index c = 0; c < n; ++c) {
    h(c, c) = scale * rng.normal();
    for (Index r = c + 1; r < n; ++r) {
      const double re = rng.normal();
      const double im = rng.normal();
      h(r, c) = Complex(off * re, off * im);
      h(c, r) = std::conj(h(r, c));
    }
  }
  return HermitianOperator(std::move(h));
}

// ---------------------------------------------------------------------------
// Expectations and reductions

double expectation(const PureState& state, const HermitianOperator& op) {
  if (state.dim() != op.dim()) throw Error(ErrorCode::Shape, "expectation: dimension mismatch");
  const CVector& psi = state.amplitudes();
  if (op.is_diagonal()) {
    double acc = 0.0;
    const CMatrix& m = op.entries();
    for (Index i = 0; i < psi.size(); ++i) acc += m(i, i).real() * std::norm(psi(i));
    return acc;
  }
  const Complex value = psi.dot(op.entries() * psi);
  const double scale = std::max(1.0, max_abs(op.entries()));
  if (std::abs(value.imag()) > 1e-10 * scale)
    throw Error(ErrorCode::InvariantViolation, "expectation has an imaginary residue");
  return value.real();
}

double expectation(const DensityMatrix& rho, const HermitianOperator& op) {
  if (rho.dim() != op.dim()) throw Error(ErrorCode::Shape, "expectation: dimension mismatch");
  return (rho.entries().transpose().cwiseProduct(op.entries())).sum().real();
}

DensityMatrix density_of(const PureState& state) {
  const CVector& psi = state.amplitudes();
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Index> dims,
                            std::span<const Index> keep) {
  const FactorLayout layout = layout_for(rho.dim(), dims, keep);
  std::vector<std::vector<Index>> groups(layout.traced_dim);
  for (Index full = 0; full < rho.dim(); ++full) groups[layout.traced_of[full]].push_back(full);

  CMatrix reduced = CMatrix::Zero(layout.kept_dim, layout.kept_dim);
  const CMatrix& m = rho.entries();
  for (const auto& group : groups)
    for (Index a : group)
      for (Index b : group) reduced(layout.kept_of[a], layout.kept_of[b]) += m(a, b);
  return DensityMatrix(std::move(reduced));
}

DensityMatrix partial_trace(const PureState& state, std::span<const Index> dims,
                            std::span<const Index> keep) {
  const FactorLayout layout = layout_for(state.dim(), dims, keep);
  CMatrix psi = CMatrix::Zero(layout.kept_dim, layout.traced_dim);
  for (Index full = 0; full < state.dim(); ++full)
    psi(layout.kept_of[full], layout.traced_of[full]) = state[full];
  return DensityMatrix(psi * psi.adjoint());
}

double shannon_entropy(std::span<const double> probabilities) {
  double s = 0.0;
  for (double p : probabilities)
    if (p > 0.0) s -= p * std::log(p);
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const RVector values = rho.eigenvalues();
  return shannon_entropy(std::span<const double>(values.data(), values.size()));
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorCode::Shape, "trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.entries() - sigma.entries(), Eigen::EigenvaluesOnly);
  return std::clamp(0.5 * solver.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

DensityMatrix gibbs_state(std::span<const EnergyLevel> levels, double beta) {
  if (levels.empty()) throw Error(ErrorCode::InvalidParameter, "gibbs_state: no levels");
  if (!std::isfinite(beta)) throw Error(ErrorCode::InvalidParameter, "gibbs_state: beta must be finite");
  // Shift exponents so the largest weight is exactly 1.
  double max_exponent = -std::numeric_limits<double>::infinity();
  std::uint64_t total = 0;
  for (const auto& level : levels) {
    if (level.degeneracy < 1) throw Error(ErrorCode::InvalidParameter, "gibbs_state: degeneracy < 1");
    max_exponent = std::max(max_exponent, -beta * level.energy);
    total += level.degeneracy;
  }
  std::vector<double> weights;
  weights.reserve(total);
  double z = 0.0;
  for (const auto& level : levels) {
    const double w = std::exp(-beta * level.energy - max_exponent);
    for (std::uint64_t k = 0; k < level.degeneracy; ++k) weights.push_back(w);
    z += static_cast<double>(level.degeneracy) * w;
  }
  for (double& w : weights) w /= z;
  return DensityMatrix::diagonal(weights);
}

PureState evolve(const HermitianOperator& hamiltonian, const PureState& psi0, double t) {
  if (hamiltonian.dim() != psi0.dim()) throw Error(ErrorCode::Shape, "evolve: dimension mismatch");
  if (t == 0.0) return psi0;
  const auto eig = hamiltonian.eigensystem();
  CVector coeffs = eig->vectors.adjoint() * psi0.amplitudes();
  for (Index k = 0; k < coeffs.size(); ++k)
    coeffs(k) *= std::polar(1.0, -eig->values(k) * t);
  return PureState(eig->vectors * coeffs);
}

}  // namespace qtl
