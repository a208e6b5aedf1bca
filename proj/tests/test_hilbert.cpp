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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qtl/hilbert.hpp"
#include "qtl/stats.hpp"

using namespace qtl;
using oracle::error_code_of;

namespace {

CVector vec(std::initializer_list<Complex> xs) {
  CVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (Complex x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("uniform states are normalized and n = 1 is a phase") {
  RngStream rng(1);
  for (Index n : {1, 2, 5, 64}) {
    const auto psi = sample_uniform_state(n, rng);
    CHECK(std::abs(psi.amplitudes().squaredNorm() - 1.0) < 1e-12);
  }
  CHECK(std::abs(std::abs(sample_uniform_state(1, rng)[0]) - 1.0) < 1e-12);
  CHECK(error_code_of([&] { sample_uniform_state(0, rng); }) == ErrorCode::InvalidDimension);
}

TEST_CASE("mean |a_1|^2 is 1/4 at n = 4") {
  RngStream rng(2);
  double sum = 0.0;
  const int samples = 100000;
  for (int s = 0; s < samples; ++s) sum += std::norm(sample_uniform_state(4, rng)[0]);
  CHECK(std::abs(sum / samples - 0.25) < 0.005);
}

TEST_CASE("Haar bases are unitary and their columns are uniform states") {
  RngStream rng(3);
  for (Index n : {1, 2, 7, 32}) CHECK(sample_haar_basis(n, rng).unitarity_defect() < 1e-10);
  CHECK(std::abs(std::abs(sample_haar_basis(1, rng).columns()(0, 0)) - 1.0) < 1e-12);
  double sum = 0.0;
  const int samples = 100000;
  for (int s = 0; s < samples; ++s) sum += std::norm(sample_haar_basis(2, rng).columns()(0, 0));
  CHECK(std::abs(sum / samples - 0.5) < 0.005);
  CHECK(error_code_of([&] { sample_haar_basis(0, rng); }) == ErrorCode::InvalidDimension);
}

TEST_CASE("GUE draws are Hermitian with centered entries") {
  RngStream rng(4);
  const auto h = sample_gue(5, 0.7, rng);
  CHECK((h.entries() - h.entries().adjoint()).norm() == 0.0);
  std::vector<double> d00;
  for (int s = 0; s < 100000; ++s) d00.push_back(sample_gue(2, 1.0, rng).entries()(0, 0).real());
  const auto est = stats::mean_estimate(d00);
  CHECK(std::abs(est.value) < 3.0 * est.standard_error);
  CHECK(std::abs(stats::stddev(d00) - 1.0) < 0.01);
  CHECK(error_code_of([&] { sample_gue(3, 0.0, rng); }) == ErrorCode::InvalidParameter);
  CHECK(error_code_of([&] { sample_gue(3, -1.0, rng); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("GUE spectrum follows the semicircle quartiles") {
  RngStream rng(5);
  const Index n = 64;
  const double radius = 2.0 * std::sqrt(static_cast<double>(n));
  std::vector<double> eigenvalues;
  for (int s = 0; s < 1000; ++s) {
    const auto eig = sample_gue(n, 1.0, rng).eigensystem();
    for (Index i = 0; i < n; ++i) eigenvalues.push_back(eig->values(i));
  }
  const double q1 = oracle::quantile(eigenvalues, 0.25);
  const double q2 = oracle::quantile(eigenvalues, 0.5);
  const double q3 = oracle::quantile(eigenvalues, 0.75);
  const double want_q3 = oracle::semicircle_quantile(0.75, radius);
  CHECK(std::abs(q3 - want_q3) / want_q3 < 0.05);
  CHECK(std::abs(q1 + want_q3) / want_q3 < 0.05);
  CHECK(std::abs(q2) < 0.05 * radius);
}

TEST_CASE("expectation values") {
  RngStream rng(6);
  const auto psi = sample_uniform_state(6, rng);
  CHECK(expectation(psi, HermitianOperator::identity(6)) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<double> pm = {1.0, -1.0};
  CHECK(expectation(PureState::basis_state(2, 0), HermitianOperator::diagonal(pm)) == 1.0);
  const std::vector<double> d31 = {3.0, 1.0};
  const auto plus = PureState(vec({M_SQRT1_2, M_SQRT1_2}));
  CHECK(expectation(plus, HermitianOperator::diagonal(d31)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(expectation(plus, HermitianOperator(HermitianOperator::diagonal(d31).entries())) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(error_code_of([&] { expectation(psi, HermitianOperator::identity(3)); }) == ErrorCode::Shape);
}

TEST_CASE("operator validation") {
  CMatrix m(2, 2);
  m << 1.0, Complex(0, 1), Complex(0, 1), 2.0;
  CHECK(error_code_of([&] { HermitianOperator{m}; }) == ErrorCode::InvariantViolation);
  CHECK(error_code_of([&] { PureState{vec({1.0, 1.0})}; }) == ErrorCode::InvariantViolation);
  CHECK(error_code_of([&] { PureState::normalized(CVector::Zero(3)); }) == ErrorCode::InvalidParameter);
  CMatrix bad = CMatrix::Identity(2, 2);
  CHECK(error_code_of([&] { DensityMatrix{bad}; }) == ErrorCode::InvariantViolation);
  CMatrix negative(2, 2);
  negative << 1.5, 0.0, 0.0, -0.5;
  CHECK(error_code_of([&] { DensityMatrix(negative).eigenvalues(); }) == ErrorCode::InvariantViolation);
}

TEST_CASE("cached eigensystem reconstructs the operator") {
  RngStream rng(7);
  const auto h = sample_gue(12, 2.0, rng).diagonalized();
  const auto eig = h.eigensystem();
  const CMatrix rebuilt = eig->vectors * eig->values.asDiagonal() * eig->vectors.adjoint();
  CHECK((rebuilt - h.entries()).norm() / h.entries().norm() < 1e-10);
}

TEST_CASE("density_of gives rank-one projectors") {
  const auto rho = density_of(PureState::basis_state(2, 0));
  CHECK(rho(0, 0) == Complex(1.0));
  CHECK(rho(1, 1) == Complex(0.0));
  const auto plus = density_of(PureState(vec({M_SQRT1_2, M_SQRT1_2})));
  for (Index r = 0; r < 2; ++r)
    for (Index c = 0; c < 2; ++c) CHECK(std::abs(plus(r, c) - 0.5) < 1e-15);
  RngStream rng(8);
  const auto any = density_of(sample_uniform_state(9, rng));
  CHECK((any.entries() * any.entries() - any.entries()).norm() < 1e-10);
}

TEST_CASE("partial trace of products, Bell states and random matrices") {
  RngStream rng(9);
  const CMatrix a = oracle::random_density(2, rng);
  const CMatrix b = oracle::random_density(3, rng);
  CMatrix ab(6, 6);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) ab.block(3 * i, 3 * j, 3, 3) = a(i, j) * b;
  const std::vector<Index> dims = {2, 3};
  const std::vector<Index> keep_a = {0}, keep_b = {1};
  CHECK((partial_trace(DensityMatrix(ab), dims, keep_a).entries() - a).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((partial_trace(DensityMatrix(ab), dims, keep_b).entries() - b).cwiseAbs().maxCoeff() < 1e-12);

  const PureState bell(vec({M_SQRT1_2, 0.0, 0.0, M_SQRT1_2}));
  const std::vector<Index> qubits = {2, 2};
  const auto half = partial_trace(bell, qubits, keep_a);
  CHECK((half.entries() - 0.5 * CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

  const CMatrix r4 = oracle::random_density(4, rng);
  for (const auto& keep : {keep_a, keep_b}) {
    const CMatrix got = partial_trace(DensityMatrix(r4), qubits, keep).entries();
    CHECK((got - oracle::partial_trace(r4, {2, 2}, keep)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(got.trace() - 1.0) < 1e-12);
  }
}

TEST_CASE("partial trace errors") {
  const DensityMatrix rho(CMatrix::Identity(4, 4) / 4.0);
  const std::vector<Index> dims = {2, 2}, wrong = {2, 3}, none = {}, out_of_range = {2};
  const std::vector<Index> keep = {0};
  CHECK(error_code_of([&] { partial_trace(rho, wrong, keep); }) == ErrorCode::Shape);
  CHECK(error_code_of([&] { partial_trace(rho, dims, none); }) == ErrorCode::InvalidParameter);
  CHECK(error_code_of([&] { partial_trace(rho, dims, out_of_range); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("partial trace composes and keeps every factor consistently") {
  RngStream rng(10);
  const std::vector<Index> dims = {2, 3, 2};
  const DensityMatrix rho(oracle::random_density(12, rng, 4));
  const std::vector<Index> all = {0, 1, 2};
  CHECK((partial_trace(rho, dims, all).entries() - rho.entries()).cwiseAbs().maxCoeff() < 1e-15);

  const std::vector<Index> keep_ab = {0, 1}, keep_a = {0}, ab = {2, 3};
  const auto step = partial_trace(partial_trace(rho, dims, keep_ab), ab, keep_a);
  const auto direct = partial_trace(rho, dims, keep_a);
  CHECK((step.entries() - direct.entries()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(direct.entries().trace() - 1.0) < 1e-12);

  for (unsigned mask = 1; mask < 8; ++mask) {
    std::vector<Index> keep;
    for (Index f = 0; f < 3; ++f)
      if (mask & (1u << f)) keep.push_back(f);
    CHECK((partial_trace(rho, dims, keep).entries() - oracle::partial_trace(rho.entries(), dims, keep))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    const auto psi = sample_uniform_state(12, rng);
    CHECK((partial_trace(psi, dims, keep).entries() - partial_trace(density_of(psi), dims, keep).entries())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("von Neumann entropy values and Schmidt symmetry") {
  RngStream rng(11);
  CHECK(std::abs(von_neumann_entropy(density_of(sample_uniform_state(8, rng)))) < 1e-9);
  CHECK(von_neumann_entropy(DensityMatrix(CMatrix::Identity(2, 2) / 2.0)) ==
        doctest::Approx(std::numbers::ln2).epsilon(1e-14));
  const std::vector<double> p = {2.0 / 3.0, 1.0 / 3.0};
  CHECK(von_neumann_entropy(DensityMatrix::diagonal(p)) ==
        doctest::Approx(std::log(3.0) - 2.0 / 3.0 * std::numbers::ln2).epsilon(1e-14));
  CHECK(von_neumann_entropy(DensityMatrix::diagonal(p)) == doctest::Approx(0.636514).epsilon(1e-6));
  CHECK(shannon_entropy(p) == doctest::Approx(von_neumann_entropy(DensityMatrix::diagonal(p))).epsilon(1e-14));

  const std::vector<Index> dims = {3, 5}, keep_a = {0}, keep_b = {1};
  for (int trial = 0; trial < 5; ++trial) {
    const auto psi = sample_uniform_state(15, rng);
    CHECK(std::abs(von_neumann_entropy(partial_trace(psi, dims, keep_a)) -
                   von_neumann_entropy(partial_trace(psi, dims, keep_b))) < 1e-9);
  }
}

TEST_CASE("trace distance") {
  RngStream rng(12);
  const DensityMatrix rho(oracle::random_density(5, rng));
  CHECK(trace_distance(rho, rho) < 1e-15);
  CHECK(trace_distance(density_of(PureState::basis_state(3, 0)), density_of(PureState::basis_state(3, 2))) ==
        doctest::Approx(1.0).epsilon(1e-14));
  const std::vector<double> a = {0.7, 0.3}, b = {0.5, 0.5};
  CHECK(trace_distance(DensityMatrix::diagonal(a), DensityMatrix::diagonal(b)) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(error_code_of([&] { trace_distance(rho, DensityMatrix::diagonal(a)); }) == ErrorCode::Shape);
}

TEST_CASE("Gibbs states") {
  const std::vector<EnergyLevel> two = {{0.0, 1}, {1.0, 1}};
  const auto g = gibbs_state(two, std::numbers::ln2);
  CHECK(g(0, 0).real() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(g(1, 1).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  const std::vector<EnergyLevel> degenerate = {{0.0, 2}, {0.5, 3}, {4.0, 1}};
  const auto flat = gibbs_state(degenerate, 0.0);
  for (Index i = 0; i < 6; ++i) CHECK(flat(i, i).real() == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  for (double beta : {-3.0, 0.1, 50.0, 1e4}) CHECK(std::abs(gibbs_state(degenerate, beta).entries().trace() - 1.0) < 1e-12);
  const std::vector<EnergyLevel> empty;
  CHECK(error_code_of([&] { gibbs_state(empty, 1.0); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("evolve: exact phases, oracle agreement and conservation") {
  RngStream rng(13);
  const auto psi0 = sample_uniform_state(6, rng);
  const auto h = sample_gue(6, 1.0, rng);
  CHECK(evolve(h, psi0, 0.0).amplitudes() == psi0.amplitudes());

  const std::vector<double> d01 = {0.0, 1.0};
  const PureState plus(vec({M_SQRT1_2, M_SQRT1_2}));
  const PureState minus(vec({M_SQRT1_2, -M_SQRT1_2}));
  const auto out = evolve(HermitianOperator::diagonal(d01), plus, std::numbers::pi);
  CHECK(std::abs(std::abs(minus.amplitudes().dot(out.amplitudes())) - 1.0) < 1e-10);

  const auto evolved = evolve(h, psi0, 0.37);
  CHECK((evolved.amplitudes() - oracle::series_propagate(h.entries(), psi0.amplitudes(), 0.37)).norm() < 1e-8);

  for (double t : {0.5, 3.0, 40.0}) {
    const auto psi_t = evolve(h, psi0, t);
    CHECK(std::abs(psi_t.amplitudes().norm() - 1.0) < 1e-10);
    CHECK(std::abs(expectation(psi_t, h) - expectation(psi0, h)) < 1e-9);
  }
  CHECK(error_code_of([&] { evolve(h, PureState::basis_state(3, 0), 1.0); }) == ErrorCode::Shape);
}

TEST_CASE("Haar invariance: rotated states and rotated operators agree in distribution") {
  RngStream rng(14);
  const Index n = 6;
  const auto u = sample_haar_basis(n, rng).columns();
  const std::vector<double> f = {0.0, 1.0, 2.0, -1.0, 0.5, 3.0};
  const auto op = HermitianOperator::diagonal(f);
  const auto rotated = op.conjugated(u);
  RngStream a = rng.substream(1), b = rng.substream(2);
  std::vector<double> xs, ys;
  for (int s = 0; s < 10000; ++s) {
    xs.push_back(expectation(PureState(u * sample_uniform_state(n, a).amplitudes()), op));
    ys.push_back(expectation(sample_uniform_state(n, b), rotated));
  }
  CHECK(oracle::ks_statistic(xs, ys) < 1.628 * std::sqrt(2.0 / 10000.0));
}

TEST_CASE("RngStream reproducibility") {
  RngStream a(99, 3), b(99, 3), c(99, 4);
  bool all_equal = true, any_differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal(), y = b.normal(), z = c.normal();
    all_equal = all_equal && x == y;
    any_differs = any_differs || x != z;
  }
  CHECK(all_equal);
  CHECK(any_differs);
  CHECK(RngStream(5).substream(7).next_u64() == RngStream(5).substream(7).next_u64());
}
