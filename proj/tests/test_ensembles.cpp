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
#include "qtl/ensembles.hpp"

using namespace qtl;
using namespace qtl::ensembles;
using oracle::error_code_of;

namespace {

DegeneracySpectrum spectrum(std::initializer_list<std::pair<double, std::uint64_t>> levels) {
  std::vector<SpectrumLevel> out;
  for (const auto& [e, d] : levels) out.push_back({e, std::nullopt, d});
  return DegeneracySpectrum(out);
}

DegeneracySpectrum power_bath(double base, int max_energy) {
  std::vector<SpectrumLevel> out;
  for (int e = 0; e <= max_energy; ++e)
    out.push_back({static_cast<double>(e), std::nullopt, static_cast<std::uint64_t>(std::llround(std::pow(base, e)))});
  return DegeneracySpectrum(out);
}

// ln d_B(E, Q) = E ln 2 + Q ln 3 on a grid.
DegeneracySpectrum charged_bath(int max_e, int max_q) {
  std::vector<SpectrumLevel> out;
  for (int e = 0; e <= max_e; ++e)
    for (int q = 0; q <= max_q; ++q)
      out.push_back({static_cast<double>(e), q, static_cast<std::uint64_t>(std::llround(std::pow(2.0, e) * std::pow(3.0, q)))});
  return DegeneracySpectrum(out);
}

DegeneracySpectrum charged_system() {
  std::vector<SpectrumLevel> out;
  for (int e = 0; e <= 2; ++e)
    for (int q = 0; q <= 1; ++q) out.push_back({static_cast<double>(e), q, static_cast<std::uint64_t>(1 + e)});
  return DegeneracySpectrum(out);
}

const DegeneracySpectrum kSmallA = spectrum({{0, 1}, {1, 1}});
const DegeneracySpectrum kSmallB = spectrum({{0, 1}, {1, 2}, {2, 4}});

}  // namespace

TEST_CASE("spectrum validation") {
  CHECK(error_code_of([] { spectrum({{0, 1}, {0, 2}}); }) == ErrorCode::InvalidParameter);
  CHECK(error_code_of([] { spectrum({{0, 0}}); }) == ErrorCode::InvalidParameter);
  CHECK(error_code_of([] { DegeneracySpectrum(std::vector<SpectrumLevel>{{0.0, 1, 1}, {1.0, std::nullopt, 1}}); }) ==
        ErrorCode::InvalidParameter);
  const auto s = spectrum({{0, 3}, {2, 5}});
  CHECK(s.total_dimension() == 8);
  CHECK(s.offset(1) == 3);
  CHECK(s.entropy(1) == doctest::Approx(std::log(5.0)));
  CHECK(s.find(2.0 + 1e-12, std::nullopt) == std::optional<std::size_t>(1));
  CHECK_FALSE(s.find(1.0, std::nullopt).has_value());
}

TEST_CASE("shell construction") {
  const auto shell = build_shell(kSmallA, kSmallB, 2.0);
  CHECK(shell.n == 6);
  CHECK(shell.level_count(0) == 4);
  CHECK(shell.level_count(1) == 2);
  std::uint64_t next = 0;
  for (const auto& block : shell.blocks) {
    CHECK(block.offset == next);
    CHECK(kSmallA[block.a_level].energy + kSmallB[block.b_level].energy == doctest::Approx(2.0));
    next += block.size();
  }
  CHECK(next == shell.n);

  const auto ground = spectrum({{0, 1}});
  CHECK(build_shell(ground, ground, 0.0).n == 1);
  CHECK(error_code_of([&] { build_shell(kSmallA, kSmallB, 7.5); }) == ErrorCode::NoCompatibleStates);
}

TEST_CASE("shell states") {
  RngStream rng(40);
  const auto ground = spectrum({{0, 1}});
  const auto one = build_shell(ground, ground, 0.0);
  CHECK(std::abs(std::abs(sample_shell_state(one, rng)[0]) - 1.0) < 1e-12);

  const auto shell = build_shell(kSmallA, kSmallB, 2.0);
  std::vector<double> mean(6, 0.0);
  const int samples = 100000;
  double worst_norm = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto psi = sample_shell_state(shell, rng);
    worst_norm = std::max(worst_norm, std::abs(psi.amplitudes().squaredNorm() - 1.0));
    for (Index i = 0; i < 6; ++i) mean[i] += std::norm(psi[i]) / samples;
  }
  CHECK(worst_norm < 1e-12);
  for (double m : mean) CHECK(std::abs(m - 1.0 / 6.0) < 0.002);
}

TEST_CASE("reduction to A") {
  RngStream rng(41);
  const auto a = spectrum({{0, 3}});
  const auto b = spectrum({{0, 4}});
  const auto single = build_shell(a, b, 0.0);
  const std::vector<Index> dims = {3, 4}, keep = {0};
  for (int trial = 0; trial < 5; ++trial) {
    const auto psi = sample_shell_state(single, rng);
    CHECK((reduce_to_A(psi, single, a).entries() - partial_trace(psi, dims, keep).entries()).cwiseAbs().maxCoeff() <
          1e-12);
  }

  const auto a2 = spectrum({{0, 2}, {1, 3}});
  const auto b2 = spectrum({{0, 2}, {1, 2}, {2, 5}});
  const auto shell = build_shell(a2, b2, 1.0);
  // Put all weight on (level E=1, k=2, l=1).
  for (const auto& block : shell.blocks) {
    if (block.a_level != 1) continue;
    const std::uint64_t flat = block.offset + 2 * block.d_b + 1;
    const auto rho = reduce_to_A(PureState::basis_state(static_cast<Index>(shell.n), static_cast<Index>(flat)), shell, a2);
    CMatrix want = CMatrix::Zero(5, 5);
    want(2 + 2, 2 + 2) = 1.0;
    CHECK((rho.entries() - want).cwiseAbs().maxCoeff() == 0.0);
  }

  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = reduce_to_A(sample_shell_state(shell, rng), shell, a2);
    CHECK(off_block_norm(rho, a2) < 1e-14);
    CHECK(std::abs(rho.entries().trace() - 1.0) < 1e-12);
  }
  CHECK(error_code_of([&] { reduce_to_A(PureState::basis_state(3, 0), shell, a2); }) == ErrorCode::Shape);
}

TEST_CASE("populations") {
  const auto shell = build_shell(kSmallA, kSmallB, 2.0);
  const auto predicted = predicted_populations(shell, kSmallA);
  REQUIRE(predicted.levels.size() == 2);
  CHECK(predicted.levels[0].p_predicted == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(predicted.levels[1].p_predicted == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(predicted.levels[0].fluctuation_scale == doctest::Approx(2.0 / 6.0));
  std::uint64_t n_sum = 0;
  for (const auto& l : predicted.levels) n_sum += l.n_i;
  CHECK(n_sum == shell.n);

  const auto a = spectrum({{0, 2}});
  const auto single = build_shell(a, spectrum({{1, 3}}), 1.0);
  RngStream rng(42);
  const auto one = energy_populations(reduce_to_A(sample_shell_state(single, rng), single, a), single, a);
  CHECK(one.levels.at(0).p_observed == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> p0;
  for (int s = 0; s < 1000; ++s) {
    const auto rho = reduce_to_A(sample_shell_state(shell, rng), shell, kSmallA);
    const auto report = energy_populations(rho, shell, kSmallA);
    CHECK(std::abs(report.levels[0].p_observed + report.levels[1].p_observed - 1.0) < 1e-10);
    p0.push_back(report.levels[0].p_observed);
  }
  const auto est = stats::mean_estimate(p0);
  CHECK(std::abs(est.value - 2.0 / 3.0) <= 5.0 * est.standard_error);

  // Level E=1 of a 2-level A spectrum carries no weight when only E=0 is in the shell.
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(1, 1) = 1.0;
  const auto ground_shell = build_shell(kSmallA, spectrum({{0, 1}}), 0.0);
  CHECK(error_code_of([&] { energy_populations(DensityMatrix(rho), ground_shell, kSmallA); }) ==
        ErrorCode::Inconsistency);
}

TEST_CASE("bath temperature by finite differences") {
  const auto pow2 = bath_temperature(power_bath(2.0, 10), 5.0);
  CHECK(pow2.temperature == doctest::Approx(1.0 / std::numbers::ln2).epsilon(1e-12));
  CHECK(pow2.temperature == doctest::Approx(1.442695).epsilon(1e-6));
  CHECK(bath_temperature(power_bath(2.0, 10), 10.0).slope == doctest::Approx(std::numbers::ln2).epsilon(1e-12));

  const auto flat = bath_temperature(spectrum({{0, 7}, {1, 7}, {2, 7}}), 1.0);
  CHECK(flat.infinite);
  CHECK(std::isinf(flat.temperature));

  // Energies k ln 2 with degeneracy 2^k: ln d = E exactly.
  std::vector<SpectrumLevel> levels;
  for (int k = 0; k <= 8; ++k) levels.push_back({k * std::numbers::ln2, std::nullopt, std::uint64_t{1} << k});
  CHECK(bath_temperature(DegeneracySpectrum(levels), 4 * std::numbers::ln2).temperature ==
        doctest::Approx(1.0).epsilon(1e-12));

  const auto falling = bath_temperature(spectrum({{0, 8}, {1, 4}, {2, 2}}), 1.0);
  CHECK(falling.negative);
  CHECK(falling.temperature < 0.0);
}

TEST_CASE("canonical form fit") {
  // Exact Boltzmann data for d_A = (1, 2, 3) at T = 0.8.
  const auto a = spectrum({{0, 1}, {1, 2}, {2, 3}});
  const double t = 0.8;
  PopulationReport report;
  double z = 0.0;
  for (std::size_t i = 0; i < 3; ++i) z += a[i].degeneracy * std::exp(-a[i].energy / t);
  for (std::size_t i = 0; i < 3; ++i) {
    LevelPopulation l;
    l.a_level = i;
    l.energy = a[i].energy;
    l.d_a = a[i].degeneracy;
    l.p_observed = a[i].degeneracy * std::exp(-a[i].energy / t) / z;
    report.levels.push_back(l);
  }
  const auto fit = canonical_form_check(report, a, t);
  CHECK(fit.beta == doctest::Approx(1.0 / t).epsilon(1e-12));
  CHECK(fit.residual_norm < 1e-12);
  CHECK(fit.consistent);

  const auto shell = build_shell(kSmallA, kSmallB, 2.0);
  const auto small = canonical_form_check(predicted_populations(shell, kSmallA), kSmallA, 1.0 / std::numbers::ln2);
  CHECK(small.temperature == doctest::Approx(1.0 / std::numbers::ln2).epsilon(1e-12));

  PopulationReport lone;
  lone.levels.push_back(report.levels[0]);
  CHECK(error_code_of([&] { canonical_form_check(lone, a, t); }) == ErrorCode::UnderdeterminedFit);
}

TEST_CASE("sampled canonical experiment") {
  RngStream rng(43);
  const auto a = spectrum({{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  const auto ex = canonical_experiment(a, power_bath(2.0, 10), 10.0, 1000, rng);
  CHECK(ex.shell.n == 3328);
  CHECK(ex.max_off_block_norm < 1e-14);
  for (std::size_t i = 0; i < ex.predicted.levels.size(); ++i) {
    const auto& level = ex.predicted.levels[i];
    CHECK(std::abs(ex.sampled[i].p_mean - level.p_predicted) <= 4.0 * ex.sampled[i].p_mean_error);
    const double ratio = ex.sampled[i].p_std / level.fluctuation_scale;
    CHECK(ratio > 0.5);
    CHECK(ratio < 2.0);
    // The sampled spread tracks the exact prefactor much more tightly.
    CHECK(std::abs(ex.sampled[i].p_std / level.fluctuation_exact - 1.0) < 0.15);
  }
  CHECK(std::abs(ex.sampled_beta.value - std::numbers::ln2) <= 4.0 * ex.sampled_beta.standard_error);
}

TEST_CASE("property: fluctuations within a factor 2 of sqrt(n_i)/n on shells without a dominant block") {
  RngStream rng(44);
  int checked = 0;
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<SpectrumLevel> levels;
    for (int e = 0; e <= 3; ++e)
      levels.push_back({static_cast<double>(e), std::nullopt, 1 + static_cast<std::uint64_t>(rng.uniform() * 6)});
    const DegeneracySpectrum a(levels);
    const double base = 1.5 + rng.uniform() * 1.5;
    const auto b = power_bath(base, 9);
    const auto predicted = predicted_populations(build_shell(a, b, 9.0), a);
    bool dominant = false;
    for (const auto& l : predicted.levels) dominant = dominant || l.p_predicted > 0.7;
    if (dominant) continue;
    RngStream local = rng.substream(trial);
    const auto ex = canonical_experiment(a, b, 9.0, 400, local);
    for (std::size_t i = 0; i < ex.predicted.levels.size(); ++i) {
      if (ex.predicted.levels[i].n_i < 50) continue;
      const double ratio = ex.sampled[i].p_std / ex.predicted.levels[i].fluctuation_scale;
      CHECK(ratio > 0.5);
      CHECK(ratio < 2.0);
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("grand canonical recovery") {
  const auto a = charged_system();
  const auto b = charged_bath(6, 3);
  const auto bath = bath_derivatives(b, 6.0, 3);
  CHECK(bath.temperature() == doctest::Approx(1.0 / std::numbers::ln2).epsilon(1e-12));
  CHECK(bath.potential() == doctest::Approx(-std::log(3.0) / std::numbers::ln2).epsilon(1e-12));

  RngStream rng(45);
  const auto exact = grand_shell_check(a, b, 6.0, 3, rng, 0);
  REQUIRE(exact.predicted_fit.potential.has_value());
  CHECK(std::abs(exact.predicted_fit.temperature * std::numbers::ln2 - 1.0) < 1e-10);
  CHECK(std::abs(*exact.predicted_fit.potential / (-std::log(3.0) / std::numbers::ln2) - 1.0) < 1e-10);
  CHECK(exact.predicted_fit.consistent);

  const auto sampled = grand_shell_check(a, b, 6.0, 3, rng, 500);
  for (const auto& level : sampled.predicted.levels) CHECK(level.n_i >= 100);
  CHECK(std::abs(sampled.sampled_beta.value - std::numbers::ln2) <= 4.0 * sampled.sampled_beta.standard_error);
  REQUIRE(sampled.sampled_beta_potential.has_value());
  CHECK(std::abs(sampled.sampled_beta_potential->value + std::log(3.0)) <=
        4.0 * sampled.sampled_beta_potential->standard_error);
}

TEST_CASE("grand fit with a single charge reduces to the canonical fit") {
  std::vector<SpectrumLevel> sys;
  for (int e = 0; e <= 2; ++e) sys.push_back({static_cast<double>(e), 1, 1});
  const DegeneracySpectrum a(sys);
  const auto b = charged_bath(6, 3);
  RngStream rng(46);
  const auto ex = grand_shell_check(a, b, 6.0, 3, rng, 0);
  CHECK_FALSE(ex.predicted_fit.potential.has_value());
  const auto canonical =
      canonical_form_check(ex.predicted, a, bath_derivatives(b, 6.0, 3).temperature());
  CHECK(ex.predicted_fit.beta == doctest::Approx(canonical.beta).epsilon(1e-14));
}

TEST_CASE("log-degeneracy slope") {
  const std::vector<std::pair<double, double>> pts = {{0, 0}, {1, 1}, {2, 4}, {4, 8}};
  CHECK(log_degeneracy_slope(pts, 1.0) == doctest::Approx(2.0));
  CHECK(log_degeneracy_slope(pts, 0.0) == doctest::Approx(1.0));
  CHECK(log_degeneracy_slope(pts, 4.0) == doctest::Approx(2.0));
  CHECK(log_degeneracy_slope(pts, 3.0) == doctest::Approx(2.0));
}
