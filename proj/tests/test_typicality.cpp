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

#include "oracles.hpp"
#include "qtl/typicality.hpp"

using namespace qtl;
using namespace qtl::typicality;
using oracle::error_code_of;

namespace {

HermitianOperator diag(std::vector<double> values) { return HermitianOperator::diagonal(values); }

bool within(const DeviationReport& r, double target, double sigmas) {
  return std::abs(r.mc_estimate - target) <= sigmas * r.mc_standard_error;
}

}  // namespace

TEST_CASE("closed-form typical deviation") {
  for (double c : {0.0, 1.0, -3.5})
    CHECK(typical_deviation_rms(HermitianOperator::identity(5).scaled(c)) == doctest::Approx(0.0));
  CHECK(typical_deviation_rms(diag({1, 0})) == doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-14));
  CHECK(typical_deviation_rms(diag({1, 0})) == doctest::Approx(0.288675).epsilon(1e-6));
  CHECK(typical_deviation_rms(diag({1, -1})) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
  CHECK(typical_deviation_rms(diag({1, 0, 0, 0})) == doctest::Approx(std::sqrt(3.0 / 16.0 / 5.0)).epsilon(1e-14));
}

TEST_CASE("n = 2 projector: |a_1|^2 is uniform on [0,1] so the variance is 1/12") {
  RngStream rng(20);
  double sum = 0.0, sum_sq = 0.0;
  const int samples = 200000;
  for (int s = 0; s < samples; ++s) {
    const double x = std::norm(sample_uniform_state(2, rng)[0]) - 0.5;
    sum += x;
    sum_sq += x * x;
  }
  CHECK(std::abs(sum_sq / samples - 1.0 / 12.0) < 0.002);
}

TEST_CASE("Monte Carlo deviation agrees with the closed form") {
  RngStream rng(21);
  const auto id = typical_deviation_mc(HermitianOperator::identity(3), 1000, rng);
  CHECK(id.mc_estimate == 0.0);
  CHECK(id.analytic_rms == 0.0);

  const auto two = typical_deviation_mc(diag({1, 0}), 100000, rng);
  CHECK(two.analytic_rms == doctest::Approx(0.288675).epsilon(1e-6));
  CHECK(two.mc_standard_error > 0.0);
  CHECK(within(two, 0.288675134594813, 3.0));

  const auto four = typical_deviation_mc(diag({1, 0, 0, 0}), 100000, rng);
  CHECK(within(four, 0.193649167310371, 3.0));
  CHECK(four.samples == 100000);
  CHECK(four.moment_order == 1);

  CHECK(error_code_of([&] { typical_deviation_mc(diag({1, 0}), 1, rng); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("spread and eigenvalue bound") {
  const auto sat = spread_bound(diag({1, -1}));
  CHECK(sat.spread == doctest::Approx(1.0));
  CHECK(sat.bound == doctest::Approx(1.0));
  const auto id = spread_bound(HermitianOperator::identity(4));
  CHECK(id.spread == doctest::Approx(0.0));
  CHECK(id.bound == doctest::Approx(1.0));
  RngStream rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.uniform() * 20);
    std::vector<double> f;
    for (Index i = 0; i < n; ++i) f.push_back(10.0 * (rng.uniform() - 0.3));
    const auto sb = spread_bound(diag(f));
    CHECK(sb.spread <= sb.bound + 1e-12);
  }
}

TEST_CASE("random-basis deviation") {
  RngStream rng(23);
  const auto flat = random_basis_deviation_mc(sample_uniform_state(3, rng), std::vector<double>{2, 2, 2}, 100, rng);
  CHECK(flat.mc_estimate == 0.0);

  const auto two =
      random_basis_deviation_mc(PureState::basis_state(2, 0), std::vector<double>{1, 0}, 100000, rng);
  CHECK(within(two, 0.288675134594813, 3.0));
  const auto four =
      random_basis_deviation_mc(sample_uniform_state(4, rng), std::vector<double>{1, 0, 0, 0}, 100000, rng);
  CHECK(within(four, 0.193649167310371, 3.0));

  const auto other =
      random_basis_deviation_mc(sample_uniform_state(4, rng), std::vector<double>{1, 0, 0, 0}, 100000, rng);
  CHECK(std::abs(four.mc_estimate - other.mc_estimate) <=
        4.0 * std::hypot(four.mc_standard_error, other.mc_standard_error));

  CHECK(error_code_of([&] {
          random_basis_deviation_mc(PureState::basis_state(2, 0), std::vector<double>{1, 0, 0}, 10, rng);
        }) == ErrorCode::Shape);
}

TEST_CASE("variance deviation") {
  CHECK(variance_deviation_rms(HermitianOperator::identity(3).scaled(4.0)) == doctest::Approx(0.0));
  CHECK(variance_deviation_rms(diag({1, -1})) == doctest::Approx(0.0));
  const auto f = diag({1, 0, 0, 0});
  const auto b = centered_square(f);
  const double rhs = variance_deviation_rms(f);
  CHECK(rhs > 0.0);
  CHECK(rhs == doctest::Approx(typical_deviation_rms(b)).epsilon(1e-14));
  // B = (F - 1/4)^2 = diag(9/16, 1/16, 1/16, 1/16).
  CHECK(rhs == doctest::Approx(typical_deviation_rms(diag({9.0 / 16, 1.0 / 16, 1.0 / 16, 1.0 / 16}))).epsilon(1e-14));
  RngStream rng(24);
  CHECK(within(typical_deviation_mc(b, 100000, rng), rhs, 3.0));
}

TEST_CASE("higher moments") {
  RngStream a(25), b(25);
  const auto f = diag({0.3, -1.2, 2.0});
  const auto m1 = moment_deviation(f, 1, 5000, a);
  const auto t1 = typical_deviation_mc(f, 5000, b);
  CHECK(m1.analytic_rms == t1.analytic_rms);
  CHECK(m1.mc_estimate == t1.mc_estimate);

  RngStream rng(26);
  const auto p2 = moment_deviation(diag({1, 0}), 2, 1000, rng);
  CHECK(p2.analytic_rms == doctest::Approx(0.288675134594813).epsilon(1e-14));
  CHECK(p2.moment_order == 2);

  const auto f210 = moment_deviation(diag({2, 1, 0}), 2, 100000, rng);
  // tr F^4/3 = 17/3, tr F^2/3 = 5/3.
  CHECK(f210.analytic_rms == doctest::Approx(std::sqrt((17.0 / 3.0 - 25.0 / 9.0) / 4.0)).epsilon(1e-14));
  CHECK(within(f210, f210.analytic_rms, 3.0));
  CHECK(error_code_of([&] { moment_deviation(diag({1, 0}), 0, 10, rng); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("property: squared estimate within 4 jackknife errors of the closed form") {
  RngStream rng(27);
  for (int trial = 0; trial < 6; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.uniform() * 10);
    const auto f = sample_gue(n, 1.0, rng);
    const auto r = typical_deviation_mc(f, 10000, rng);
    CHECK(std::abs(r.mc_mean_square - r.analytic_rms * r.analytic_rms) < 4.0 * r.mc_mean_square_error);
  }
}

TEST_CASE("property: closed form is unitarily invariant and shift invariant") {
  RngStream rng(28);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.uniform() * 12);
    const auto f = sample_gue(n, 1.5, rng);
    const double base = typical_deviation_rms(f);
    const auto u = sample_haar_basis(n, rng).columns();
    CHECK(std::abs(typical_deviation_rms(f.conjugated(u)) - base) < 1e-12);
    const double c = 20.0 * (rng.uniform() - 0.5);
    CHECK(std::abs(typical_deviation_rms(f.shifted(c)) - base) < 1e-10);
  }
}

TEST_CASE("sphere moments") {
  RngStream rng(29);
  for (Index n : {2, 8, 32}) {
    const auto m = sphere_moments(n, 100000, rng);
    const double nd = static_cast<double>(n);
    CHECK(std::abs(m.second - 1.0 / nd) <= 4.0 * m.second_error);
    CHECK(std::abs(m.fourth - 2.0 / (nd * (nd + 1))) <= 4.0 * m.fourth_error);
    CHECK(std::abs(m.cross - 1.0 / (nd * (nd + 1))) <= 4.0 * m.cross_error);
  }
}

TEST_CASE("scaling studies") {
  RngStream rng(30);
  std::vector<Index> dims;
  for (Index n = 2; n <= 256; n *= 2) dims.push_back(n);
  const auto alt = scaling_study(SpectrumFamily::Alternating, dims, 0, rng, false);
  REQUIRE(alt.slope.has_value());
  CHECK(std::abs(*alt.slope + 0.5) < 0.01);
  CHECK_FALSE(alt.degenerate);

  const auto flat = scaling_study(SpectrumFamily::Constant, dims, 0, rng, false);
  CHECK(flat.degenerate);
  CHECK_FALSE(flat.slope.has_value());
  for (const auto& row : flat.rows) CHECK(row.analytic == 0.0);

  const auto proj = scaling_study(SpectrumFamily::RankOneProjector, dims, 0, rng, false);
  for (const auto& row : proj.rows) {
    const double n = static_cast<double>(row.n);
    CHECK(std::abs(row.analytic - std::sqrt((1.0 / n - 1.0 / (n * n)) / (n + 1.0))) < 1e-12);
    CHECK_FALSE(row.mc.has_value());
  }

  const std::vector<Index> small = {2, 4};
  const auto with_mc = scaling_study(SpectrumFamily::RankOneProjector, small, 2000, rng);
  for (const auto& row : with_mc.rows) {
    REQUIRE(row.mc.has_value());
    CHECK(row.mc->samples == 2000);
  }

  CHECK(error_code_of([] { parse_family("quadratic"); }) == ErrorCode::Config);
  CHECK(parse_family("alternating") == SpectrumFamily::Alternating);
  const std::vector<Index> descending = {8, 4};
  CHECK(error_code_of([&] { scaling_study(SpectrumFamily::Alternating, descending, 0, rng, false); }) ==
        ErrorCode::InvalidParameter);
  CHECK(default_samples(64) == 100000);
  CHECK(default_samples(128) == 10000);
}

TEST_CASE("Monte Carlo results do not depend on the worker count") {
  const auto f = HermitianOperator::diagonal(std::vector<double>{1, 0, 0});
  setenv("QTL_THREADS", "1", 1);
  RngStream a(31);
  const auto one = typical_deviation_mc(f, 5000, a);
  setenv("QTL_THREADS", "4", 1);
  RngStream b(31);
  const auto four = typical_deviation_mc(f, 5000, b);
  unsetenv("QTL_THREADS");
  CHECK(one.mc_estimate == four.mc_estimate);
  CHECK(one.mc_standard_error == four.mc_standard_error);
}
