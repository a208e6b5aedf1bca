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

#include "qtl/typicality.hpp"

#include <array>
#include <cmath>
#include <string>

#include "qtl/parallel.hpp"
#include "qtl/stats.hpp"

namespace qtl::typicality {
namespace {

// tr F^2/n - (tr F/n)^2, clamped at zero against round-off.
double operator_variance(const HermitianOperator& op) {
  const double n = static_cast<double>(op.dim());
  const double mean = op.trace() / n;
  const double second = op.entries().squaredNorm() / n;
  return std::max(second - mean * mean, 0.0);
}

DeviationReport summarize(Index n, unsigned order, double analytic,
                          const std::vector<double>& squares, std::uint64_t seed) {
  DeviationReport report;
  report.n = n;
  report.moment_order = order;
  report.analytic_rms = analytic;
  report.samples = squares.size();
  report.seed = seed;
  const stats::Estimate rms = stats::jackknife_rms(squares);
  report.mc_estimate = rms.value;
  report.mc_standard_error = rms.standard_error;
  const stats::Estimate ms = stats::mean_estimate(squares);
  report.mc_mean_square = ms.value;
  report.mc_mean_square_error = ms.standard_error;
  return report;
}

void require_samples(std::size_t samples) {
  if (samples < 2) throw Error(ErrorCode::InvalidParameter, "Monte Carlo needs at least 2 samples");
}

}  // namespace

double typical_deviation_rms(const HermitianOperator& op) {
  return std::sqrt(operator_variance(op) / (static_cast<double>(op.dim()) + 1.0));
}

SpreadBound spread_bound(const HermitianOperator& op) {
  SpreadBound result;
  result.spread = std::sqrt(operator_variance(op));
  if (op.is_diagonal()) {
    result.bound = op.entries().diagonal().cwiseAbs().maxCoeff();
  } else {
    result.bound = op.eigensystem()->values.cwiseAbs().maxCoeff();
  }
  if (result.spread > result.bound + 1e-12)
    throw Error(ErrorCode::InvariantViolation, "operator spread exceeds max |eigenvalue|");
  return result;
}

DeviationReport typical_deviation_mc(const HermitianOperator& op, std::size_t samples,
                                     RngStream& rng) {
  require_samples(samples);
  const Index n = op.dim();
  const std::uint64_t seed = rng.seed();
  const double mean = op.trace() / static_cast<double>(n);

  std::vector<double> squares;
  if (op.is_diagonal()) {
    const RVector centered = op.entries().diagonal().real().array() - mean;
    squares = sample_chunked(samples, rng, [&](RngStream& local) {
      const PureState psi = sample_uniform_state(n, local);
      double dev = 0.0;
      for (Index i = 0; i < n; ++i) dev += centered(i) * std::norm(psi[i]);
      return dev * dev;
    });
  } else {
    CMatrix centered = op.entries();
    centered.diagonal().array() -= mean;
    squares = sample_chunked(samples, rng, [&](RngStream& local) {
      const PureState psi = sample_uniform_state(n, local);
      const double dev = psi.amplitudes().dot(centered * psi.amplitudes()).real();
      return dev * dev;
    });
  }
  return summarize(n, 1, typical_deviation_rms(op), squares, seed);
}

DeviationReport random_basis_deviation_mc(const PureState& psi,
                                          std::span<const double> f_values,
                                          std::size_t samples, RngStream& rng) {
  const Index n = psi.dim();
  if (static_cast<Index>(f_values.size()) != n)
    throw Error(ErrorCode::Shape, "f_values length does not match state dimension");
  require_samples(samples);
  const std::uint64_t seed = rng.seed();

  double mean = 0.0;
  for (double f : f_values) mean += f;
  mean /= static_cast<double>(n);
  RVector centered(n);
  for (Index i = 0; i < n; ++i) centered(i) = f_values[i] - mean;

  const auto squares = sample_chunked(samples, rng, [&](RngStream& local) {
    const OrthonormalBasis basis = sample_haar_basis(n, local);
    const CVector overlaps = basis.columns().adjoint() * psi.amplitudes();
    double dev = 0.0;
    for (Index i = 0; i < n; ++i) dev += centered(i) * std::norm(overlaps(i));
    return dev * dev;
  });
  const HermitianOperator spectrum_op = HermitianOperator::diagonal(f_values);
  return summarize(n, 1, typical_deviation_rms(spectrum_op), squares, seed);
}

HermitianOperator centered_square(const HermitianOperator& op) {
  const double mean = op.trace() / static_cast<double>(op.dim());
  return op.shifted(-mean).power(2);
}

double variance_deviation_rms(const HermitianOperator& op) {
  return typical_deviation_rms(centered_square(op));
}

DeviationReport moment_deviation(const HermitianOperator& op, unsigned m,
                                 std::size_t samples, RngStream& rng) {
  if (m == 0) throw Error(ErrorCode::InvalidParameter, "moment order must be >= 1");
  DeviationReport report = typical_deviation_mc(op.power(m), samples, rng);
  report.moment_order = m;
  return report;
}

SphereMoments sphere_moments(Index n, std::size_t samples, RngStream& rng) {
  if (n < 2) throw Error(ErrorCode::InvalidDimension, "sphere_moments needs n >= 2");
  require_samples(samples);
  const auto rows = sample_chunked(samples, rng, [&](RngStream& local) {
    const PureState psi = sample_uniform_state(n, local);
    const double a = std::norm(psi[0]);
    const double b = std::norm(psi[1]);
    return std::array<double, 3>{a, a * a, a * b};
  });
  std::array<std::vector<double>, 3> columns;
  for (auto& c : columns) c.reserve(samples);
  for (const auto& row : rows)
    for (std::size_t j = 0; j < 3; ++j) columns[j].push_back(row[j]);

  SphereMoments out;
  out.n = n;
  out.samples = samples;
  const auto second = stats::mean_estimate(columns[0]);
  const auto fourth = stats::mean_estimate(columns[1]);
  const auto cross = stats::mean_estimate(columns[2]);
  out.second = second.value;
  out.second_error = second.standard_error;
  out.fourth = fourth.value;
  out.fourth_error = fourth.standard_error;
  out.cross = cross.value;
  out.cross_error = cross.standard_error;
  return out;
}

SpectrumFamily parse_family(std::string_view name) {
  if (name == "projector") return SpectrumFamily::RankOneProjector;
  if (name == "alternating") return SpectrumFamily::Alternating;
  if (name == "constant") return SpectrumFamily::Constant;
  throw Error(ErrorCode::Config, "unknown spectrum family '" + std::string(name) +
                                     "' (expected projector, alternating or constant)");
}

std::string_view to_string(SpectrumFamily family) {
  switch (family) {
    case SpectrumFamily::RankOneProjector: return "projector";
    case SpectrumFamily::Alternating: return "alternating";
    case SpectrumFamily::Constant: return "constant";
  }
  return "unknown";
}

std::vector<double> family_spectrum(SpectrumFamily family, Index n) {
  if (n < 1) throw Error(ErrorCode::InvalidDimension, "family_spectrum: n must be >= 1");
  std::vector<double> f(n, 0.0);
  switch (family) {
    case SpectrumFamily::RankOneProjector:
      f[0] = 1.0;
      break;
    case SpectrumFamily::Alternating:
      for (Index i = 0; i < n; ++i) f[i] = (i % 2 == 0) ? 1.0 : -1.0;
      break;
    case SpectrumFamily::Constant:
      std::fill(f.begin(), f.end(), 1.0);
      break;
  }
  return f;
}

std::size_t default_samples(Index n) { return n <= 64 ? 100000 : 10000; }

ScalingStudy scaling_study(SpectrumFamily family, std::span<const Index> dims,
                           std::size_t samples, RngStream& rng, bool with_monte_carlo) {
  if (dims.empty()) throw Error(ErrorCode::InvalidParameter, "scaling_study: no dimensions");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 2) throw Error(ErrorCode::InvalidDimension, "scaling_study: dimensions must be >= 2");
    if (i > 0 && dims[i] <= dims[i - 1])
      throw Error(ErrorCode::InvalidParameter, "scaling_study: dimensions must be ascending");
  }

  ScalingStudy study;
  study.family = family;
  for (Index n : dims) {
    const auto spectrum = family_spectrum(family, n);
    const HermitianOperator op = HermitianOperator::diagonal(spectrum);
    ScalingRow row;
    row.n = n;
    row.analytic = typical_deviation_rms(op);
    if (with_monte_carlo) {
      RngStream local = rng.fork();
      row.mc = typical_deviation_mc(op, samples == 0 ? default_samples(n) : samples, local);
    }
    study.degenerate = study.degenerate || !(row.analytic > 0.0);
    study.rows.push_back(std::move(row));
  }

  if (!study.degenerate && study.rows.size() >= 2) {
    std::vector<double> x, y;
    for (const auto& row : study.rows) {
      x.push_back(std::log(static_cast<double>(row.n) + 1.0));
      y.push_back(std::log(row.analytic));
    }
    study.slope = stats::fit_line(x, y).slope;
  }
  return study;
}

}  // namespace qtl::typicality
