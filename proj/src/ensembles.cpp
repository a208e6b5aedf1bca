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

#include "qtl/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "qtl/parallel.hpp"

namespace qtl::ensembles {
namespace {

constexpr double kTraceDeficitTolerance = 1e-8;
constexpr double kFitSigmas = 4.0;

std::string describe(double energy, std::optional<int> charge) {
  std::string s = "E=" + std::to_string(energy);
  if (charge) s += ", Q=" + std::to_string(*charge);
  return s;
}

struct SampledPopulations {
  std::vector<double> p;
  double off_block = 0.0;
};

std::vector<LevelSampleStats> summarize_samples(const std::vector<std::vector<double>>& rows,
                                                std::size_t width) {
  std::vector<LevelSampleStats> out(width);
  std::vector<double> column(rows.size());
  for (std::size_t j = 0; j < width; ++j) {
    for (std::size_t s = 0; s < rows.size(); ++s) column[s] = rows[s][j];
    const auto est = stats::mean_estimate(column);
    out[j].p_mean = est.value;
    out[j].p_mean_error = est.standard_error;
    out[j].p_std = stats::stddev(column);
  }
  return out;
}

// Block traces of the reduced state, one per populated A level, computed
// straight from the amplitudes.
std::vector<double> block_traces(const PureState& state, const BipartiteEnergyShell& shell,
                                 const std::vector<std::size_t>& populated) {
  std::map<std::size_t, double> by_level;
  for (const auto& block : shell.blocks) {
    double acc = 0.0;
    for (std::uint64_t j = 0; j < block.size(); ++j)
      acc += std::norm(state[static_cast<Index>(block.offset + j)]);
    by_level[block.a_level] += acc;
  }
  std::vector<double> out;
  out.reserve(populated.size());
  for (std::size_t a : populated) out.push_back(by_level[a]);
  return out;
}

PopulationReport with_observed(PopulationReport report, const std::vector<double>& p) {
  for (std::size_t j = 0; j < report.levels.size(); ++j) report.levels[j].p_observed = p[j];
  return report;
}

}  // namespace

// ---------------------------------------------------------------------------
// DegeneracySpectrum

DegeneracySpectrum::DegeneracySpectrum(std::vector<SpectrumLevel> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw Error(ErrorCode::InvalidParameter, "degeneracy spectrum has no levels");
  charged_ = levels_.front().charge.has_value();
  offsets_.reserve(levels_.size());
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto& level = levels_[i];
    if (level.degeneracy < 1)
      throw Error(ErrorCode::InvalidParameter, "degeneracy must be >= 1 at " + describe(level.energy, level.charge));
    if (!std::isfinite(level.energy))
      throw Error(ErrorCode::InvalidParameter, "level energy must be finite");
    if (level.charge.has_value() != charged_)
      throw Error(ErrorCode::InvalidParameter, "either all levels carry a charge or none does");
    for (std::size_t j = 0; j < i; ++j)
      if (levels_[j].energy == level.energy && levels_[j].charge == level.charge)
        throw Error(ErrorCode::InvalidParameter, "duplicate level " + describe(level.energy, level.charge));
    offsets_.push_back(total_);
    total_ += level.degeneracy;
  }
}

double DegeneracySpectrum::entropy(std::size_t i) const {
  return std::log(static_cast<double>(levels_.at(i).degeneracy));
}

std::optional<std::size_t> DegeneracySpectrum::find(double energy, std::optional<int> charge,
                                                    double tol) const {
  for (std::size_t i = 0; i < levels_.size(); ++i)
    if (std::abs(levels_[i].energy - energy) <= tol && levels_[i].charge == charge) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Shell

std::uint64_t BipartiteEnergyShell::level_count(std::size_t a_level) const {
  std::uint64_t count = 0;
  for (const auto& block : blocks)
    if (block.a_level == a_level) count += block.size();
  return count;
}

std::vector<std::size_t> BipartiteEnergyShell::populated_levels() const {
  std::vector<std::size_t> out;
  for (const auto& block : blocks) out.push_back(block.a_level);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BipartiteEnergyShell build_shell(const DegeneracySpectrum& spec_a, const DegeneracySpectrum& spec_b,
                                 double total_energy, std::optional<int> total_charge,
                                 double match_tol) {
  if (total_charge && !(spec_a.charged() && spec_b.charged()))
    throw Error(ErrorCode::InvalidParameter, "a total charge needs charge-resolved spectra on both sides");
  if (!(match_tol >= 0.0)) throw Error(ErrorCode::InvalidParameter, "match_tol must be non-negative");

  BipartiteEnergyShell shell;
  shell.total_energy = total_energy;
  shell.total_charge = total_charge;
  for (std::size_t a = 0; a < spec_a.size(); ++a) {
    for (std::size_t b = 0; b < spec_b.size(); ++b) {
      if (std::abs(spec_a[a].energy + spec_b[b].energy - total_energy) > match_tol) continue;
      if (total_charge && *spec_a[a].charge + *spec_b[b].charge != *total_charge) continue;
      ShellBlock block{a, b, spec_a[a].degeneracy, spec_b[b].degeneracy, shell.n};
      shell.n += block.size();
      shell.blocks.push_back(block);
    }
  }
  if (shell.n == 0)
    throw Error(ErrorCode::NoCompatibleStates,
                "no product states with " + describe(total_energy, total_charge));
  return shell;
}

PureState sample_shell_state(const BipartiteEnergyShell& shell, RngStream& rng) {
  return sample_uniform_state(static_cast<Index>(shell.n), rng);
}

DensityMatrix reduce_to_A(const PureState& state, const BipartiteEnergyShell& shell,
                          const DegeneracySpectrum& spec_a) {
  if (static_cast<std::uint64_t>(state.dim()) != shell.n)
    throw Error(ErrorCode::Shape, "state does not live on this shell's index");
  const Index dim_a = static_cast<Index>(spec_a.total_dimension());
  CMatrix rho = CMatrix::Zero(dim_a, dim_a);
  for (const auto& block : shell.blocks) {
    if (block.a_level >= spec_a.size() || spec_a[block.a_level].degeneracy != block.d_a)
      throw Error(ErrorCode::Shape, "shell was not built from this A spectrum");
    const Index da = static_cast<Index>(block.d_a);
    const Index db = static_cast<Index>(block.d_b);
    // amplitudes alpha_{kl} of this block, k over A, l over B
    const auto amps = Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        state.amplitudes().data() + block.offset, da, db);
    const Index off = static_cast<Index>(spec_a.offset(block.a_level));
    rho.block(off, off, da, da) += amps * amps.adjoint();
  }
  DensityMatrix result(std::move(rho));
  if (off_block_norm(result, spec_a) >= 1e-14)
    throw Error(ErrorCode::InvariantViolation, "reduced state couples different A levels");
  return result;
}

double off_block_norm(const DensityMatrix& rho_a, const DegeneracySpectrum& spec_a) {
  if (static_cast<std::uint64_t>(rho_a.dim()) != spec_a.total_dimension())
    throw Error(ErrorCode::Shape, "reduced state dimension does not match the A spectrum");
  CMatrix off = rho_a.entries();
  for (std::size_t i = 0; i < spec_a.size(); ++i) {
    const Index o = static_cast<Index>(spec_a.offset(i));
    const Index d = static_cast<Index>(spec_a[i].degeneracy);
    off.block(o, o, d, d).setZero();
  }
  return off.norm();
}

PopulationReport predicted_populations(const BipartiteEnergyShell& shell,
                                       const DegeneracySpectrum& spec_a) {
  PopulationReport report;
  report.n = shell.n;
  const double n = static_cast<double>(shell.n);
  for (std::size_t a : shell.populated_levels()) {
    LevelPopulation level;
    level.a_level = a;
    level.energy = spec_a[a].energy;
    level.charge = spec_a[a].charge;
    level.d_a = spec_a[a].degeneracy;
    for (const auto& block : shell.blocks)
      if (block.a_level == a) level.d_b += block.d_b;
    level.n_i = shell.level_count(a);
    const double frac = static_cast<double>(level.n_i) / n;
    level.p_predicted = frac;
    level.p_observed = frac;
    level.fluctuation_scale = std::sqrt(static_cast<double>(level.n_i)) / n;
    level.fluctuation_exact = std::sqrt(std::max(frac - frac * frac, 0.0) / (n + 1.0));
    report.levels.push_back(level);
  }
  return report;
}

PopulationReport energy_populations(const DensityMatrix& rho_a, const BipartiteEnergyShell& shell,
                                    const DegeneracySpectrum& spec_a) {
  if (static_cast<std::uint64_t>(rho_a.dim()) != spec_a.total_dimension())
    throw Error(ErrorCode::Shape, "reduced state dimension does not match the A spectrum");
  PopulationReport report = predicted_populations(shell, spec_a);
  double total = 0.0;
  for (auto& level : report.levels) {
    const Index o = static_cast<Index>(spec_a.offset(level.a_level));
    const Index d = static_cast<Index>(level.d_a);
    level.p_observed = rho_a.entries().block(o, o, d, d).trace().real();
    total += level.p_observed;
  }
  if (std::abs(1.0 - total) > kTraceDeficitTolerance)
    throw Error(ErrorCode::Inconsistency,
                "populated levels carry trace " + std::to_string(total) + " instead of 1");
  return report;
}

// ---------------------------------------------------------------------------
// Bath derivatives

double log_degeneracy_slope(const std::vector<std::pair<double, double>>& points, double x0,
                            double tol) {
  if (points.size() < 2)
    throw Error(ErrorCode::InvalidParameter, "finite difference needs at least two levels");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i].first > points[i - 1].first))
      throw Error(ErrorCode::InvalidParameter, "finite-difference points must be strictly ascending");
  auto slope = [&](std::size_t i, std::size_t j) {
    return (points[j].second - points[i].second) / (points[j].first - points[i].first);
  };
  const std::size_t last = points.size() - 1;
  for (std::size_t k = 0; k <= last; ++k) {
    if (std::abs(points[k].first - x0) > tol) continue;
    if (k == 0) return slope(0, 1);
    if (k == last) return slope(last - 1, last);
    return slope(k - 1, k + 1);
  }
  if (x0 < points.front().first) return slope(0, 1);
  if (x0 > points.back().first) return slope(last - 1, last);
  std::size_t hi = 1;
  while (points[hi].first < x0) ++hi;
  return slope(hi - 1, hi);
}

BathTemperature bath_temperature(const DegeneracySpectrum& spec_b, double energy) {
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < spec_b.size(); ++i) points.emplace_back(spec_b[i].energy, spec_b.entropy(i));
  std::sort(points.begin(), points.end());
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].first == points[i - 1].first)
      throw Error(ErrorCode::InvalidParameter,
                  "bath spectrum repeats an energy; use bath_derivatives for charged baths");

  BathTemperature result;
  result.slope = log_degeneracy_slope(points, energy);
  if (result.slope == 0.0) {
    result.infinite = true;
    result.temperature = std::numeric_limits<double>::infinity();
  } else {
    result.temperature = 1.0 / result.slope;
    result.negative = result.slope < 0.0;
  }
  return result;
}

BathDerivatives bath_derivatives(const DegeneracySpectrum& spec_b, double energy, int charge) {
  if (!spec_b.charged()) throw Error(ErrorCode::InvalidParameter, "bath_derivatives needs a charged bath");
  std::vector<std::pair<double, double>> along_e, along_q;
  for (std::size_t i = 0; i < spec_b.size(); ++i) {
    const auto& level = spec_b[i];
    if (*level.charge == charge) along_e.emplace_back(level.energy, spec_b.entropy(i));
    if (std::abs(level.energy - energy) <= kDefaultMatchTolerance)
      along_q.emplace_back(static_cast<double>(*level.charge), spec_b.entropy(i));
  }
  std::sort(along_e.begin(), along_e.end());
  std::sort(along_q.begin(), along_q.end());
  BathDerivatives out;
  out.d_energy = log_degeneracy_slope(along_e, energy);
  out.d_charge = log_degeneracy_slope(along_q, static_cast<double>(charge));
  if (out.d_energy == 0.0)
    throw Error(ErrorCode::UnderdeterminedFit, "bath entropy is flat in energy; potential undefined");
  return out;
}

// ---------------------------------------------------------------------------
// Fits

FitSummary canonical_form_check(const PopulationReport& report, const DegeneracySpectrum& spec_a,
                                double temperature) {
  if (!std::isfinite(temperature) || temperature == 0.0)
    throw Error(ErrorCode::InvalidParameter, "canonical_form_check needs a finite nonzero temperature");
  std::vector<std::pair<double, double>> rows;  // (E, ln p - S_A)
  for (const auto& level : report.levels)
    if (level.p_observed > 0.0)
      rows.emplace_back(level.energy, std::log(level.p_observed) - spec_a.entropy(level.a_level));
  if (rows.size() < 2)
    throw Error(ErrorCode::UnderdeterminedFit, "canonical fit needs at least two populated levels");

  Eigen::MatrixXd design(rows.size(), 2);
  Eigen::VectorXd y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = -rows[i].first;
    y(i) = rows[i].second;
  }
  const auto fit = stats::least_squares(design, y);

  FitSummary summary;
  summary.beta = fit.coefficients(1);
  summary.beta_error = fit.standard_errors(1);
  summary.temperature = 1.0 / summary.beta;
  summary.temperature_error = summary.beta_error / (summary.beta * summary.beta);
  summary.residual_norm = fit.residual_norm;
  summary.levels_used = rows.size();
  summary.reference_beta = 1.0 / temperature;
  const double gap = std::abs(summary.beta - summary.reference_beta);
  summary.consistent =
      gap <= kFitSigmas * summary.beta_error + 1e-9 * std::max(1.0, std::abs(summary.reference_beta));
  return summary;
}

FitSummary grand_form_check(const PopulationReport& report, const DegeneracySpectrum& spec_a,
                            const BathDerivatives& bath) {
  struct Row {
    double energy;
    double charge;
    double y;
  };
  std::vector<Row> rows;
  for (const auto& level : report.levels) {
    if (!(level.p_observed > 0.0)) continue;
    if (!level.charge) throw Error(ErrorCode::InvalidParameter, "grand fit needs charge-resolved levels");
    rows.push_back({level.energy, static_cast<double>(*level.charge),
                    std::log(level.p_observed) - spec_a.entropy(level.a_level)});
  }
  const bool single_charge = std::all_of(rows.begin(), rows.end(),
                                         [&](const Row& r) { return r.charge == rows.front().charge; });
  if (rows.empty() || single_charge) {
    FitSummary summary = canonical_form_check(report, spec_a, bath.temperature());
    return summary;
  }
  if (rows.size() < 3)
    throw Error(ErrorCode::UnderdeterminedFit, "grand fit needs at least three populated levels");

  Eigen::MatrixXd design(rows.size(), 3);
  Eigen::VectorXd y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = -rows[i].energy;
    design(i, 2) = rows[i].charge;
    y(i) = rows[i].y;
  }
  const auto fit = stats::least_squares(design, y);

  FitSummary summary;
  summary.beta = fit.coefficients(1);
  summary.beta_error = fit.standard_errors(1);
  summary.temperature = 1.0 / summary.beta;
  summary.temperature_error = summary.beta_error / (summary.beta * summary.beta);
  summary.beta_potential = fit.coefficients(2);
  summary.beta_potential_error = fit.standard_errors(2);
  summary.potential = *summary.beta_potential / summary.beta;
  // first-order propagation, ignoring covariance
  summary.potential_error =
      std::hypot(*summary.beta_potential_error / summary.beta,
                 *summary.beta_potential * summary.beta_error / (summary.beta * summary.beta));
  summary.residual_norm = fit.residual_norm;
  summary.levels_used = rows.size();
  summary.reference_beta = bath.d_energy;
  summary.reference_potential = bath.potential();
  const double ref_bp = -bath.d_charge;
  const double slack = 1e-9 * std::max(1.0, std::abs(bath.d_energy));
  summary.consistent =
      std::abs(summary.beta - bath.d_energy) <= kFitSigmas * summary.beta_error + slack &&
      std::abs(*summary.beta_potential - ref_bp) <= kFitSigmas * *summary.beta_potential_error + slack;
  return summary;
}

// ---------------------------------------------------------------------------
// Sampled experiments

CanonicalExperiment canonical_experiment(const DegeneracySpectrum& spec_a,
                                         const DegeneracySpectrum& spec_b, double total_energy,
                                         std::size_t samples, RngStream& rng, double match_tol) {
  if (samples < 2) throw Error(ErrorCode::InvalidParameter, "canonical experiment needs >= 2 samples");
  CanonicalExperiment ex;
  ex.samples = samples;
  ex.shell = build_shell(spec_a, spec_b, total_energy, std::nullopt, match_tol);
  ex.predicted = predicted_populations(ex.shell, spec_a);
  ex.bath = bath_temperature(spec_b, total_energy);
  if (ex.bath.infinite)
    throw Error(ErrorCode::InvalidParameter, "bath has infinite temperature; canonical fit undefined");
  ex.predicted_fit = canonical_form_check(ex.predicted, spec_a, ex.bath.temperature);

  const auto populated = ex.shell.populated_levels();
  const auto draws = sample_chunked(samples, rng, [&](RngStream& local) {
    const PureState psi = sample_shell_state(ex.shell, local);
    const DensityMatrix rho_a = reduce_to_A(psi, ex.shell, spec_a);
    const PopulationReport pops = energy_populations(rho_a, ex.shell, spec_a);
    SampledPopulations out;
    for (const auto& level : pops.levels) out.p.push_back(level.p_observed);
    out.off_block = off_block_norm(rho_a, spec_a);
    return out;
  });

  std::vector<std::vector<double>> rows;
  rows.reserve(draws.size());
  for (const auto& d : draws) {
    rows.push_back(d.p);
    ex.max_off_block_norm = std::max(ex.max_off_block_norm, d.off_block);
  }
  ex.sampled = summarize_samples(rows, populated.size());

  const double temperature = ex.bath.temperature;
  ex.sampled_beta = stats::jackknife_of_means(rows, [&](const std::vector<double>& means) {
    return canonical_form_check(with_observed(ex.predicted, means), spec_a, temperature).beta;
  });
  return ex;
}

GrandExperiment grand_shell_check(const DegeneracySpectrum& spec_a, const DegeneracySpectrum& spec_b,
                                  double total_energy, int total_charge, RngStream& rng,
                                  std::size_t samples, double match_tol) {
  GrandExperiment ex;
  ex.samples = samples;
  ex.shell = build_shell(spec_a, spec_b, total_energy, total_charge, match_tol);
  ex.predicted = predicted_populations(ex.shell, spec_a);
  ex.bath = bath_derivatives(spec_b, total_energy, total_charge);
  ex.predicted_fit = grand_form_check(ex.predicted, spec_a, ex.bath);
  if (samples == 0) return ex;
  if (samples < 2) throw Error(ErrorCode::InvalidParameter, "sampled grand check needs >= 2 samples");

  const auto populated = ex.shell.populated_levels();
  const auto rows = sample_chunked(samples, rng, [&](RngStream& local) {
    return block_traces(sample_shell_state(ex.shell, local), ex.shell, populated);
  });
  ex.sampled = summarize_samples(rows, populated.size());
  ex.sampled_beta = stats::jackknife_of_means(rows, [&](const std::vector<double>& means) {
    return grand_form_check(with_observed(ex.predicted, means), spec_a, ex.bath).beta;
  });
  if (ex.predicted_fit.beta_potential) {
    ex.sampled_beta_potential = stats::jackknife_of_means(rows, [&](const std::vector<double>& means) {
      return *grand_form_check(with_observed(ex.predicted, means), spec_a, ex.bath).beta_potential;
    });
  }
  return ex;
}

}  // namespace qtl::ensembles
