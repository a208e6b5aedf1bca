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

#include "qtl/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <functional>
#include <numbers>
#include <sstream>

#include "qtl/dynamics.hpp"
#include "qtl/ensembles.hpp"
#include "qtl/harness/run.hpp"
#include "qtl/hilbert.hpp"
#include "qtl/horizon.hpp"
#include "qtl/rng.hpp"
#include "qtl/typicality.hpp"

namespace qtl {
namespace {

constexpr std::uint64_t kSeed = 0x5eed2026;
constexpr double kSigmas = 4.0;

double cpu_seconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok) { pass = pass && ok; }
};

double z_score(double estimate, double target, double error) {
  if (error > 0.0) return std::abs(estimate - target) / error;
  return std::abs(estimate - target) <= 1e-12 ? 0.0 : INFINITY;
}

CriterionResult typical_deviation_sweep() {
  Verdict v;
  const double t0 = cpu_seconds();
  double worst = 0.0;
  Index worst_n = 0;
  for (Index n : {2, 4, 8, 16, 32, 64, 128, 256}) {
    const auto spectrum = typicality::family_spectrum(typicality::SpectrumFamily::RankOneProjector, n);
    const auto op = HermitianOperator::diagonal(spectrum);
    RngStream rng = RngStream(kSeed, 1).substream(static_cast<std::uint64_t>(n));
    const auto r = typicality::typical_deviation_mc(op, typicality::default_samples(n), rng);
    const double z = z_score(r.mc_estimate, r.analytic_rms, r.mc_standard_error);
    v.require(z <= kSigmas);
    if (z >= worst) {
      worst = z;
      worst_n = n;
    }
  }
  const double cpu = cpu_seconds() - t0;
  v.require(cpu < 300.0);
  v.detail << "max |z| = " << worst << " (n=" << worst_n << ") <= 4; cpu " << cpu << " s < 300 s";
  return {1, "typical deviation of a rank-1 projector matches the closed form, n = 2..256", v.pass,
          v.detail.str()};
}

CriterionResult scaling_slope() {
  Verdict v;
  const std::vector<Index> dims = {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  RngStream rng(kSeed, 2);
  const auto study = typicality::scaling_study(typicality::SpectrumFamily::Alternating, dims, 0, rng, false);
  v.require(study.slope.has_value());
  const double slope = study.slope.value_or(NAN);
  v.require(std::abs(slope + 0.5) <= 0.005);
  v.detail.precision(12);
  v.detail << "slope = " << slope << ", |slope + 0.5| <= 0.005";
  return {2, "log-log slope of the alternating-spectrum deviation", v.pass, v.detail.str()};
}

CriterionResult sphere_moment_check() {
  Verdict v;
  double worst = 0.0;
  for (Index n : {2, 8, 32}) {
    RngStream rng = RngStream(kSeed, 3).substream(static_cast<std::uint64_t>(n));
    const auto m = typicality::sphere_moments(n, 100000, rng);
    const double nd = static_cast<double>(n);
    for (double z : {z_score(m.second, 1.0 / nd, m.second_error),
                     z_score(m.fourth, 2.0 / (nd * (nd + 1.0)), m.fourth_error),
                     z_score(m.cross, 1.0 / (nd * (nd + 1.0)), m.cross_error)}) {
      v.require(z <= kSigmas);
      worst = std::max(worst, z);
    }
  }
  v.detail << "max |z| over 9 moments = " << worst << " <= 4";
  return {3, "Haar amplitude moments at n = 2, 8, 32", v.pass, v.detail.str()};
}

CriterionResult random_basis_equivalence() {
  Verdict v;
  double worst = 0.0;
  for (const std::vector<double>& spectrum : {std::vector<double>{1, 0}, std::vector<double>{1, 0, 0, 0}}) {
    const Index n = static_cast<Index>(spectrum.size());
    const auto op = HermitianOperator::diagonal(spectrum);
    RngStream state_rng = RngStream(kSeed, 4).substream(2 * n);
    RngStream basis_rng = RngStream(kSeed, 4).substream(2 * n + 1);
    const auto by_state = typicality::typical_deviation_mc(op, 100000, state_rng);
    const auto by_basis =
        typicality::random_basis_deviation_mc(PureState::basis_state(n, 0), spectrum, 100000, basis_rng);
    const double z = z_score(by_basis.mc_estimate, by_state.mc_estimate,
                             std::hypot(by_basis.mc_standard_error, by_state.mc_standard_error));
    v.require(z <= kSigmas);
    worst = std::max(worst, z);
  }
  v.detail << "max |z| = " << worst << " <= 4";
  return {4, "fixed-state random-basis deviation equals random-state deviation", v.pass, v.detail.str()};
}

ensembles::DegeneracySpectrum power_bath(double base, int max_energy) {
  std::vector<ensembles::SpectrumLevel> levels;
  for (int e = 0; e <= max_energy; ++e)
    levels.push_back({static_cast<double>(e), std::nullopt, static_cast<std::uint64_t>(std::llround(std::pow(base, e)))});
  return ensembles::DegeneracySpectrum(levels);
}

ensembles::DegeneracySpectrum ladder_system() {
  std::vector<ensembles::SpectrumLevel> levels;
  for (int e = 0; e <= 3; ++e) levels.push_back({static_cast<double>(e), std::nullopt, static_cast<std::uint64_t>(e + 1)});
  return ensembles::DegeneracySpectrum(levels);
}

CriterionResult canonical_emergence() {
  Verdict v;
  const double t0 = cpu_seconds();
  RngStream rng(kSeed, 5);
  const auto ex = ensembles::canonical_experiment(ladder_system(), power_bath(2.0, 10), 10.0, 1000, rng);
  std::uint64_t min_block = ex.shell.n;
  double worst = 0.0;
  for (std::size_t i = 0; i < ex.predicted.levels.size(); ++i) {
    min_block = std::min(min_block, ex.predicted.levels[i].n_i);
    const double z = z_score(ex.sampled[i].p_mean, ex.predicted.levels[i].p_predicted, ex.sampled[i].p_mean_error);
    worst = std::max(worst, z);
    v.require(z <= kSigmas);
  }
  v.require(min_block >= 100);
  v.require(ex.max_off_block_norm < 1e-14);
  const double z_beta = z_score(ex.sampled_beta.value, std::numbers::ln2, ex.sampled_beta.standard_error);
  v.require(z_beta <= kSigmas);
  const double cpu = cpu_seconds() - t0;
  v.require(cpu < 120.0);
  v.detail << "n = " << ex.shell.n << ", min n_i = " << min_block << "; population max |z| = " << worst
           << "; off-block " << ex.max_off_block_norm << " < 1e-14; 1/T = " << ex.sampled_beta.value << " +- "
           << ex.sampled_beta.standard_error << " vs ln 2 (|z| = " << z_beta << "); cpu " << cpu << " s < 120 s";
  return {5, "canonical populations emerge on a bipartite energy shell", v.pass, v.detail.str()};
}

CriterionResult fluctuation_scale() {
  Verdict v;
  double lo = INFINITY, hi = 0.0;
  std::size_t blocks = 0;
  int shell_id = 0;
  for (double base : {2.0, 3.0}) {
    RngStream rng(kSeed, 60 + shell_id++);
    const auto ex = ensembles::canonical_experiment(ladder_system(), power_bath(base, 10), 10.0, 1000, rng);
    for (std::size_t i = 0; i < ex.predicted.levels.size(); ++i) {
      const auto& level = ex.predicted.levels[i];
      if (level.n_i < 50) continue;
      const double ratio = ex.sampled[i].p_std / level.fluctuation_scale;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      v.require(ratio >= 0.5 && ratio <= 2.0);
      ++blocks;
    }
  }
  v.require(blocks > 0);
  v.detail << blocks << " blocks with n_i >= 50; std / (sqrt(n_i)/n) in [" << lo << ", " << hi
           << "] within [0.5, 2]";
  return {6, "population fluctuations scale as sqrt(n_i)/n", v.pass, v.detail.str()};
}

CriterionResult grand_canonical() {
  Verdict v;
  std::vector<ensembles::SpectrumLevel> bath, system;
  for (int e = 0; e <= 6; ++e)
    for (int q = 0; q <= 3; ++q)
      bath.push_back({static_cast<double>(e), q, static_cast<std::uint64_t>(std::llround(std::pow(2.0, e) * std::pow(3.0, q)))});
  for (int e = 0; e <= 2; ++e)
    for (int q = 0; q <= 1; ++q) system.push_back({static_cast<double>(e), q, 1});
  const ensembles::DegeneracySpectrum spec_a(system), spec_b(bath);
  RngStream rng(kSeed, 7);
  const auto ex = ensembles::grand_shell_check(spec_a, spec_b, 6.0, 3, rng, 1000);
  const double t_true = 1.0 / std::numbers::ln2;
  const double phi_true = -std::log(3.0) / std::numbers::ln2;
  const double t_rel = std::abs(ex.predicted_fit.temperature - t_true) / t_true;
  const double phi_rel = ex.predicted_fit.potential
                             ? std::abs(*ex.predicted_fit.potential - phi_true) / std::abs(phi_true)
                             : INFINITY;
  v.require(t_rel < 1e-10);
  v.require(phi_rel < 1e-10);
  const double z_beta = z_score(ex.sampled_beta.value, std::numbers::ln2, ex.sampled_beta.standard_error);
  const double z_bp = ex.sampled_beta_potential
                          ? z_score(ex.sampled_beta_potential->value, -std::log(3.0),
                                    ex.sampled_beta_potential->standard_error)
                          : INFINITY;
  v.require(z_beta <= kSigmas);
  v.require(z_bp <= kSigmas);
  v.detail << "exact fit: rel err T " << t_rel << ", Phi " << phi_rel << " < 1e-10; sampled |z| beta " << z_beta
           << ", beta*Phi " << z_bp << " <= 4";
  return {7, "temperature and chemical potential from a charged linear-entropy bath", v.pass, v.detail.str()};
}

CriterionResult thermalization() {
  Verdict v;
  const double t0 = cpu_seconds();
  const std::vector<double> freqs(5, 1.0);
  const std::uint64_t count = dynamics::count_states(freqs, 5.0);
  v.require(count == 126);

  harness::ThermalizeParams p;
  p.frequencies = freqs;
  p.total_energy = 5.0;
  p.initial = {5, 0, 0, 0, 0};
  p.epsilon = 0.1;
  p.seeds = 20;
  p.baseline_samples = 1000;
  harness::ExperimentConfig config{harness::ExperimentKind::Thermalize, kSeed + 8, std::nullopt, p};
  const auto report = harness::run(config);
  for (const auto& c : report.checks) v.require(c.pass);
  const double cpu = cpu_seconds() - t0;
  v.require(cpu < 300.0);
  const auto& s = report.summary;
  v.detail << "shell dim " << count << "; late distance " << s["late_distance"].get<double>() << " < "
           << s["distance_threshold"].get<double>() << "; late MI " << s["late_mutual_information"].get<double>()
           << " vs Haar " << s["baseline_mutual_information"].get<double>() << " (25%); cpu " << cpu
           << " s < 300 s";
  return {8, "oscillator shell thermalizes under a weak random interaction", v.pass, v.detail.str()};
}

CriterionResult horizon_thermality() {
  Verdict v;
  RngStream rng(kSeed, 9);
  double worst_distance = 0.0, worst_discrepancy = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int level_count = 1 + static_cast<int>(rng.uniform() * 12.0);
    std::vector<EnergyLevel> levels = {{0.0, 1}};
    double e = 0.0;
    for (int i = 1; i < level_count; ++i) {
      e += 0.05 + 1.5 * rng.uniform();
      levels.push_back({e, 1 + static_cast<std::uint64_t>(rng.uniform() * 8.0)});
    }
    const double mass = std::exp(std::log(0.002) + rng.uniform() * std::log(500.0));
    const horizon::ModeSpectrum modes(levels);
    const auto state = horizon::hawking_state(mass, modes);
    worst_distance = std::max(worst_distance, horizon::verify_blackbody(horizon::outside_density(state), mass, modes));
    RngStream draws = rng.substream(static_cast<std::uint64_t>(trial));
    worst_discrepancy = std::max(worst_discrepancy, horizon::outside_observable_equivalence(state, 100, draws));
  }
  v.require(worst_distance < 1e-10);
  v.require(worst_discrepancy < 1e-9);
  v.detail << "20 random spectra and masses: max trace distance " << worst_distance
           << " < 1e-10; max observable discrepancy " << worst_discrepancy << " < 1e-9";
  return {9, "exterior of the paired horizon state is exactly thermal", v.pass, v.detail.str()};
}

// Entry (r, c) of the reduced matrix by explicit summation over every
// traced multi-index.
CMatrix brute_partial_trace(const CMatrix& rho, const std::vector<Index>& dims, const std::vector<Index>& keep) {
  const std::size_t k = dims.size();
  std::vector<bool> kept(k, false);
  for (Index f : keep) kept[f] = true;
  Index dk = 1, dt = 1;
  for (std::size_t f = 0; f < k; ++f) (kept[f] ? dk : dt) *= dims[f];
  auto compose = [&](Index kept_index, Index traced_index) {
    std::vector<Index> digit(k);
    for (std::size_t f = k; f-- > 0;) {
      Index& source = kept[f] ? kept_index : traced_index;
      digit[f] = source % dims[f];
      source /= dims[f];
    }
    Index flat = 0;
    for (std::size_t f = 0; f < k; ++f) flat = flat * dims[f] + digit[f];
    return flat;
  };
  CMatrix out = CMatrix::Zero(dk, dk);
  for (Index r = 0; r < dk; ++r)
    for (Index c = 0; c < dk; ++c)
      for (Index t = 0; t < dt; ++t) out(r, c) += rho(compose(r, t), compose(c, t));
  return out;
}

std::uint64_t exhaustive_count(const std::vector<double>& freqs, double energy, double tol) {
  std::vector<int> limit;
  for (double w : freqs) limit.push_back(static_cast<int>(std::floor((energy + tol) / w)));
  std::vector<int> digit(freqs.size(), 0);
  std::uint64_t count = 0;
  while (true) {
    double sum = 0.0;
    for (std::size_t l = 0; l < freqs.size(); ++l) sum += freqs[l] * digit[l];
    if (std::abs(sum - energy) <= tol) ++count;
    std::size_t l = 0;
    while (l < digit.size() && ++digit[l] > limit[l]) digit[l++] = 0;
    if (l == digit.size()) break;
  }
  return count;
}

CVector series_propagate(const CMatrix& h, const CVector& psi, double t) {
  const double norm = h.cwiseAbs().rowwise().sum().maxCoeff();
  const int steps = std::max(1, static_cast<int>(std::ceil(norm * std::abs(t) / 0.5)));
  const double dt = t / steps;
  CVector out = psi;
  for (int s = 0; s < steps; ++s) {
    CVector term = out, acc = out;
    for (int k = 1; k < 60; ++k) {
      term = (Complex(0.0, -dt / k) * (h * term)).eval();
      acc += term;
      if (term.norm() < 1e-18) break;
    }
    out = acc;
  }
  return out;
}

CriterionResult oracles() {
  Verdict v;
  RngStream rng(kSeed, 10);

  double pt_error = 0.0;
  const std::vector<std::vector<Index>> layouts = {{2, 3}, {3, 4}, {2, 2, 2}, {3, 4, 5}};
  for (const auto& dims : layouts) {
    Index total = 1;
    for (Index d : dims) total *= d;
    CMatrix mix = CMatrix::Zero(total, total);
    const PureState pure = sample_uniform_state(total, rng);
    for (int j = 0; j < 3; ++j) mix += density_of(sample_uniform_state(total, rng)).entries() / 3.0;
    const DensityMatrix rho(mix);
    const std::size_t k = dims.size();
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      std::vector<Index> keep;
      for (std::size_t f = 0; f < k; ++f)
        if (mask & (1u << f)) keep.push_back(static_cast<Index>(f));
      const CMatrix want_mixed = brute_partial_trace(rho.entries(), dims, keep);
      const CMatrix want_pure = brute_partial_trace(density_of(pure).entries(), dims, keep);
      pt_error = std::max(pt_error, (partial_trace(rho, dims, keep).entries() - want_mixed).cwiseAbs().maxCoeff());
      pt_error = std::max(pt_error, (partial_trace(pure, dims, keep).entries() - want_pure).cwiseAbs().maxCoeff());
    }
  }
  v.require(pt_error < 1e-12);

  std::size_t cases = 0, mismatches = 0;
  const std::vector<std::vector<double>> chains = {{1, 1, 1, 1, 1},  {1, 2, 3},       {0.5, 1.5, 2.0, 1.0},
                                                   {1, 1, 1},        {2, 3, 5, 7},    {1.0, std::sqrt(2.0), std::numbers::pi},
                                                   {0.25, 0.75, 1.0}, {1, 1, 2, 2, 3}};
  for (const auto& freqs : chains) {
    for (double e = 0.0; e <= 14.0; e += 0.25) {
      const std::uint64_t want = exhaustive_count(freqs, e, 1e-9);
      if (want > 10000) continue;
      ++cases;
      if (dynamics::count_states(freqs, e) != want) ++mismatches;
    }
  }
  v.require(mismatches == 0 && cases > 0);

  double evolve_error = 0.0;
  for (Index n : {2, 7, 20, 64}) {
    const auto h = sample_gue(n, 1.0, rng);
    const PureState psi = sample_uniform_state(n, rng);
    for (double t : {0.1, 1.0, 5.0, 25.0}) {
      const CVector want = series_propagate(h.entries(), psi.amplitudes(), t);
      evolve_error = std::max(evolve_error, (evolve(h, psi, t).amplitudes() - want).cwiseAbs().maxCoeff());
    }
  }
  v.require(evolve_error < 1e-8);

  v.detail << "partial trace max entry error " << pt_error << " < 1e-12; count_states " << cases - mismatches << "/"
           << cases << " exact; evolve max error " << evolve_error << " < 1e-8";
  return {10, "independent oracles for partial trace, shell counting and evolution", v.pass, v.detail.str()};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& out, std::span<const int> only) {
  const std::vector<std::function<CriterionResult()>> criteria = {
      typical_deviation_sweep, scaling_slope,  sphere_moment_check, random_basis_equivalence, canonical_emergence,
      fluctuation_scale,       grand_canonical, thermalization,     horizon_thermality,       oracles};
  std::vector<CriterionResult> results;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    CriterionResult r;
    try {
      r = criteria[id - 1]();
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()};
    }
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.title << ": " << r.detail << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace qtl
