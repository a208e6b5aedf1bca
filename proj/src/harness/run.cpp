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

#include "qtl/harness/run.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>

#include "qtl/dynamics.hpp"
#include "qtl/ensembles.hpp"
#include "qtl/errors.hpp"
#include "qtl/harness/matrix_json.hpp"
#include "qtl/harness/plot.hpp"
#include "qtl/hilbert.hpp"
#include "qtl/horizon.hpp"
#include "qtl/rng.hpp"
#include "qtl/typicality.hpp"

namespace qtl::harness {
namespace {

std::string short_number(double value) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(6) << value;
  return out.str();
}

using nlohmann::json;

constexpr double kExactFloor = 1e-12;

Check make_check(std::string name, double value, std::string relation, double threshold) {
  Check c{std::move(name), value, threshold, std::move(relation), false};
  if (c.relation == "<") {
    c.pass = value < threshold;
  } else if (c.relation == "<=") {
    c.pass = value <= threshold;
  } else {
    c.pass = value >= threshold;
  }
  return c;
}

/// |estimate - target| <= sigmas * error; a zero error demands agreement
/// to kExactFloor.
Check within_sigmas(std::string name, double estimate, double target, double error, double sigmas) {
  const double threshold = error > 0.0 ? sigmas * error : kExactFloor;
  return make_check(std::move(name), std::abs(estimate - target), "<=", threshold);
}

Cell optional_charge(const std::optional<int>& q) {
  if (q) return static_cast<std::int64_t>(*q);
  return std::string();
}

ensembles::DegeneracySpectrum to_spectrum(const std::vector<LevelSpec>& levels) {
  std::vector<ensembles::SpectrumLevel> out;
  for (const auto& l : levels) out.push_back({l.energy, l.charge, l.degeneracy});
  return ensembles::DegeneracySpectrum(std::move(out));
}

std::int64_t as_cell(std::size_t v) { return static_cast<std::int64_t>(v); }

// ---------------------------------------------------------------- typicality

void run_typicality(const TypicalityParams& p, std::uint64_t seed, RunReport& report) {
  const HermitianOperator op = HermitianOperator::diagonal(p.spectrum).diagonalized();
  const Index n = op.dim();
  RngStream root(seed);

  Table table{"typicality",
              {"estimator", "n", "moment_order", "analytic_rms", "mc_estimate", "mc_standard_error", "samples",
               "seed"},
              {},
              {}};
  auto add = [&](const std::string& estimator, const typicality::DeviationReport& r) {
    table.add_row({estimator, static_cast<std::int64_t>(r.n), static_cast<std::int64_t>(r.moment_order),
                   r.analytic_rms, r.mc_estimate, r.mc_standard_error, as_cell(r.samples),
                   static_cast<std::int64_t>(r.seed)});
  };

  const auto bound = typicality::spread_bound(op);
  std::optional<typicality::DeviationReport> first_moment;
  for (std::size_t k = 0; k < p.moments.size(); ++k) {
    RngStream rng = root.substream(k);
    const unsigned m = p.moments[k];
    const auto r = m == 1 ? typicality::typical_deviation_mc(op, p.samples, rng)
                          : typicality::moment_deviation(op, m, p.samples, rng);
    add("random-state", r);
    report.checks.push_back(within_sigmas("moment " + std::to_string(m) + " deviation matches closed form",
                                          r.mc_estimate, r.analytic_rms, r.mc_standard_error, p.tolerance_sigmas));
    if (m == 1) first_moment = r;
  }
  if (p.random_basis) {
    RngStream rng = root.substream(1000);
    if (!first_moment) {
      RngStream extra = root.substream(1001);
      first_moment = typicality::typical_deviation_mc(op, p.samples, extra);
    }
    const auto r = typicality::random_basis_deviation_mc(PureState::basis_state(n, 0), p.spectrum, p.samples, rng);
    add("random-basis", r);
    const double combined = std::hypot(r.mc_standard_error, first_moment->mc_standard_error);
    report.checks.push_back(within_sigmas("random-basis deviation matches random-state deviation", r.mc_estimate,
                                          first_moment->mc_estimate, combined, p.tolerance_sigmas));
  }
  if (p.variance) {
    RngStream rng = root.substream(2000);
    auto r = typicality::typical_deviation_mc(typicality::centered_square(op), p.samples, rng);
    r.analytic_rms = typicality::variance_deviation_rms(op);
    add("variance", r);
    report.checks.push_back(within_sigmas("variance deviation matches closed form", r.mc_estimate, r.analytic_rms,
                                          r.mc_standard_error, p.tolerance_sigmas));
  }
  report.summary = {{"n", n},
                    {"analytic_rms", typicality::typical_deviation_rms(op)},
                    {"spread", bound.spread},
                    {"eigenvalue_bound", bound.bound}};
  report.tables.push_back(std::move(table));
}

// ------------------------------------------------------------------- scaling

void run_scaling(const ScalingParams& p, std::uint64_t seed, RunReport& report) {
  RngStream rng(seed);
  const auto study = typicality::scaling_study(p.family, p.dims, p.samples, rng, p.monte_carlo);
  std::vector<std::string> columns = {"n", "analytic_rms"};
  if (p.monte_carlo)
    for (const char* c : {"mc_estimate", "mc_standard_error", "samples"}) columns.emplace_back(c);
  Table table{"scaling", columns, {}, {}};
  for (const auto& row : study.rows) {
    std::vector<Cell> cells = {static_cast<std::int64_t>(row.n), row.analytic};
    if (row.mc) {
      cells.insert(cells.end(), {row.mc->mc_estimate, row.mc->mc_standard_error, as_cell(row.mc->samples)});
      report.checks.push_back(within_sigmas("n=" + std::to_string(row.n) + " Monte Carlo matches closed form",
                                            row.mc->mc_estimate, row.analytic, row.mc->mc_standard_error,
                                            p.tolerance_sigmas));
    }
    table.add_row(std::move(cells));
  }
  table.meta = {{"family", std::string(typicality::to_string(p.family))}, {"seed", seed}};
  if (p.expected_slope) {
    if (!study.slope)
      throw Error(ErrorCode::NoData, "an expected slope was declared but the study has no fitted slope");
    report.checks.push_back(make_check("log-log slope matches expected", std::abs(*study.slope - *p.expected_slope),
                                       "<=", p.slope_tolerance));
  }
  report.summary = {{"family", std::string(typicality::to_string(p.family))},
                    {"slope", study.slope ? json(*study.slope) : json(nullptr)},
                    {"degenerate", study.degenerate}};
  report.tables.push_back(std::move(table));
}

// ---------------------------------------------------------------- ensembles

Table populations_table(const ensembles::PopulationReport& predicted,
                        const std::vector<ensembles::LevelSampleStats>& sampled) {
  Table table{"populations",
              {"E", "Q", "d_A", "d_B", "n_i", "p_pred", "p_obs_mean", "p_obs_std", "fluct_scale"},
              {},
              {}};
  for (std::size_t i = 0; i < predicted.levels.size(); ++i) {
    const auto& l = predicted.levels[i];
    const double obs_mean = i < sampled.size() ? sampled[i].p_mean : std::nan("");
    const double obs_std = i < sampled.size() ? sampled[i].p_std : std::nan("");
    table.add_row({l.energy, optional_charge(l.charge), static_cast<std::int64_t>(l.d_a),
                   static_cast<std::int64_t>(l.d_b), static_cast<std::int64_t>(l.n_i), l.p_predicted, obs_mean,
                   obs_std, l.fluctuation_scale});
  }
  return table;
}

void run_canonical(const CanonicalParams& p, std::uint64_t seed, RunReport& report) {
  const auto spec_a = to_spectrum(p.spec_a);
  const auto spec_b = to_spectrum(p.spec_b);
  RngStream rng(seed);
  const auto ex = ensembles::canonical_experiment(spec_a, spec_b, p.total_energy, p.samples, rng, p.match_tol);

  Table pops = populations_table(ex.predicted, ex.sampled);
  pops.meta = {{"n", ex.shell.n}, {"samples", ex.samples}, {"seed", seed}};
  for (std::size_t i = 0; i < ex.predicted.levels.size(); ++i) {
    const auto& l = ex.predicted.levels[i];
    const auto& s = ex.sampled[i];
    const std::string label = "E=" + short_number(l.energy);
    report.checks.push_back(within_sigmas(label + " mean population matches n_i/n", s.p_mean, l.p_predicted,
                                          s.p_mean_error, p.tolerance_sigmas));
    if (l.n_i >= p.fluctuation_min_block) {
      const double ratio = s.p_std / l.fluctuation_scale;
      report.checks.push_back(make_check(label + " fluctuation within factor of sqrt(n_i)/n",
                                         std::abs(std::log(ratio)), "<=", std::log(p.fluctuation_factor)));
    }
  }
  report.checks.push_back(
      make_check("cross-energy blocks of rho_A vanish", ex.max_off_block_norm, "<", p.off_block_tolerance));
  report.checks.push_back(within_sigmas("sampled 1/T matches bath entropy slope", ex.sampled_beta.value,
                                        ex.bath.slope, ex.sampled_beta.standard_error, p.tolerance_sigmas));

  Table fit{"fit", {"source", "T_fit", "T_err", "Phi_fit", "Phi_err", "residual"}, {}, {}};
  fit.add_row({std::string("predicted"), ex.predicted_fit.temperature, ex.predicted_fit.temperature_error,
               std::string(), std::string(), ex.predicted_fit.residual_norm});
  const double t_sampled = 1.0 / ex.sampled_beta.value;
  fit.add_row({std::string("sampled"), t_sampled, ex.sampled_beta.standard_error * t_sampled * t_sampled,
               std::string(), std::string(), std::nan("")});

  report.summary = {{"n", ex.shell.n},
                    {"bath_temperature", ex.bath.temperature},
                    {"bath_beta", ex.bath.slope},
                    {"sampled_beta", ex.sampled_beta.value},
                    {"sampled_beta_error", ex.sampled_beta.standard_error},
                    {"max_off_block_norm", ex.max_off_block_norm}};
  report.tables.push_back(std::move(pops));
  report.tables.push_back(std::move(fit));
}

void run_grand(const GrandParams& p, std::uint64_t seed, RunReport& report) {
  const auto spec_a = to_spectrum(p.spec_a);
  const auto spec_b = to_spectrum(p.spec_b);
  RngStream rng(seed);
  const auto ex =
      ensembles::grand_shell_check(spec_a, spec_b, p.total_energy, p.total_charge, rng, p.samples, p.match_tol);
  const double t_ref = ex.bath.temperature();
  const double phi_ref = ex.bath.potential();
  const auto& fit = ex.predicted_fit;

  report.checks.push_back(make_check("predicted-population T matches bath (relative)",
                                     std::abs(fit.temperature - t_ref) / std::abs(t_ref), "<", p.exact_tolerance));
  if (fit.potential) {
    const double scale = std::max(std::abs(phi_ref), 1.0);
    report.checks.push_back(make_check("predicted-population Phi matches bath (relative)",
                                       std::abs(*fit.potential - phi_ref) / scale, "<", p.exact_tolerance));
  }

  Table pops = populations_table(ex.predicted, ex.sampled);
  pops.meta = {{"n", ex.shell.n}, {"samples", ex.samples}, {"seed", seed}};
  Table fits{"fit", {"source", "T_fit", "T_err", "Phi_fit", "Phi_err", "residual"}, {}, {}};
  auto optional_cell = [](const std::optional<double>& v) -> Cell {
    if (v) return *v;
    return std::string();
  };
  fits.add_row({std::string("predicted"), fit.temperature, fit.temperature_error, optional_cell(fit.potential),
                optional_cell(fit.potential_error), fit.residual_norm});

  json summary = {{"n", ex.shell.n},
                  {"bath_temperature", t_ref},
                  {"bath_potential", phi_ref},
                  {"fit_temperature", fit.temperature},
                  {"fit_potential", fit.potential ? json(*fit.potential) : json(nullptr)}};
  if (ex.samples > 0) {
    const double beta_ref = ex.bath.d_energy;
    report.checks.push_back(within_sigmas("sampled 1/T matches bath", ex.sampled_beta.value, beta_ref,
                                          ex.sampled_beta.standard_error, p.tolerance_sigmas));
    const double t_s = 1.0 / ex.sampled_beta.value;
    Cell phi_cell = std::string(), phi_err_cell = std::string();
    if (ex.sampled_beta_potential) {
      // Coefficient of Q is beta * Phi = -dS/dQ.
      const double bp_ref = -ex.bath.d_charge;
      report.checks.push_back(within_sigmas("sampled Phi/T matches bath", ex.sampled_beta_potential->value, bp_ref,
                                            ex.sampled_beta_potential->standard_error, p.tolerance_sigmas));
      phi_cell = ex.sampled_beta_potential->value * t_s;
      phi_err_cell = ex.sampled_beta_potential->standard_error * std::abs(t_s);
      summary["sampled_beta_potential"] = ex.sampled_beta_potential->value;
      summary["sampled_beta_potential_error"] = ex.sampled_beta_potential->standard_error;
    }
    fits.add_row({std::string("sampled"), t_s, ex.sampled_beta.standard_error * t_s * t_s, phi_cell, phi_err_cell,
                  std::nan("")});
    summary["sampled_beta"] = ex.sampled_beta.value;
    summary["sampled_beta_error"] = ex.sampled_beta.standard_error;
  }
  report.summary = std::move(summary);
  report.tables.push_back(std::move(pops));
  report.tables.push_back(std::move(fits));
}

// ---------------------------------------------------------------- dynamics

void run_thermalize(const ThermalizeParams& p, std::uint64_t seed, RunReport& report) {
  const dynamics::OscillatorChain chain(p.frequencies);
  const dynamics::ShellBasis basis = dynamics::build_shell_basis(chain, p.total_energy);
  if (!basis.index_of(p.initial)) {
    std::string tuple;
    for (int i : p.initial) tuple += (tuple.empty() ? "" : ",") + std::to_string(i);
    throw Error(ErrorCode::InvalidInitialState, "initial occupation (" + tuple + ") is not in the shell");
  }
  if (p.seeds < 1) throw Error(ErrorCode::InvalidParameter, "seeds must be >= 1");
  const RngStream root(seed);
  const std::size_t n_osc = chain.size();
  std::vector<double> grid = p.times;
  if (grid.empty())
    for (int k = 0; k <= 40; ++k) grid.push_back(0.5 * k);
  const std::size_t n_t = grid.size();

  std::vector<double> mean_s(n_t * n_osc, 0.0), mean_mi(n_t, 0.0), mean_dist(n_t, 0.0), max_drift(n_t, 0.0);
  std::vector<double> relaxation_times;
  for (std::size_t s = 0; s < p.seeds; ++s) {
    RngStream rng = root.substream(s);
    std::vector<double> times = grid;
    if (p.times_in_relaxation_units && basis.size() >= 2) {
      RngStream probe = rng;
      const double t_r =
          dynamics::relaxation_time(dynamics::perturbed_hamiltonian(basis, p.epsilon, probe), p.spacing);
      for (double& t : times) t *= t_r;
    }
    const auto traj =
        dynamics::thermalization_run(chain, p.total_energy, p.initial, p.epsilon, times, rng, p.spacing);
    relaxation_times.push_back(traj.relaxation_time);
    for (std::size_t k = 0; k < n_t; ++k) {
      const auto& pt = traj.points[k];
      for (std::size_t l = 0; l < n_osc; ++l) mean_s[k * n_osc + l] += pt.entropies[l] / p.seeds;
      mean_mi[k] += pt.mutual_information / p.seeds;
      mean_dist[k] += pt.distance_to_reference / p.seeds;
      max_drift[k] = std::max(max_drift[k], pt.norm_drift);
    }
  }

  std::vector<std::string> columns = {"t"};
  for (std::size_t l = 1; l <= n_osc; ++l) columns.push_back("S_" + std::to_string(l));
  for (const char* c : {"mutual_info", "dist_to_ref_1", "norm_drift"}) columns.emplace_back(c);
  Table table{"trajectory", columns, {}, {}};
  for (std::size_t k = 0; k < n_t; ++k) {
    std::vector<Cell> row = {grid[k]};
    for (std::size_t l = 0; l < n_osc; ++l) row.push_back(mean_s[k * n_osc + l]);
    row.insert(row.end(), {mean_mi[k], mean_dist[k], max_drift[k]});
    table.add_row(std::move(row));
  }

  RngStream baseline_rng = root.substream(1u << 20);
  const auto baseline = dynamics::haar_shell_baseline(basis, p.baseline_samples, baseline_rng);
  const double threshold = p.distance_threshold.value_or(2.0 / std::sqrt(static_cast<double>(basis.size())));

  const double t_max = *std::max_element(grid.begin(), grid.end());
  const double late_from = 0.5 * t_max;
  double late_dist = 0.0, late_mi = 0.0, drift = 0.0;
  std::size_t late = 0;
  for (std::size_t k = 0; k < n_t; ++k) {
    drift = std::max(drift, max_drift[k]);
    if (grid[k] < late_from) continue;
    late_dist += mean_dist[k];
    late_mi += mean_mi[k];
    ++late;
  }
  late_dist /= static_cast<double>(late);
  late_mi /= static_cast<double>(late);
  const auto first = std::min_element(grid.begin(), grid.end()) - grid.begin();

  table.meta = {{"frequencies", p.frequencies},
                {"total_energy", p.total_energy},
                {"shell_dim", basis.size()},
                {"epsilon", p.epsilon},
                {"seeds", p.seeds},
                {"seed", seed},
                {"time_unit", p.times_in_relaxation_units ? "relaxation" : "absolute"},
                {"relaxation_times", relaxation_times},
                {"averaged_over_seeds", true}};

  report.checks.push_back(
      make_check("late-time distance of oscillator 1 to reference", late_dist, "<", threshold));
  report.checks.push_back(make_check("initial mutual information vanishes", mean_mi[first], "<=", 1e-9));
  const double baseline_mi = baseline.mutual_information.value;
  report.checks.push_back(make_check("late-time mutual information near Haar baseline (relative)",
                                     std::abs(late_mi - baseline_mi) / baseline_mi, "<=",
                                     p.mutual_information_tolerance));
  report.checks.push_back(make_check("norm drift", drift, "<", 1e-9));

  report.summary = {{"shell_dim", basis.size()},
                    {"late_window_from", late_from},
                    {"late_distance", late_dist},
                    {"distance_threshold", threshold},
                    {"late_mutual_information", late_mi},
                    {"baseline_mutual_information", baseline_mi},
                    {"baseline_mutual_information_error", baseline.mutual_information.standard_error},
                    {"baseline_distance", baseline.distance_to_reference.value},
                    {"reference_weights", dynamics::boltzmann_reference(chain, p.total_energy, 0).degeneracies}};
  report.tables.push_back(std::move(table));
}

void run_count(const CountParams& p, RunReport& report) {
  const std::uint64_t count = dynamics::count_states(p.frequencies, p.total_energy, p.match_tol, p.cap);
  Table table{"count", {"total_energy", "oscillators", "count"}, {}, {}};
  table.add_row({p.total_energy, as_cell(p.frequencies.size()), static_cast<std::int64_t>(count)});
  if (p.expected)
    report.checks.push_back(make_check("count matches expected",
                                       std::abs(static_cast<double>(count) - static_cast<double>(*p.expected)), "<=",
                                       0.0));
  report.summary = {{"count", count}};
  report.tables.push_back(std::move(table));
}

// ----------------------------------------------------------------- horizon

void run_horizon(const HorizonParams& p, std::uint64_t seed, RunReport& report) {
  std::vector<EnergyLevel> levels;
  for (const auto& l : p.levels) levels.push_back({l.energy, l.degeneracy});
  const horizon::ModeSpectrum modes(levels);
  const auto state = horizon::hawking_state(p.mass, modes);
  const DensityMatrix rho_out = horizon::outside_density(state);
  const double distance = horizon::verify_blackbody(rho_out, p.mass, modes);
  RngStream rng(seed);
  const double discrepancy = horizon::outside_observable_equivalence(state, p.observable_samples, rng);

  Table table{"levels", {"E", "d", "population"}, {}, {}};
  json populations = json::array();
  Index offset = 0;
  for (const auto& l : modes.levels()) {
    double weight = 0.0;
    for (std::uint64_t k = 0; k < l.degeneracy; ++k, ++offset) weight += rho_out(offset, offset).real();
    populations.push_back(weight);
    table.add_row({l.energy, static_cast<std::int64_t>(l.degeneracy), weight});
  }
  report.checks.push_back(make_check("exterior state is Gibbs at the Hawking temperature", distance, "<",
                                     p.distance_tolerance));
  report.checks.push_back(make_check("exterior observables match the reduced state", discrepancy, "<",
                                     p.observable_tolerance));
  report.summary = {{"T", horizon::hawking_temperature(p.mass)},
                    {"N2", state.norm_squared()},
                    {"populations", populations},
                    {"trace_distance", distance},
                    {"max_observable_discrepancy", discrepancy},
                    {"tail_weight", horizon::tail_weight(state)}};
  if (p.emit_density) report.summary["rho_outside"] = matrix_to_json(rho_out.entries());
  report.tables.push_back(std::move(table));
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Config, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::Config, "failed writing " + path.string());
}

}  // namespace

bool RunReport::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

json RunReport::data_json() const {
  json tables_json = json::array();
  for (const auto& t : tables) tables_json.push_back(t.to_json());
  json checks_json = json::array();
  for (const auto& c : checks)
    checks_json.push_back(
        {{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"threshold", c.threshold}, {"pass", c.pass}});
  return {{"config", config}, {"tables", tables_json}, {"checks", checks_json}, {"summary", summary},
          {"passed", passed()}};
}

json RunReport::to_json() const {
  return {{"header", {{"generated_at", utc_timestamp()}, {"wall_seconds", wall_seconds}}}, {"data", data_json()}};
}

RunReport run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = to_json(config);
  const std::string kind(to_string(config.kind));
  try {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, TypicalityParams>) {
            run_typicality(p, config.seed, report);
          } else if constexpr (std::is_same_v<T, ScalingParams>) {
            run_scaling(p, config.seed, report);
          } else if constexpr (std::is_same_v<T, CanonicalParams>) {
            run_canonical(p, config.seed, report);
          } else if constexpr (std::is_same_v<T, GrandParams>) {
            run_grand(p, config.seed, report);
          } else if constexpr (std::is_same_v<T, ThermalizeParams>) {
            run_thermalize(p, config.seed, report);
          } else if constexpr (std::is_same_v<T, HorizonParams>) {
            run_horizon(p, config.seed, report);
          } else {
            run_count(p, report);
          }
        },
        config.params);
  } catch (const Error& e) {
    throw Error(e.code(), kind + " experiment: " + e.what());
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<std::filesystem::path> write_report(const RunReport& report, const std::filesystem::path& dir,
                                                bool plots) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::filesystem::path& path, const std::string& content) {
    write_file(path, content);
    written.push_back(path);
  };
  emit(dir / "report.json", report.to_json().dump(2) + "\n");
  for (const auto& t : report.tables) {
    emit(dir / (t.name + ".csv"), t.to_csv());
    if (!t.meta.is_null()) emit(dir / (t.name + ".meta.json"), t.meta.dump(2) + "\n");
    if (!plots || t.rows.empty()) continue;
    if (t.name == "scaling") {
      emit(dir / "scaling.svg", emit_plot(t, PlotKind::Scaling));
    } else if (t.name == "trajectory") {
      emit(dir / "trajectory.svg", emit_plot(t, PlotKind::Trajectory));
    } else if (t.name == "populations") {
      emit(dir / "populations.svg", emit_plot(t, PlotKind::Populations));
    }
  }
  return written;
}

}  // namespace qtl::harness
