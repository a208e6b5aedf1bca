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

#include "qtl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "qtl/parallel.hpp"

namespace qtl::dynamics {
namespace {

constexpr int kMaxLatticeDenominator = 256;
constexpr std::uint64_t kMaxLatticeSites = 50'000'000;

void require_frequencies(std::span<const double> frequencies) {
  for (double w : frequencies)
    if (!(w > 0.0) || !std::isfinite(w))
      throw Error(ErrorCode::InvalidParameter, "oscillator frequencies must be positive and finite");
}

// Occupations i >= 0 of a single oscillator with |rem - i w| <= tol.
std::pair<long long, long long> occupation_window(double rem, double w, double tol) {
  const long long lo = std::max(0LL, static_cast<long long>(std::ceil((rem - tol) / w)));
  const long long hi = static_cast<long long>(std::floor((rem + tol) / w));
  return {lo, hi};
}

// Common unit u with every w_l / u integral, if one exists with small denominator.
std::optional<double> lattice_unit(std::span<const double> frequencies) {
  const double w_min = *std::min_element(frequencies.begin(), frequencies.end());
  for (int k = 1; k <= kMaxLatticeDenominator; ++k) {
    const double u = w_min / k;
    const bool ok = std::all_of(frequencies.begin(), frequencies.end(), [&](double w) {
      const double r = w / u;
      return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r);
    });
    if (ok) return u;
  }
  return std::nullopt;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
  if (a > cap || b > cap - a)
    throw Error(ErrorCode::CountOverflow, "state count exceeds the configured cap of " + std::to_string(cap));
  return a + b;
}

std::uint64_t count_on_lattice(std::span<const double> frequencies, double energy, double tol,
                               double unit, std::uint64_t cap) {
  const long long m_lo = std::max(0LL, static_cast<long long>(std::ceil((energy - tol) / unit - 1e-9)));
  const long long m_hi = static_cast<long long>(std::floor((energy + tol) / unit + 1e-9));
  if (m_hi < m_lo) return 0;
  // Lattice points within tol of E; re-check against the real energy.
  std::vector<long long> targets;
  for (long long m = m_lo; m <= m_hi; ++m)
    if (std::abs(static_cast<double>(m) * unit - energy) <= tol) targets.push_back(m);
  if (targets.empty()) return 0;
  if (static_cast<std::uint64_t>(m_hi) + 1 > kMaxLatticeSites)
    throw Error(ErrorCode::CountOverflow, "energy lattice too fine for counting");

  std::vector<std::uint64_t> ways(static_cast<std::size_t>(m_hi) + 1, 0);
  ways[0] = 1;
  for (double w : frequencies) {
    const auto step = static_cast<std::size_t>(std::llround(w / unit));
    for (std::size_t e = step; e < ways.size(); ++e) ways[e] = checked_add(ways[e], ways[e - step], cap);
  }
  std::uint64_t total = 0;
  for (long long m : targets) total = checked_add(total, ways[static_cast<std::size_t>(m)], cap);
  return total;
}

// Depth-first walk over tuples in lexicographic order; `visit` sees each
// complete tuple.
void enumerate(std::span<const double> frequencies, double energy, double tol,
               const std::function<void(const Occupation&)>& visit) {
  Occupation current(frequencies.size(), 0);
  std::function<void(std::size_t, double)> walk = [&](std::size_t l, double rem) {
    const double w = frequencies[l];
    if (l + 1 == frequencies.size()) {
      const auto [lo, hi] = occupation_window(rem, w, tol);
      for (long long i = lo; i <= hi; ++i) {
        current[l] = static_cast<int>(i);
        visit(current);
      }
      return;
    }
    const long long top = static_cast<long long>(std::floor((rem + tol) / w));
    for (long long i = 0; i <= top; ++i) {
      current[l] = static_cast<int>(i);
      walk(l + 1, rem - static_cast<double>(i) * w);
    }
  };
  if (frequencies.empty()) {
    if (std::abs(energy) <= tol) visit(current);
    return;
  }
  walk(0, energy);
}

double degeneracy_of_rest(const std::vector<double>& rest, double energy, double tol) {
  if (energy < -tol) return 0.0;
  return static_cast<double>(count_states(rest, energy, tol));
}

}  // namespace

// ---------------------------------------------------------------------------
// Chain, counting and basis

OscillatorChain::OscillatorChain(std::vector<double> frequencies) : frequencies_(std::move(frequencies)) {
  if (frequencies_.empty()) throw Error(ErrorCode::InvalidParameter, "oscillator chain is empty");
  require_frequencies(frequencies_);
}

int OscillatorChain::max_occupation(std::size_t l, double energy, double tol) const {
  return std::max(0, static_cast<int>(std::floor((energy + tol) / frequency(l))));
}

std::uint64_t count_states(std::span<const double> frequencies, double energy, double match_tol,
                           std::uint64_t cap) {
  require_frequencies(frequencies);
  if (!(match_tol >= 0.0)) throw Error(ErrorCode::InvalidParameter, "match_tol must be non-negative");
  if (energy < -match_tol) throw Error(ErrorCode::InvalidParameter, "total energy must be >= 0");
  if (frequencies.empty()) return std::abs(energy) <= match_tol ? 1 : 0;

  if (const auto unit = lattice_unit(frequencies))
    return count_on_lattice(frequencies, energy, match_tol, *unit, cap);

  std::uint64_t total = 0;
  enumerate(frequencies, energy, match_tol, [&](const Occupation&) { total = checked_add(total, 1, cap); });
  return total;
}

ShellBasis::ShellBasis(OscillatorChain chain, double energy, std::vector<Occupation> states)
    : chain_(std::move(chain)), energy_(energy), states_(std::move(states)) {
  if (states_.empty()) throw Error(ErrorCode::NoCompatibleStates, "shell basis is empty");
  for (Index i = 0; i < static_cast<Index>(states_.size()); ++i) {
    if (states_[i].size() != chain_.size()) throw Error(ErrorCode::Shape, "occupation tuple has wrong length");
    index_.emplace(states_[i], i);
  }
}

std::optional<Index> ShellBasis::index_of(const Occupation& occupation) const {
  const auto it = index_.find(occupation);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ShellBasis build_shell_basis(const OscillatorChain& chain, double energy, double match_tol) {
  if (energy < -match_tol) throw Error(ErrorCode::InvalidParameter, "total energy must be >= 0");
  const std::uint64_t expected = count_states(chain.frequencies(), energy, match_tol);
  if (expected == 0)
    throw Error(ErrorCode::NoCompatibleStates, "no occupation tuple has energy " + std::to_string(energy));
  if (expected > kMaxShellStates)
    throw Error(ErrorCode::InvalidParameter,
                "shell has " + std::to_string(expected) + " states; dense storage is capped at " +
                    std::to_string(kMaxShellStates));
  std::vector<Occupation> states;
  states.reserve(expected);
  enumerate(chain.frequencies(), energy, match_tol, [&](const Occupation& o) { states.push_back(o); });
  return ShellBasis(chain, energy, std::move(states));
}

HermitianOperator perturbed_hamiltonian(const ShellBasis& basis, double epsilon, RngStream& rng) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidParameter, "interaction strength must be positive");
  return sample_gue(basis.size(), epsilon, rng);
}

// ---------------------------------------------------------------------------
// Level spacing

SpacingRule parse_spacing_rule(std::string_view name) {
  if (name == "mean-level-spacing") return SpacingRule::MeanLevelSpacing;
  if (name == "nearest-neighbor") return SpacingRule::MeanNearestNeighborGap;
  throw Error(ErrorCode::Config, "unknown spacing rule '" + std::string(name) +
                                     "' (expected mean-level-spacing or nearest-neighbor)");
}

std::string_view to_string(SpacingRule rule) {
  return rule == SpacingRule::MeanLevelSpacing ? "mean-level-spacing" : "nearest-neighbor";
}

double level_spacing(const HermitianOperator& h_int, SpacingRule rule) {
  const Index n = h_int.dim();
  if (n < 2) throw Error(ErrorCode::InvalidDimension, "level spacing needs at least two levels");
  const RVector values = h_int.is_diagonal()
                             ? RVector(h_int.entries().diagonal().real())
                             : h_int.eigensystem()->values;
  std::vector<double> sorted(values.data(), values.data() + n);
  std::sort(sorted.begin(), sorted.end());
  const double width = sorted.back() - sorted.front();
  if (!(width > 0.0)) throw Error(ErrorCode::DegenerateInteraction, "interaction has zero spectral width");
  if (rule == SpacingRule::MeanLevelSpacing) return width / static_cast<double>(n - 1);

  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    double gap = std::numeric_limits<double>::infinity();
    if (i > 0) gap = std::min(gap, sorted[i] - sorted[i - 1]);
    if (i + 1 < n) gap = std::min(gap, sorted[i + 1] - sorted[i]);
    acc += gap;
  }
  const double mean_gap = acc / static_cast<double>(n);
  if (!(mean_gap > 0.0)) throw Error(ErrorCode::DegenerateInteraction, "interaction levels coincide");
  return mean_gap;
}

double relaxation_time(const HermitianOperator& h_int, SpacingRule rule) {
  return 1.0 / level_spacing(h_int, rule);
}

// ---------------------------------------------------------------------------
// Reference states

DensityMatrix reference_from_degeneracies(std::span<const double> degeneracies) {
  double total = 0.0;
  for (double d : degeneracies) {
    if (d < 0.0) throw Error(ErrorCode::InvalidParameter, "negative degeneracy");
    total += d;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::NoCompatibleStates, "all reference weights vanish");
  std::vector<double> p(degeneracies.begin(), degeneracies.end());
  for (double& x : p) x /= total;
  return DensityMatrix::diagonal(p);
}

BoltzmannReference boltzmann_reference(const OscillatorChain& chain, double energy, std::size_t l,
                                       double match_tol) {
  if (l >= chain.size()) throw Error(ErrorCode::InvalidParameter, "oscillator index out of range");
  std::vector<double> rest;
  for (std::size_t j = 0; j < chain.size(); ++j)
    if (j != l) rest.push_back(chain.frequency(j));
  const double w = chain.frequency(l);

  const int top = chain.max_occupation(l, energy, match_tol);
  std::vector<double> d(static_cast<std::size_t>(top) + 1);
  for (int i = 0; i <= top; ++i) d[i] = degeneracy_of_rest(rest, energy - w * i, match_tol);

  BoltzmannReference ref{reference_from_degeneracies(d), d, std::nullopt, std::nullopt};
  if (rest.empty()) return ref;

  // d ln d_rest / dE at E, stepping by omega_l.
  const double here = degeneracy_of_rest(rest, energy, match_tol);
  const double up = degeneracy_of_rest(rest, energy + w, match_tol);
  const double down = degeneracy_of_rest(rest, energy - w, match_tol);
  std::optional<double> beta;
  if (up > 0.0 && down > 0.0) {
    beta = (std::log(up) - std::log(down)) / (2.0 * w);
  } else if (up > 0.0 && here > 0.0) {
    beta = (std::log(up) - std::log(here)) / w;
  }
  if (beta) {
    std::vector<EnergyLevel> levels;
    for (int i = 0; i <= top; ++i) levels.push_back({w * i, 1});
    ref.beta = beta;
    ref.exponential = gibbs_state(levels, *beta);
  }
  return ref;
}

// ---------------------------------------------------------------------------
// Marginals and mutual information

std::vector<DensityMatrix> oscillator_marginals(const PureState& state, const ShellBasis& basis) {
  if (state.dim() != basis.size()) throw Error(ErrorCode::Shape, "state does not match the shell basis");
  const std::size_t count = basis.chain().size();
  std::vector<DensityMatrix> out;
  out.reserve(count);
  for (std::size_t l = 0; l < count; ++l) {
    const int top = basis.chain().max_occupation(l, basis.energy());
    // group basis states by the occupations of every other oscillator
    std::map<Occupation, std::vector<Index>> groups;
    for (Index a = 0; a < basis.size(); ++a) {
      Occupation key = basis[a];
      key.erase(key.begin() + static_cast<std::ptrdiff_t>(l));
      groups[key].push_back(a);
    }
    CMatrix rho = CMatrix::Zero(top + 1, top + 1);
    for (const auto& [key, members] : groups)
      for (Index a : members)
        for (Index b : members) rho(basis[a][l], basis[b][l]) += state[a] * std::conj(state[b]);
    out.emplace_back(std::move(rho));
  }
  return out;
}

double mutual_information(const PureState& state, std::span<const Index> dims) {
  double total = 0.0;
  for (Index l = 0; l < static_cast<Index>(dims.size()); ++l) {
    const Index keep[] = {l};
    total += von_neumann_entropy(partial_trace(state, dims, keep));
  }
  return total;
}

double shell_mutual_information(const PureState& state, const ShellBasis& basis) {
  double total = 0.0;
  for (const auto& rho : oscillator_marginals(state, basis)) total += von_neumann_entropy(rho);
  return total;
}

// ---------------------------------------------------------------------------
// Thermalization

Trajectory thermalization_run(const OscillatorChain& chain, double energy, const Occupation& initial,
                              double epsilon, std::span<const double> times, RngStream& rng,
                              SpacingRule rule) {
  const ShellBasis basis = build_shell_basis(chain, energy);
  const auto start = basis.index_of(initial);
  if (!start) {
    std::string tuple;
    for (int i : initial) tuple += (tuple.empty() ? "" : ",") + std::to_string(i);
    throw Error(ErrorCode::InvalidInitialState,
                "initial occupation (" + tuple + ") is not in the energy " + std::to_string(energy) + " shell");
  }
  const HermitianOperator h_int = perturbed_hamiltonian(basis, epsilon, rng).diagonalized();
  const PureState psi0 = PureState::basis_state(basis.size(), *start);
  const DensityMatrix reference = boltzmann_reference(chain, energy, 0).rho;

  Trajectory trajectory;
  trajectory.shell_dim = basis.size();
  trajectory.relaxation_time = basis.size() >= 2 ? relaxation_time(h_int, rule) : 0.0;
  trajectory.points.resize(times.size());
  parallel_for(times.size(), [&](std::size_t k) {
    const PureState psi = evolve(h_int, psi0, times[k]);
    TrajectoryPoint& point = trajectory.points[k];
    point.t = times[k];
    point.norm_drift = std::abs(psi.amplitudes().norm() - 1.0);
    point.marginals = oscillator_marginals(psi, basis);
    for (const auto& rho : point.marginals) {
      point.entropies.push_back(von_neumann_entropy(rho));
      point.mutual_information += point.entropies.back();
    }
    point.distance_to_reference = trace_distance(point.marginals.front(), reference);
  });
  return trajectory;
}

DensityMatrix average_marginal(const Trajectory& trajectory, std::size_t l, double from, double to) {
  CMatrix acc;
  std::size_t used = 0;
  for (const auto& point : trajectory.points) {
    if (point.t < from || point.t > to) continue;
    const CMatrix& m = point.marginals.at(l).entries();
    if (used == 0) acc = CMatrix::Zero(m.rows(), m.cols());
    acc += m;
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::NoData, "no trajectory points in the averaging window");
  return DensityMatrix(acc / static_cast<double>(used));
}

ShellBaseline haar_shell_baseline(const ShellBasis& basis, std::size_t samples, RngStream& rng) {
  if (samples < 2) throw Error(ErrorCode::InvalidParameter, "baseline needs at least 2 samples");
  const DensityMatrix reference =
      boltzmann_reference(basis.chain(), basis.energy(), 0).rho;
  const auto rows = sample_chunked(samples, rng, [&](RngStream& local) {
    const PureState psi = sample_uniform_state(basis.size(), local);
    const auto marginals = oscillator_marginals(psi, basis);
    double mi = 0.0;
    for (const auto& rho : marginals) mi += von_neumann_entropy(rho);
    return std::pair<double, double>{mi, trace_distance(marginals.front(), reference)};
  });
  std::vector<double> mi, dist;
  for (const auto& [a, b] : rows) {
    mi.push_back(a);
    dist.push_back(b);
  }
  return {stats::mean_estimate(mi), stats::mean_estimate(dist), samples};
}

}  // namespace qtl::dynamics
