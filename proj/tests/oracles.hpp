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

// Independent reference implementations used only by the tests.

#ifndef QTL_TESTS_ORACLES_HPP
#define QTL_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "qtl/errors.hpp"
#include "qtl/hilbert.hpp"

namespace oracle {

using qtl::CMatrix;
using qtl::Complex;
using qtl::CVector;
using qtl::Index;

/// Reduced matrix by explicit summation over every traced multi-index.
inline CMatrix partial_trace(const CMatrix& rho, const std::vector<Index>& dims, const std::vector<Index>& keep) {
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

/// exp(-iHt) psi by scaling the step until ||H dt||_inf <= 1/2 and summing
/// the Taylor series at each step.
inline CVector series_propagate(const CMatrix& h, const CVector& psi, double t) {
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

/// Counts tuples in the full box prod_l [0, floor(E / w_l)].
inline std::uint64_t exhaustive_count(const std::vector<double>& freqs, double energy, double tol = 1e-9) {
  if (freqs.empty()) return std::abs(energy) <= tol ? 1 : 0;
  std::vector<int> limit;
  for (double w : freqs) limit.push_back(static_cast<int>(std::floor((energy + tol) / w)));
  for (int l : limit)
    if (l < 0) return 0;
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

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

/// Quantile of the semicircle law of radius R, by bisection on its CDF.
inline double semicircle_quantile(double q, double radius) {
  auto cdf = [](double u) { return 0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / M_PI; };
  double lo = -1.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < q ? lo : hi) = mid;
  }
  return radius * 0.5 * (lo + hi);
}

inline double quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  return i + 1 < xs.size() ? xs[i] * (1.0 - frac) + xs[i + 1] * frac : xs[i];
}

/// Random mixed state: average of `terms` random projectors.
inline CMatrix random_density(Index n, qtl::RngStream& rng, int terms = 3) {
  CMatrix rho = CMatrix::Zero(n, n);
  std::vector<double> w;
  double total = 0.0;
  for (int j = 0; j < terms; ++j) {
    w.push_back(0.1 + rng.uniform());
    total += w.back();
  }
  for (int j = 0; j < terms; ++j) rho += (w[j] / total) * qtl::density_of(qtl::sample_uniform_state(n, rng)).entries();
  return rho;
}

template <class Fn>
qtl::ErrorCode error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const qtl::Error& e) {
    return e.code();
  }
  throw std::logic_error("expected a qtl::Error");
}

}  // namespace oracle

#endif  // QTL_TESTS_ORACLES_HPP
