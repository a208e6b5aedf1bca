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

#include "qtl/stats.hpp"

#include <cmath>
#include <numeric>

#include "qtl/errors.hpp"

namespace qtl::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::NoData, "mean of empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

Estimate mean_estimate(std::span<const double> xs) {
  return {mean(xs), stddev(xs) / std::sqrt(static_cast<double>(xs.size()))};
}

Estimate jackknife_rms(std::span<const double> squares) {
  const std::size_t n = squares.size();
  if (n < 2) throw Error(ErrorCode::InvalidParameter, "jackknife needs at least 2 samples");
  const double total = std::accumulate(squares.begin(), squares.end(), 0.0);
  const double nd = static_cast<double>(n);
  const double full = std::sqrt(std::max(total / nd, 0.0));

  std::vector<double> loo(n);
  for (std::size_t s = 0; s < n; ++s)
    loo[s] = std::sqrt(std::max((total - squares[s]) / (nd - 1.0), 0.0));
  const double loo_mean = std::accumulate(loo.begin(), loo.end(), 0.0) / nd;
  double acc = 0.0;
  for (double v : loo) acc += (v - loo_mean) * (v - loo_mean);
  return {full, std::sqrt((nd - 1.0) / nd * acc)};
}

Estimate jackknife_of_means(
    const std::vector<std::vector<double>>& rows,
    const std::function<double(const std::vector<double>&)>& estimator) {
  const std::size_t n = rows.size();
  if (n < 2) throw Error(ErrorCode::InvalidParameter, "jackknife needs at least 2 samples");
  const std::size_t width = rows.front().size();
  std::vector<double> totals(width, 0.0);
  for (const auto& row : rows) {
    if (row.size() != width) throw Error(ErrorCode::Shape, "ragged jackknife rows");
    for (std::size_t j = 0; j < width; ++j) totals[j] += row[j];
  }
  const double nd = static_cast<double>(n);
  std::vector<double> means(width);
  for (std::size_t j = 0; j < width; ++j) means[j] = totals[j] / nd;
  const double full = estimator(means);

  std::vector<double> loo(n);
  std::vector<double> partial(width);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t j = 0; j < width; ++j)
      partial[j] = (totals[j] - rows[s][j]) / (nd - 1.0);
    loo[s] = estimator(partial);
  }
  const double loo_mean = std::accumulate(loo.begin(), loo.end(), 0.0) / nd;
  double acc = 0.0;
  for (double v : loo) acc += (v - loo_mean) * (v - loo_mean);
  return {full, std::sqrt((nd - 1.0) / nd * acc)};
}

LinearFit least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& weights) {
  if (design.rows() != y.size())
    throw Error(ErrorCode::Shape, "design rows do not match observations");
  Eigen::MatrixXd x = design;
  Eigen::VectorXd rhs = y;
  if (weights.size() > 0) {
    if (weights.size() != y.size()) throw Error(ErrorCode::Shape, "weight count mismatch");
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const double w = std::sqrt(weights(r));
      x.row(r) *= w;
      rhs(r) *= w;
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  LinearFit fit;
  fit.rank = qr.rank();
  if (fit.rank < x.cols())
    throw Error(ErrorCode::UnderdeterminedFit, "design matrix is rank deficient");
  fit.coefficients = qr.solve(rhs);
  const Eigen::VectorXd residual = rhs - x * fit.coefficients;
  fit.residual_norm = residual.norm();

  const Eigen::Index dof = x.rows() - x.cols();
  fit.standard_errors = Eigen::VectorXd::Zero(x.cols());
  if (dof > 0) {
    const double s2 = residual.squaredNorm() / static_cast<double>(dof);
    const Eigen::MatrixXd cov = (x.transpose() * x).inverse() * s2;
    fit.standard_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  }
  return fit;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::Shape, "fit_line size mismatch");
  if (x.size() < 2) throw Error(ErrorCode::UnderdeterminedFit, "fit_line needs two points");
  Eigen::MatrixXd design(x.size(), 2);
  Eigen::VectorXd obs(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = x[i];
    obs(i) = y[i];
  }
  const LinearFit fit = least_squares(design, obs);
  return {fit.coefficients(1), fit.coefficients(0), fit.standard_errors(1)};
}

}  // namespace qtl::stats
