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

#ifndef QTL_STATS_HPP
#define QTL_STATS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qtl::stats {

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
};

double mean(std::span<const double> xs);
/// Unbiased sample standard deviation (N-1 denominator).
double stddev(std::span<const double> xs);
/// Sample mean with its standard error std/sqrt(N).
Estimate mean_estimate(std::span<const double> xs);

/// Jackknife of sqrt(mean(x)) for non-negative x.
Estimate jackknife_rms(std::span<const double> squares);

/// Jackknife of an arbitrary functional of column means. `rows[s]` holds
/// the observation vector of sample s; every row has the same length.
Estimate jackknife_of_means(
    const std::vector<std::vector<double>>& rows,
    const std::function<double(const std::vector<double>&)>& estimator);

/// Ordinary (optionally weighted) least squares y ~ X beta.
struct LinearFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd standard_errors;  // from residual variance; 0 if dof == 0
  double residual_norm = 0.0;
  Eigen::Index rank = 0;
};

LinearFit least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& weights = Eigen::VectorXd());

/// Slope and intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_error = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace qtl::stats

#endif  // QTL_STATS_HPP
