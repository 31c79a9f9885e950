// Copyright 2026 The selfrepel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SELFREPEL_STATS_HPP
#define SELFREPEL_STATS_HPP

#include <span>
#include <vector>

namespace selfrepel::stats {

double mean(std::span<const double> xs);
/// Unbiased sample variance.
double variance(std::span<const double> xs);
/// Standard error of the mean of independent samples.
double standard_error(std::span<const double> xs);
/// Linear-interpolated quantile, q in [0, 1].
double quantile(std::vector<double> xs, double q);
double median(std::vector<double> xs);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;
};

/// Ordinary least squares y = slope * x + intercept. Needs at least two points.
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

/// Least-squares slope of log y against log x.
LinearFit loglog_fit(std::span<const double> xs, std::span<const double> ys);

/// Integrated autocorrelation time by Geyer's initial positive sequence estimator.
double autocorrelation_time(std::span<const double> xs);

/// Effective sample size of a correlated series, n / tau.
double effective_sample_size(std::span<const double> xs);

/// Standard error of the mean of a correlated series, sqrt(var * tau / n).
double correlated_standard_error(std::span<const double> xs);

/// Kish effective sample size (sum w)^2 / sum w^2 of importance weights.
double weights_effective_sample_size(std::span<const double> weights);

}  // namespace selfrepel::stats

#endif
