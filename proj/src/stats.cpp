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

#include <selfrepel/stats.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace selfrepel::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) {
    throw std::invalid_argument("stats::mean: empty sample");
  }
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) {
    throw std::invalid_argument("stats::variance: need at least two samples");
  }
  const double m = mean(xs);
  double ss = 0.0;
  for (const double x : xs) {
    ss += (x - m) * (x - m);
  }
  return ss / static_cast<double>(xs.size() - 1);
}

double standard_error(std::span<const double> xs) {
  return std::sqrt(variance(xs) / static_cast<double>(xs.size()));
}

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) {
    throw std::invalid_argument("stats::quantile: empty sample");
  }
  if (q < 0.0 || q > 1.0) {
    throw std::invalid_argument("stats::quantile: q outside [0, 1]");
  }
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] + frac * (xs[hi] - xs[lo]);
}

double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("stats::linear_fit: x and y lengths differ");
  }
  const auto n = xs.size();
  if (n < 2) {
    throw std::invalid_argument("stats::linear_fit: need at least two points");
  }
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("stats::linear_fit: all x values coincide");
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  fit.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = ys[i] - (fit.slope * xs[i] + fit.intercept);
    sse += fit.residuals[i] * fit.residuals[i];
  }
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.slope_se = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

LinearFit loglog_fit(std::span<const double> xs, std::span<const double> ys) {
  std::vector<double> lx(xs.size());
  std::vector<double> ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0)) {
      throw std::domain_error("stats::loglog_fit: non-positive x");
    }
    lx[i] = std::log(xs[i]);
  }
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (!(ys[i] > 0.0)) {
      throw std::domain_error("stats::loglog_fit: non-positive y");
    }
    ly[i] = std::log(ys[i]);
  }
  return linear_fit(lx, ly);
}

double autocorrelation_time(std::span<const double> xs) {
  const auto n = xs.size();
  if (n < 4) {
    return 1.0;
  }
  const double m = mean(xs);
  double c0 = 0.0;
  for (const double x : xs) {
    c0 += (x - m) * (x - m);
  }
  c0 /= static_cast<double>(n);
  if (c0 == 0.0) {
    return 1.0;
  }
  auto rho = [&](std::size_t lag) {
    double c = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) {
      c += (xs[i] - m) * (xs[i + lag] - m);
    }
    return c / static_cast<double>(n) / c0;
  };
  // Sum pairs Gamma_k = rho(2k) + rho(2k+1) while they stay positive.
  double tau = -1.0;
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    const double gamma = rho(2 * k) + rho(2 * k + 1);
    if (gamma <= 0.0) {
      break;
    }
    tau += 2.0 * gamma;
  }
  return std::max(tau, 1.0);
}

double effective_sample_size(std::span<const double> xs) {
  return static_cast<double>(xs.size()) / autocorrelation_time(xs);
}

double correlated_standard_error(std::span<const double> xs) {
  return std::sqrt(variance(xs) * autocorrelation_time(xs) / static_cast<double>(xs.size()));
}

double weights_effective_sample_size(std::span<const double> weights) {
  double s = 0.0;
  double s2 = 0.0;
  for (const double w : weights) {
    s += w;
    s2 += w * w;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

}  // namespace selfrepel::stats
