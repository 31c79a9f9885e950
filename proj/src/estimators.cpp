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

#include <selfrepel/estimators.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <selfrepel/free_field.hpp>
#include <selfrepel/mcmc.hpp>
#include <selfrepel/penalty.hpp>
#include <selfrepel/stats.hpp>

namespace selfrepel {

namespace {

void check_samples(std::size_t samples, const char* what) {
  if (samples < kMinImportanceSamples) {
    throw std::invalid_argument(std::string(what) + ": need at least " + std::to_string(kMinImportanceSamples) +
                                " samples, got " + std::to_string(samples));
  }
}

std::vector<double> shifted_weights(const std::vector<double>& log_weights, double& shift) {
  shift = *std::max_element(log_weights.begin(), log_weights.end());
  std::vector<double> w(log_weights.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    w[j] = std::exp(log_weights[j] - shift);
  }
  return w;
}

}  // namespace

PartitionEstimate partition_from_log_weights(const std::vector<double>& log_weights) {
  if (log_weights.empty()) {
    throw std::invalid_argument("partition_from_log_weights: no weights");
  }
  PartitionEstimate out;
  out.samples = log_weights.size();
  double shift = 0.0;
  const auto w = shifted_weights(log_weights, shift);
  if (!std::isfinite(shift)) {
    out.log_z = -std::numeric_limits<double>::infinity();
    out.standard_error = std::numeric_limits<double>::infinity();
    out.weights_underflow = true;
    out.diagnostic = "all weights are zero";
    return out;
  }
  const double m = stats::mean(w);
  out.log_z = shift + std::log(m);
  out.standard_error = w.size() > 1 ? stats::standard_error(w) / m : 0.0;
  out.ess = stats::weights_effective_sample_size(w);
  if (shift < std::log(std::numeric_limits<double>::min())) {
    out.weights_underflow = true;
    out.diagnostic = "every raw weight underflows double precision; log_z evaluated in log space (max log weight " +
                     std::to_string(shift) + ")";
  }
  return out;
}

TiltedEstimate weighted_estimate(const std::vector<double>& log_weights, const std::vector<double>& observations) {
  if (log_weights.size() != observations.size() || log_weights.empty()) {
    throw std::invalid_argument("weighted_estimate: weights and observations must be non-empty and equal in size");
  }
  TiltedEstimate out;
  out.samples = log_weights.size();
  double shift = 0.0;
  const auto w = shifted_weights(log_weights, shift);
  double sum_w = 0.0;
  double sum_wo = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    sum_w += w[j];
    sum_wo += w[j] * observations[j];
  }
  out.estimate = sum_wo / sum_w;
  double spread = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double dev = observations[j] - out.estimate;
    spread += w[j] * w[j] * dev * dev;
  }
  out.standard_error = std::sqrt(spread) / sum_w;
  out.ess = stats::weights_effective_sample_size(w);
  if (out.ess < kMinReliableEss) {
    out.reliable = false;
    out.diagnostic = "effective sample size " + std::to_string(out.ess) + " below " + std::to_string(kMinReliableEss);
  }
  return out;
}

PartitionEstimate estimate_partition(const SpectralBasis& basis, const GibbsParams& params, std::size_t samples,
                                     CounterRng& rng) {
  check_samples(samples, "estimate_partition");
  if (params.gamma() == 0.0) {
    PartitionEstimate out;
    out.samples = samples;
    out.ess = static_cast<double>(samples);
    return out;
  }
  const FreeFieldSampler sampler(basis, params);
  std::vector<double> log_weights(samples);
  for (auto& lw : log_weights) {
    lw = -params.gamma() * penalty_integral(sampler.sample(rng)).total;
  }
  return partition_from_log_weights(log_weights);
}

TiltedEstimate estimate_tilted_expectation(const SpectralBasis& basis, const GibbsParams& params,
                                           const Observable& observable, std::size_t samples, CounterRng& rng) {
  check_samples(samples, "estimate_tilted_expectation");
  const FreeFieldSampler sampler(basis, params);
  std::vector<double> log_weights(samples);
  std::vector<double> values(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const auto field = sampler.sample(rng);
    log_weights[j] = params.gamma() == 0.0 ? 0.0 : -params.gamma() * penalty_integral(field).total;
    values[j] = observable(field);
  }
  return weighted_estimate(log_weights, values);
}

void AnnealingSchedule::validate() const {
  if (steps < 1 || sweeps_per_step < 0 || !(exponent > 0.0) || !(sigma > 0.0)) {
    throw std::invalid_argument("AnnealingSchedule: need steps >= 1, sweeps >= 0, exponent > 0, sigma > 0");
  }
}

AnnealedEstimate estimate_tilted_annealed(const SpectralBasis& basis, const GibbsParams& params,
                                          const Observable& observable, std::size_t particles,
                                          const AnnealingSchedule& schedule, std::uint64_t seed) {
  check_samples(particles, "estimate_tilted_annealed");
  schedule.validate();
  const FreeFieldSampler sampler(basis, params);
  std::vector<double> gammas(static_cast<std::size_t>(schedule.steps) + 1);
  for (int k = 0; k <= schedule.steps; ++k) {
    gammas[static_cast<std::size_t>(k)] =
        params.gamma() * std::pow(static_cast<double>(k) / schedule.steps, schedule.exponent);
  }
  gammas.back() = params.gamma();

  MCMCConfig moves;
  moves.dilation_probability = schedule.dilation_probability;
  moves.dilation_eta = schedule.dilation_eta;
  moves.validate();
  const auto n = basis.box().site_count();
  const std::uint64_t draw_stream = std::uint64_t{1} << 63;

  AnnealedEstimate out;
  out.log_weights.resize(particles);
  out.observations.resize(particles);
  for (std::size_t j = 0; j < particles; ++j) {
    CounterRng draw(seed, draw_stream + j);
    ChainState state(sampler.sample(draw), seed, j, params.gamma() > 0.0);
    state.set_sigma(schedule.sigma);
    double log_weight = 0.0;
    for (std::size_t k = 1; k < gammas.size(); ++k) {
      const double step = gammas[k] - gammas[k - 1];
      if (step != 0.0) {
        log_weight -= step * state.penalty();
      }
      const GibbsParams stage(params.beta(), gammas[k]);
      for (int s = 0; s < schedule.sweeps_per_step; ++s) {
        for (std::size_t m = 0; m < n; ++m) {
          (void)mcmc_step(state, stage, moves);
        }
      }
    }
    out.log_weights[j] = log_weight;
    out.observations[j] = observable(state.field());
  }
  out.tilted = weighted_estimate(out.log_weights, out.observations);
  out.partition = partition_from_log_weights(out.log_weights);
  return out;
}

}  // namespace selfrepel
