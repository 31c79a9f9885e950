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

#ifndef SELFREPEL_ESTIMATORS_HPP
#define SELFREPEL_ESTIMATORS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <selfrepel/gibbs.hpp>
#include <selfrepel/lattice.hpp>
#include <selfrepel/rng.hpp>
#include <selfrepel/spectral.hpp>

/**
 * \file
 * \brief Importance-sampling estimates of the partition function Z_N = E_P[exp(-gamma int l^2)]
 * and of expectations under the tilted measure Q_N, with free-field draws as proposals.
 */

namespace selfrepel {

using Observable = std::function<double(const FieldConfig&)>;

struct PartitionEstimate {
  double log_z = 0.0;
  /// Delta-method standard error of log_z.
  double standard_error = 0.0;
  std::size_t samples = 0;
  /// Kish effective sample size of the weights.
  double ess = 0.0;
  /// True when every raw weight exp(-gamma int l^2) is below the smallest normal double; log_z is
  /// still evaluated in log space.
  bool weights_underflow = false;
  std::string diagnostic;
};

struct TiltedEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  double ess = 0.0;
  std::size_t samples = 0;
  /// False when the effective sample size is below `kMinReliableEss`.
  bool reliable = true;
  std::string diagnostic;
};

inline constexpr double kMinReliableEss = 10.0;
inline constexpr std::size_t kMinImportanceSamples = 100;

/// Estimates log Z_N from `samples` free-field draws; log of the mean weight.
PartitionEstimate estimate_partition(const SpectralBasis& basis, const GibbsParams& params, std::size_t samples,
                                     CounterRng& rng);

/// Self-normalized importance sampling of E_Q[observable] with weights exp(-gamma int l^2).
TiltedEstimate estimate_tilted_expectation(const SpectralBasis& basis, const GibbsParams& params,
                                           const Observable& observable, std::size_t samples, CounterRng& rng);

/// Schedule for annealed importance sampling in gamma.
struct AnnealingSchedule {
  int steps = 200;               ///< Number of intermediate gammas, the last one equal to the target.
  double exponent = 2.0;         ///< gamma_k = gamma (k / steps)^exponent.
  int sweeps_per_step = 2;       ///< Single-site Metropolis sweeps at each intermediate gamma.
  double sigma = 1.0;            ///< Fixed single-site proposal scale.
  double dilation_probability = 0.05;  ///< Per-step probability of a global dilation move.
  double dilation_eta = 0.05;

  void validate() const;
};

struct AnnealedEstimate {
  TiltedEstimate tilted;
  PartitionEstimate partition;
  /// Final log weight of each particle, in particle order.
  std::vector<double> log_weights;
  std::vector<double> observations;
};

/// Annealed importance sampling: each particle starts as a free-field draw and is carried through
/// gamma_1 < ... < gamma_K = gamma by Metropolis moves (single-site and dilation) invariant for the intermediate
/// measure, accumulating log weight -(gamma_k - gamma_{k-1}) int l^2 before each transition.
/**
 * Particle j uses RNG stream j of `seed` for its moves and stream j + 2^63 for its initial draw.
 */
AnnealedEstimate estimate_tilted_annealed(const SpectralBasis& basis, const GibbsParams& params,
                                          const Observable& observable, std::size_t particles,
                                          const AnnealingSchedule& schedule, std::uint64_t seed);

/// Self-normalized estimate and partition estimate from log weights and observations.
TiltedEstimate weighted_estimate(const std::vector<double>& log_weights, const std::vector<double>& observations);
PartitionEstimate partition_from_log_weights(const std::vector<double>& log_weights);

}  // namespace selfrepel

#endif
