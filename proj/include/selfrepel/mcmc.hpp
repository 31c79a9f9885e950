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

#ifndef SELFREPEL_MCMC_HPP
#define SELFREPEL_MCMC_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include <selfrepel/gibbs.hpp>
#include <selfrepel/lattice.hpp>
#include <selfrepel/penalty.hpp>
#include <selfrepel/rng.hpp>

/**
 * \file
 * \brief Metropolis sampler for the self-repelling tilted measure.
 *
 * The target on zero-mean fields is proportional to exp(-beta H(u) - gamma * integral l^2).
 * Both terms depend only on differences u(x) - u(y), so the chain stores raw positions whose mean
 * is allowed to wander; the zero-mean field is recovered by subtracting the mean. A single-site
 * move of raw value u_i(x) by delta is the zero-mean move delta (e_x - 1/n) followed by a
 * translation, so the chain on raw positions projects onto the chain on the zero-mean subspace.
 */

namespace selfrepel {

struct MCMCConfig {
  double sigma = 0.5;                  ///< Initial single-site proposal standard deviation.
  double dilation_probability = 0.05;  ///< Probability that a step proposes a global dilation.
  double dilation_eta = 0.05;          ///< log s ~ Uniform(-eta, eta).
  std::int64_t sweeps = 1000;          ///< Measurement sweeps; one sweep is n steps.
  std::int64_t burn_in = 200;          ///< Sweeps before measurement.
  std::int64_t thinning = 1;           ///< Sweeps between recorded measurements.
  std::uint64_t seed = 1;
  bool adapt_sigma = true;             ///< Tune sigma toward 30-40% local acceptance during burn-in.
  std::int64_t cache_check_interval = 10000;  ///< Steps between full recomputes of the caches.

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

enum class MoveKind { kLocal, kDilation };

struct StepResult {
  MoveKind kind = MoveKind::kLocal;
  bool accepted = false;
  double log_acceptance = 0.0;
};

/// A chain: positions, cached energy and penalty, cell list, RNG stream and step counter.
class ChainState {
 public:
  /// Starts from `initial`. The penalty is tracked when `track_penalty` is true; with gamma = 0 it
  /// does not enter the target and tracking it only costs time.
  ChainState(const FieldConfig& initial, std::uint64_t seed, std::uint64_t chain_id, bool track_penalty = true);

  [[nodiscard]] const LatticeBox& box() const noexcept { return box_; }
  [[nodiscard]] int component_count() const noexcept { return dim_; }
  [[nodiscard]] std::size_t site_count() const noexcept { return box_.site_count(); }

  /// Zero-mean field.
  [[nodiscard]] FieldConfig field() const;
  /// Raw site-major positions (mean not removed).
  [[nodiscard]] std::span<const double> positions() const noexcept { return positions_; }

  [[nodiscard]] double energy() const noexcept { return energy_; }
  /// Cached integral of l^2; recomputed on demand when the penalty is not tracked.
  [[nodiscard]] double penalty() const;
  [[nodiscard]] bool tracks_penalty() const noexcept { return track_penalty_; }

  [[nodiscard]] double recompute_energy() const;
  [[nodiscard]] double recompute_penalty() const;

  /// Recomputes both caches, re-centers the raw positions and rebuilds the cell list. Returns the
  /// largest relative discrepancy found.
  double resynchronize();

  [[nodiscard]] std::uint64_t steps() const noexcept { return steps_; }
  [[nodiscard]] std::uint64_t chain_id() const noexcept { return chain_id_; }
  [[nodiscard]] CounterRng& rng() noexcept { return rng_; }
  [[nodiscard]] const CounterRng& rng() const noexcept { return rng_; }

  [[nodiscard]] double sigma() const noexcept { return sigma_; }
  void set_sigma(double sigma);

  /// Serializes box, field values in lexicographic site order, RNG state, step counter and sigma.
  [[nodiscard]] nlohmann::json checkpoint(const GibbsParams& params) const;
  /// Restores a checkpoint; the caches are recomputed. Also returns the stored parameters.
  static ChainState restore(const nlohmann::json& record, GibbsParams* params = nullptr);

 private:
  friend StepResult mcmc_step(ChainState&, const GibbsParams&, const MCMCConfig&);
  friend StepResult local_move(ChainState&, const GibbsParams&, SiteIndex, int, double, double);

  /// Sum over other points of the overlap with `p`, skipping `self`.
  [[nodiscard]] double overlap_with_others(const double* p, std::uint32_t self) const;

  LatticeBox box_;
  int dim_;
  std::vector<double> positions_;
  double energy_ = 0.0;
  double penalty_ = 0.0;
  bool track_penalty_;
  CellList cells_;
  CounterRng rng_;
  std::uint64_t chain_id_;
  std::uint64_t steps_ = 0;
  double sigma_ = 0.5;
};

/// Unnormalized log density -beta H(u) - gamma * integral l^2 from the caches.
double log_target(const ChainState& state, const GibbsParams& params);

/// Proposes moving component `component` of `site` by `displacement`; accepts when
/// log(uniform) < log acceptance, with `uniform` supplied by the caller.
StepResult local_move(ChainState& state, const GibbsParams& params, SiteIndex site, int component,
                      double displacement, double uniform);

/// One Metropolis step: a single-site Gaussian move, or with probability
/// `cfg.dilation_probability` a global dilation u -> s u with Jacobian (n-1) D log s.
StepResult mcmc_step(ChainState& state, const GibbsParams& params, const MCMCConfig& cfg);

struct ChainSummary {
  std::uint64_t local_proposals = 0;
  std::uint64_t local_accepted = 0;
  std::uint64_t dilation_proposals = 0;
  std::uint64_t dilation_accepted = 0;
  std::uint64_t cache_resyncs = 0;
  double max_cache_drift = 0.0;
  double final_sigma = 0.0;
  std::uint64_t measure_step_begin = 0;
  std::uint64_t measure_step_end = 0;

  [[nodiscard]] double local_acceptance() const {
    return local_proposals ? static_cast<double>(local_accepted) / static_cast<double>(local_proposals) : 0.0;
  }
  [[nodiscard]] double dilation_acceptance() const {
    return dilation_proposals ? static_cast<double>(dilation_accepted) / static_cast<double>(dilation_proposals)
                              : 0.0;
  }
};

/// Called after every `thinning` measurement sweeps with the sweep index (0-based).
using ChainObserver = std::function<void(const ChainState&, std::int64_t)>;

/// Burn-in (adapting sigma if enabled) followed by `cfg.sweeps` measurement sweeps.
/**
 * Every `cfg.cache_check_interval` steps the caches are recomputed; a relative drift above 1e-6
 * is written to `warnings` (if given) and the caches are reset.
 */
ChainSummary run_chain(ChainState& state, const GibbsParams& params, const MCMCConfig& cfg,
                       const ChainObserver& observe, std::ostream* warnings = nullptr);

inline constexpr double kCacheTolerance = 1e-6;

}  // namespace selfrepel

#endif
