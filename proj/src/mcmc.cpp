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

#include <selfrepel/mcmc.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace selfrepel {

void MCMCConfig::validate() const {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("MCMCConfig: sigma must be > 0");
  }
  if (!(dilation_probability >= 0.0 && dilation_probability <= 1.0)) {
    throw std::invalid_argument("MCMCConfig: dilation probability must lie in [0, 1]");
  }
  if (!(dilation_eta > 0.0)) {
    throw std::invalid_argument("MCMCConfig: dilation eta must be > 0");
  }
  if (sweeps < 1 || burn_in < 0 || thinning < 1) {
    throw std::invalid_argument("MCMCConfig: sweeps and thinning must be >= 1, burn-in >= 0");
  }
  if (cache_check_interval < 1) {
    throw std::invalid_argument("MCMCConfig: cache check interval must be >= 1");
  }
}

ChainState::ChainState(const FieldConfig& initial, std::uint64_t seed, std::uint64_t chain_id, bool track_penalty)
    : box_{initial.box()},
      dim_{initial.component_count()},
      positions_{initial.packed()},
      track_penalty_{track_penalty},
      cells_{initial.component_count()},
      rng_{seed, chain_id},
      chain_id_{chain_id} {
  resynchronize();
}

FieldConfig ChainState::field() const {
  FieldConfig out = FieldConfig::from_packed(box_, dim_, positions_);
  out.center();
  return out;
}

double ChainState::penalty() const { return track_penalty_ ? penalty_ : recompute_penalty(); }

double ChainState::recompute_energy() const {
  const auto d = static_cast<std::size_t>(dim_);
  double sum = 0.0;
  for (const auto& [x, y] : box_.edges()) {
    for (std::size_t i = 0; i < d; ++i) {
      const double diff = positions_[x * d + i] - positions_[y * d + i];
      sum += diff * diff;
    }
  }
  return sum;
}

double ChainState::recompute_penalty() const { return penalty_from_positions(positions_, dim_).total; }

double ChainState::resynchronize() {
  const auto d = static_cast<std::size_t>(dim_);
  const auto n = box_.site_count();
  for (std::size_t i = 0; i < d; ++i) {
    double mean = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      mean += positions_[s * d + i];
    }
    mean /= static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s) {
      positions_[s * d + i] -= mean;
    }
  }
  const double energy = recompute_energy();
  double drift = steps_ > 0 ? std::abs(energy - energy_) / std::max(1.0, std::abs(energy)) : 0.0;
  energy_ = energy;
  if (track_penalty_) {
    cells_.build(positions_);
    const double penalty = recompute_penalty();
    if (steps_ > 0) {
      drift = std::max(drift, std::abs(penalty - penalty_) / std::max(1.0, std::abs(penalty)));
    }
    penalty_ = penalty;
  }
  return drift;
}

void ChainState::set_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("ChainState::set_sigma: sigma must be positive and finite");
  }
  sigma_ = sigma;
}

double ChainState::overlap_with_others(const double* p, std::uint32_t self) const {
  const auto d = static_cast<std::size_t>(dim_);
  double sum = 0.0;
  cells_.for_each_near(p, [&](std::uint32_t j) {
    if (j != self) {
      sum += box_overlap(p, positions_.data() + j * d, dim_);
    }
  });
  return sum;
}

nlohmann::json ChainState::checkpoint(const GibbsParams& params) const {
  const auto state = rng_.state();
  nlohmann::json record;
  record["format"] = "selfrepel-chain-checkpoint";
  record["version"] = 1;
  record["half_width"] = box_.half_width();
  record["dimension"] = box_.dimension();
  record["components"] = dim_;
  record["beta"] = params.beta();
  record["gamma"] = params.gamma();
  record["track_penalty"] = track_penalty_;
  record["chain_id"] = chain_id_;
  record["steps"] = steps_;
  record["sigma"] = sigma_;
  record["rng"] = {{"seed", state.seed}, {"stream", state.stream}, {"block", state.block}, {"lane", state.lane}};
  record["values"] = field().packed();
  return record;
}

ChainState ChainState::restore(const nlohmann::json& record, GibbsParams* params) {
  if (record.value("format", std::string{}) != "selfrepel-chain-checkpoint") {
    throw std::invalid_argument("ChainState::restore: not a chain checkpoint");
  }
  if (record.at("version").get<int>() != 1) {
    throw std::invalid_argument("ChainState::restore: unsupported checkpoint version");
  }
  const LatticeBox box(record.at("half_width").get<int>(), record.at("dimension").get<int>());
  const int dim = record.at("components").get<int>();
  const auto values = record.at("values").get<std::vector<double>>();
  const auto field = FieldConfig::from_packed(box, dim, values);
  const auto& r = record.at("rng");
  ChainState state(field, r.at("seed").get<std::uint64_t>(), record.at("chain_id").get<std::uint64_t>(),
                   record.at("track_penalty").get<bool>());
  state.rng_ = CounterRng(CounterRng::State{r.at("seed").get<std::uint64_t>(), r.at("stream").get<std::uint64_t>(),
                                            r.at("block").get<std::uint64_t>(), r.at("lane").get<std::uint32_t>()});
  state.steps_ = record.at("steps").get<std::uint64_t>();
  state.sigma_ = record.at("sigma").get<double>();
  if (params != nullptr) {
    *params = GibbsParams(record.at("beta").get<double>(), record.at("gamma").get<double>());
  }
  return state;
}

double log_target(const ChainState& state, const GibbsParams& params) {
  double value = -params.beta() * state.energy();
  if (params.gamma() != 0.0) {
    value -= params.gamma() * state.penalty();
  }
  return value;
}

namespace {

bool accept(double log_acceptance, double uniform) {
  return log_acceptance >= 0.0 || std::log(uniform) < log_acceptance;
}

}  // namespace

StepResult local_move(ChainState& state, const GibbsParams& params, SiteIndex site, int component,
                      double displacement, double uniform) {
  if (params.gamma() > 0.0 && !state.track_penalty_) {
    throw std::logic_error("local_move: gamma > 0 needs a chain that tracks the penalty");
  }
  const auto d = static_cast<std::size_t>(state.dim_);
  double* p = state.positions_.data() + site * d;
  const auto c = static_cast<std::size_t>(component);
  const double old_value = p[c];

  double neighbor_sum = 0.0;
  for (const auto t : state.box_.neighbors(site)) {
    neighbor_sum += old_value - state.positions_[t * d + c];
  }
  const double delta_energy =
      state.box_.degree(site) * displacement * displacement + 2.0 * displacement * neighbor_sum;

  double delta_penalty = 0.0;
  double moved[CellList::kMaxDim];
  std::copy(p, p + d, moved);
  moved[c] = old_value + displacement;
  if (state.track_penalty_) {
    const auto self = static_cast<std::uint32_t>(site);
    delta_penalty = 2.0 * (state.overlap_with_others(moved, self) - state.overlap_with_others(p, self));
  }

  StepResult result;
  result.kind = MoveKind::kLocal;
  result.log_acceptance = -params.beta() * delta_energy - params.gamma() * delta_penalty;
  result.accepted = accept(result.log_acceptance, uniform);
  if (result.accepted) {
    if (state.track_penalty_) {
      state.cells_.relocate(static_cast<std::uint32_t>(site), p, moved);
    }
    p[c] = moved[c];
    state.energy_ += delta_energy;
    state.penalty_ += delta_penalty;
  }
  ++state.steps_;
  return result;
}

StepResult mcmc_step(ChainState& state, const GibbsParams& params, const MCMCConfig& cfg) {
  auto& rng = state.rng_;
  const bool dilate = cfg.dilation_probability > 0.0 && rng.uniform() < cfg.dilation_probability;
  if (!dilate) {
    const auto site = static_cast<SiteIndex>(rng.below(state.site_count()));
    const auto component = static_cast<int>(rng.below(static_cast<std::uint64_t>(state.dim_)));
    const double displacement = state.sigma_ * rng.normal();
    return local_move(state, params, site, component, displacement, rng.uniform_open_zero());
  }

  const auto d = static_cast<std::size_t>(state.dim_);
  const auto n = state.site_count();
  const double log_scale = cfg.dilation_eta * (2.0 * rng.uniform() - 1.0);
  const double scale = std::exp(log_scale);

  std::vector<double> mean(d, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < d; ++i) {
      mean[i] += state.positions_[s * d + i];
    }
  }
  for (auto& m : mean) {
    m /= static_cast<double>(n);
  }
  std::vector<double> proposed(state.positions_.size());
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < d; ++i) {
      proposed[s * d + i] = scale * (state.positions_[s * d + i] - mean[i]);
    }
  }
  const double new_energy = scale * scale * state.energy_;
  double new_penalty = state.penalty_;
  if (state.track_penalty_) {
    new_penalty = penalty_from_positions(proposed, state.dim_).total;
  }
  StepResult result;
  result.kind = MoveKind::kDilation;
  const double jacobian = static_cast<double>((n - 1) * d) * log_scale;
  result.log_acceptance =
      -params.beta() * (new_energy - state.energy_) - params.gamma() * (new_penalty - state.penalty_) + jacobian;
  result.accepted = accept(result.log_acceptance, rng.uniform_open_zero());
  if (result.accepted) {
    state.positions_ = std::move(proposed);
    state.energy_ = new_energy;
    state.penalty_ = new_penalty;
    if (state.track_penalty_) {
      state.cells_.build(state.positions_);
    }
  }
  ++state.steps_;
  return result;
}

ChainSummary run_chain(ChainState& state, const GibbsParams& params, const MCMCConfig& cfg,
                       const ChainObserver& observe, std::ostream* warnings) {
  cfg.validate();
  ChainSummary summary;
  const auto n = state.site_count();
  const auto check_every = static_cast<std::uint64_t>(cfg.cache_check_interval);

  auto step = [&](std::uint64_t& local_props, std::uint64_t& local_acc) {
    const auto result = mcmc_step(state, params, cfg);
    if (result.kind == MoveKind::kLocal) {
      ++local_props;
      local_acc += result.accepted ? 1 : 0;
      ++summary.local_proposals;
      summary.local_accepted += result.accepted ? 1 : 0;
    } else {
      ++summary.dilation_proposals;
      summary.dilation_accepted += result.accepted ? 1 : 0;
    }
    if (state.steps() % check_every == 0) {
      const double drift = state.resynchronize();
      summary.max_cache_drift = std::max(summary.max_cache_drift, drift);
      ++summary.cache_resyncs;
      if (drift > kCacheTolerance && warnings != nullptr) {
        *warnings << "warning: chain " << state.chain_id() << " cache drift " << drift << " at step "
                  << state.steps() << "; caches recomputed\n";
      }
    }
  };

  for (std::int64_t sweep = 0; sweep < cfg.burn_in; ++sweep) {
    std::uint64_t props = 0;
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < n; ++k) {
      step(props, acc);
    }
    if (cfg.adapt_sigma && props > 0) {
      const double rate = static_cast<double>(acc) / static_cast<double>(props);
      if (rate < 0.30 || rate > 0.40) {
        state.set_sigma(state.sigma() * std::exp(2.0 * (rate - 0.35)));
      }
    }
  }
  summary = ChainSummary{.cache_resyncs = summary.cache_resyncs, .max_cache_drift = summary.max_cache_drift};
  summary.measure_step_begin = state.steps();
  for (std::int64_t sweep = 0; sweep < cfg.sweeps; ++sweep) {
    std::uint64_t props = 0;
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < n; ++k) {
      step(props, acc);
    }
    if ((sweep + 1) % cfg.thinning == 0 && observe) {
      observe(state, sweep);
    }
  }
  summary.measure_step_end = state.steps();
  summary.final_sigma = state.sigma();
  return summary;
}

}  // namespace selfrepel
