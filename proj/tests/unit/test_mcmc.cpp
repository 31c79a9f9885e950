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

#include <selfrepel/free_field.hpp>
#include <selfrepel/mcmc.hpp>
#include <selfrepel/observables.hpp>
#include <selfrepel/stats.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace selfrepel {
namespace {

FieldConfig start_field(const LatticeBox& box, std::uint64_t seed) {
  const auto basis = eigendecompose(box);
  CounterRng rng(seed, 99);
  return sample_free_field(basis, GibbsParams(1.0, 0.0), rng);
}

TEST(LogTarget, CoincidentField) {
  const LatticeBox box(1, 2);
  const ChainState state(FieldConfig(box, 2), 1, 0);
  EXPECT_EQ(state.energy(), 0.0);
  EXPECT_EQ(state.penalty(), 81.0);
  EXPECT_DOUBLE_EQ(log_target(state, GibbsParams(1.0, 0.5)), -40.5);
  EXPECT_DOUBLE_EQ(log_target(state, GibbsParams(1.0, 0.0)), 0.0);
}

TEST(LocalMove, ZeroDisplacementAccepted) {
  const LatticeBox box(2, 2);
  ChainState state(start_field(box, 1), 1, 0);
  const double before = log_target(state, GibbsParams(1.0, 2.0));
  const auto result = local_move(state, GibbsParams(1.0, 2.0), 7, 1, 0.0, 1.0);
  EXPECT_TRUE(result.accepted);
  EXPECT_EQ(result.log_acceptance, 0.0);
  EXPECT_EQ(log_target(state, GibbsParams(1.0, 2.0)), before);
}

TEST(LocalMove, DeltaMatchesRecompute) {
  const LatticeBox box(2, 2);
  ChainState state(linear_field(box, 0.6), 1, 0);
  const GibbsParams params(1.3, 0.7);
  CounterRng rng(2, 0);
  for (int k = 0; k < 300; ++k) {
    const double before = -params.beta() * state.recompute_energy() - params.gamma() * state.recompute_penalty();
    const auto site = static_cast<SiteIndex>(rng.below(box.site_count()));
    const auto comp = static_cast<int>(rng.below(2));
    const auto result = local_move(state, params, site, comp, 0.8 * rng.normal(), 0.5);
    const double after = -params.beta() * state.recompute_energy() - params.gamma() * state.recompute_penalty();
    if (result.accepted) {
      EXPECT_NEAR(after - before, result.log_acceptance, 1e-9);
    } else {
      EXPECT_EQ(after, before);
    }
    EXPECT_NEAR(state.energy(), state.recompute_energy(), 1e-9);
    EXPECT_NEAR(state.penalty(), state.recompute_penalty(), 1e-9);
  }
}

TEST(Chain, CachesStayCoherent) {
  const LatticeBox box(4, 2);
  ChainState state(start_field(box, 3), 3, 0);
  const GibbsParams params(1.0, 0.5);
  MCMCConfig cfg;
  cfg.burn_in = 50;
  cfg.sweeps = 250;
  cfg.cache_check_interval = 10000;
  std::ostringstream warnings;
  const auto summary = run_chain(state, params, cfg, nullptr, &warnings);
  EXPECT_GT(summary.cache_resyncs, 0u);
  EXPECT_LT(summary.max_cache_drift, kCacheTolerance);
  EXPECT_TRUE(warnings.str().empty());
  EXPECT_NEAR(state.energy(), state.recompute_energy(), 1e-6 * state.energy());
  EXPECT_NEAR(state.penalty(), state.recompute_penalty(), 1e-6 * state.penalty());
  EXPECT_GT(summary.dilation_proposals, 0u);
  EXPECT_GT(summary.local_acceptance(), 0.2);
  EXPECT_LT(summary.local_acceptance(), 0.5);
}

TEST(Chain, ZeroMeanAfterManySteps) {
  const LatticeBox box(3, 2);
  ChainState state(start_field(box, 4), 4, 0);
  const GibbsParams params(1.0, 0.5);
  MCMCConfig cfg;
  cfg.burn_in = 0;
  cfg.sweeps = 1000000 / static_cast<std::int64_t>(box.site_count()) + 1;
  (void)run_chain(state, params, cfg, nullptr);
  const auto field = state.field();
  for (int i = 0; i < 2; ++i) {
    EXPECT_LT(std::abs(field.component(i).mean()), 1e-9);
  }
  EXPECT_GE(state.steps(), 1000000u);
}

TEST(Chain, DeterministicAndCheckpointable) {
  const LatticeBox box(3, 2);
  const GibbsParams params(1.0, 0.5);
  MCMCConfig cfg;
  cfg.burn_in = 20;
  cfg.sweeps = 40;
  ChainState a(start_field(box, 5), 11, 2);
  ChainState b(start_field(box, 5), 11, 2);
  (void)run_chain(a, params, cfg, nullptr);
  (void)run_chain(b, params, cfg, nullptr);
  EXPECT_EQ(a.field().packed(), b.field().packed());

  const auto record = a.checkpoint(params);
  GibbsParams restored_params(9.0, 9.0);
  ChainState c = ChainState::restore(nlohmann::json::parse(record.dump()), &restored_params);
  EXPECT_EQ(restored_params, params);
  EXPECT_EQ(c.steps(), a.steps());
  EXPECT_EQ(c.sigma(), a.sigma());
  cfg.burn_in = 0;
  cfg.adapt_sigma = false;
  ChainState a2 = ChainState::restore(record);
  (void)run_chain(a2, params, cfg, nullptr);
  (void)run_chain(c, params, cfg, nullptr);
  EXPECT_EQ(a2.field().packed(), c.field().packed());
  EXPECT_THROW((void)ChainState::restore(nlohmann::json{{"format", "other"}}), std::invalid_argument);
}

TEST(Chain, DilationJacobian) {
  // Dilations alone leave the shape fixed; beta H then has mean (n - 1) D / 2.
  const LatticeBox box(2, 2);
  ChainState state(start_field(box, 6), 6, 0, false);
  const GibbsParams params(1.0, 0.0);
  MCMCConfig cfg;
  cfg.dilation_probability = 1.0;
  cfg.dilation_eta = 0.3;
  cfg.burn_in = 10;
  cfg.sweeps = 8000;
  cfg.adapt_sigma = false;
  std::vector<double> energies;
  (void)run_chain(state, params, cfg, [&](const ChainState& s, std::int64_t) { energies.push_back(s.energy()); });
  const double expected = (box.site_count() - 1) * 2 / 2.0;
  EXPECT_NEAR(stats::mean(energies), expected, 4.0 * stats::correlated_standard_error(energies));
}

TEST(Chain, FreeFieldVariancesMatchOracle) {
  const LatticeBox box(3, 2);
  const GibbsParams params(1.0, 0.0);
  ChainState state(linear_field(box, 0.5), 7, 0, false);
  MCMCConfig cfg;
  cfg.burn_in = 500;
  cfg.sweeps = 60000;
  const std::vector<std::pair<SiteIndex, SiteIndex>> pairs{{0, 48}, {24, 25}, {3, 45}};
  std::vector<std::vector<double>> squares(pairs.size());
  (void)run_chain(state, params, cfg, [&](const ChainState& s, std::int64_t) {
    const auto p = s.positions();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const double diff = p[pairs[k].first * 2] - p[pairs[k].second * 2];
      squares[k].push_back(diff * diff);
    }
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double exact = variance_pair(box, params, pairs[k].first, pairs[k].second).variance;
    EXPECT_NEAR(stats::mean(squares[k]), exact, 4.0 * stats::correlated_standard_error(squares[k])) << k;
  }
}

TEST(MCMCConfig, Validation) {
  MCMCConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.sigma = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = MCMCConfig{};
  cfg.dilation_probability = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = MCMCConfig{};
  cfg.thinning = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace selfrepel
