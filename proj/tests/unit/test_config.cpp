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


#include <selfrepel/harness.hpp>

#include <gtest/gtest.h>

#include <sstream>

namespace selfrepel {
namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

TEST(Config, DefaultsAreValid) {
  ExperimentConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.n_grid, (std::vector<int>{4, 6, 8, 12, 16, 24, 32}));
}

TEST(Config, ParsesKeysCommentsAndOverrides) {
  const auto cfg = parse(
      "# study\n"
      "n_grid = 2, 3 ,5\n"
      "  d=3   # inline comment\n"
      "gamma = 0.25\n"
      "gamma = 0.5\n"
      "\n"
      "mcmc.sweeps = 77\n"
      "mcmc.adapt_sigma = false\n"
      "seed = 12\n");
  EXPECT_EQ(cfg.n_grid, (std::vector<int>{2, 3, 5}));
  EXPECT_EQ(cfg.d, 3);
  EXPECT_DOUBLE_EQ(cfg.params.gamma(), 0.5);
  EXPECT_EQ(cfg.mcmc.sweeps, 77);
  EXPECT_FALSE(cfg.mcmc.adapt_sigma);
  EXPECT_EQ(cfg.seed, 12u);
  EXPECT_EQ(cfg.mcmc.seed, 12u);
}

TEST(Config, FormatRoundTrips) {
  auto cfg = parse("n_grid = 3,9\nbeta = 0.1\nsweeps_per_n2 = 2.5\nstart = free\ncontrol = mcmc\n");
  const auto text = format_config(cfg);
  EXPECT_EQ(format_config(parse(text)), text);
  EXPECT_EQ(config_to_json(cfg).at("beta"), "0.10000000000000001");
}

TEST(Config, ErrorsNameTheLine) {
  try {
    parse("d = 2\nbogus = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
  EXPECT_THROW(parse("d = two\n"), ConfigError);
  EXPECT_THROW(parse("beta = nan\n"), ConfigError);
  EXPECT_THROW(parse("beta = -1\n"), ConfigError);
  EXPECT_THROW(parse("no equals sign\n"), ConfigError);
  EXPECT_THROW(parse("log_measurements = maybe\n"), ConfigError);
}

TEST(Config, ValidateRejectsBadValues) {
  const auto bad = [](const std::string& text) {
    return [text] { parse(text).validate(); };
  };
  EXPECT_THROW(bad("n_grid = 4, 4, 8")(), ConfigError);
  EXPECT_THROW(bad("n_grid = 8, 4")(), ConfigError);
  EXPECT_THROW(bad("replicates = 0")(), ConfigError);
  EXPECT_THROW(bad("start = sideways")(), ConfigError);
  EXPECT_THROW(bad("control = maybe")(), ConfigError);
  EXPECT_THROW(bad("is_particles = 50")(), ConfigError);
  EXPECT_THROW(bad("mcmc.thinning = 0")(), ConfigError);
  EXPECT_NO_THROW(bad("is_particles = 100")());
}

TEST(Config, SweepBudgets) {
  auto cfg = parse("mcmc.sweeps = 100\nmcmc.burn_in = 10\nsweeps_per_n2 = 2\nburn_in_fraction = 0.5\n");
  EXPECT_EQ(cfg.measurement_sweeps(4), 100);
  EXPECT_EQ(cfg.measurement_sweeps(10), 200);
  EXPECT_EQ(cfg.burn_in_sweeps(4), 50);
  cfg.burn_in_fraction = 0.0;
  EXPECT_EQ(cfg.burn_in_sweeps(10), 10);
}

TEST(RunLogTest, PayloadDropsMeta) {
  std::stringstream out;
  RunLog log(out);
  log.write({{"type", "a"}, {"x", 1}, {"meta", {{"t", 5}}}});
  log.write({{"type", "b"}});
  std::stringstream other;
  RunLog log2(other);
  log2.write({{"type", "a"}, {"x", 1}, {"meta", {{"t", 9}}}});
  log2.write({{"type", "b"}});
  EXPECT_NE(out.str(), other.str());
  EXPECT_EQ(reproducible_payload(out), reproducible_payload(other));
}

}  // namespace
}  // namespace selfrepel
