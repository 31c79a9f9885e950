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

// Command-line front end: sampling, chains, variances, the scaling and Flory experiments and the
// validation suite. Exit codes: 0 success, 1 failed invariant or runtime error, 2 bad input.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <selfrepel/free_field.hpp>
#include <selfrepel/harness.hpp>
#include <selfrepel/observables.hpp>
#include <selfrepel/penalty.hpp>
#include <selfrepel/spectral.hpp>

namespace {

using namespace selfrepel;

constexpr int kExitFailure = 1;
constexpr int kExitBadInput = 2;

class BadInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SpectralBasis basis_for(const LatticeBox& box) {
  return box.dimension() == 1 ? eigendecompose(box) : eigendecompose_separable(box);
}

SiteIndex parse_site(const LatticeBox& box, const std::string& text) {
  std::vector<int> coords;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      coords.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw BadInput("bad site coordinate '" + item + "'");
    }
  }
  if (static_cast<int>(coords.size()) != box.dimension() || !box.contains(coords)) {
    throw BadInput("site '" + text + "' is not a point of the box");
  }
  return box.site(coords);
}

ExperimentConfig build_config(const std::string& path, const std::vector<std::string>& settings) {
  ExperimentConfig cfg;
  if (!path.empty()) {
    cfg = load_config_file(path);
  }
  for (const auto& s : settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects key=value, got '" + s + "'");
    }
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  return out;
}

void print_report(const RunReport& report) {
  for (const auto& p : report.points) {
    std::cout << "N=" << p.half_width << " median R=" << p.median_radius << " [" << p.ci_lo << ", " << p.ci_hi
              << "] ess=" << p.ess << (p.converged ? "" : " NOT CONVERGED: " + p.flag) << "\n";
    if (p.cross_check) {
      std::cout << "  AIS cross-check E[R]=" << p.cross_check->is_estimate << " +- "
                << p.cross_check->is_standard_error << " vs MCMC " << p.cross_check->mcmc_mean << " (z "
                << p.cross_check->z_score << ")\n";
    }
  }
  const auto& f = report.fit;
  if (f.valid) {
    std::cout << "exponent " << f.exponent << " +- " << f.exponent_se << " (R^2 " << f.r_squared << ")"
              << (f.reliable ? "" : " UNRELIABLE: " + f.reason) << "\n";
  } else {
    std::cout << "no fit: " << f.reason << "\n";
  }
  if (report.control_fit.valid) {
    std::cout << "gamma=0 control exponent " << report.control_fit.exponent << " +- "
              << report.control_fit.exponent_se << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"selfrepel: self-repellent Gaussian free field on a lattice box"};
  app.require_subcommand(1);

  int n_half = 4;
  int dim = 2;
  double beta = 1.0;
  double gamma = 1.0;
  std::uint64_t seed = 1;

  auto* sample = app.add_subcommand("sample", "Exact gamma = 0 draws; prints one JSON line per draw");
  std::size_t count = 1;
  double drift = 0.0;
  bool with_values = false;
  sample->add_option("-N,--half-width", n_half)->check(CLI::PositiveNumber);
  sample->add_option("-d,--dimension", dim)->check(CLI::Range(1, CellList::kMaxDim));
  sample->add_option("--beta", beta)->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed);
  sample->add_option("--count", count);
  sample->add_option("--drift", drift, "Add the linear drift a x to every component");
  sample->add_flag("--values", with_values, "Include the packed field values");

  auto* mcmc = app.add_subcommand("mcmc", "Metropolis chain on the tilted measure");
  MCMCConfig mcfg;
  std::uint64_t chain_id = 0;
  std::string checkpoint_out;
  std::string resume;
  mcmc->add_option("-N,--half-width", n_half)->check(CLI::PositiveNumber);
  mcmc->add_option("-d,--dimension", dim)->check(CLI::Range(1, CellList::kMaxDim));
  mcmc->add_option("--beta", beta)->check(CLI::PositiveNumber);
  mcmc->add_option("--gamma", gamma)->check(CLI::NonNegativeNumber);
  mcmc->add_option("--seed", seed);
  mcmc->add_option("--chain", chain_id);
  mcmc->add_option("--sweeps", mcfg.sweeps);
  mcmc->add_option("--burn-in", mcfg.burn_in);
  mcmc->add_option("--thinning", mcfg.thinning);
  mcmc->add_option("--sigma", mcfg.sigma);
  mcmc->add_option("--dilation-probability", mcfg.dilation_probability);
  mcmc->add_option("--checkpoint", checkpoint_out, "Write the final chain state here");
  mcmc->add_option("--resume", resume, "Continue from a checkpoint (ignores -N, -d, --beta, --gamma)");

  auto* variance = app.add_subcommand("variance", "Exact Var(u(z) - u(w)) at gamma = 0");
  std::string site_z;
  std::string site_w;
  bool scan = false;
  variance->add_option("-N,--half-width", n_half)->check(CLI::PositiveNumber);
  variance->add_option("-d,--dimension", dim)->check(CLI::Range(1, CellList::kMaxDim));
  variance->add_option("--beta", beta)->check(CLI::PositiveNumber);
  variance->add_option("-z", site_z, "Comma-separated coordinates");
  variance->add_option("-w", site_w, "Comma-separated coordinates");
  variance->add_flag("--scan", scan, "Minimum and maximum over all pairs");

  auto* scaling = app.add_subcommand("scaling", "Radius-scaling study; writes a JSON-lines run log");
  std::string config_path;
  std::vector<std::string> settings;
  std::string log_path;
  std::string plot_dir;
  scaling->add_option("--config", config_path)->check(CLI::ExistingFile);
  scaling->add_option("--set", settings, "Override one config key: key=value");
  scaling->add_option("--log", log_path, "Run log path (default <output_dir>/run.jsonl)");
  scaling->add_option("--plots", plot_dir, "Also write plot CSVs into this directory");

  auto* emit = app.add_subcommand("emit-plots", "Run the configured study and write plot CSVs only");
  emit->add_option("--config", config_path)->check(CLI::ExistingFile);
  emit->add_option("--set", settings);
  emit->add_option("--dir", plot_dir)->required();

  auto* flory = app.add_subcommand("flory", "Energy-penalty balance over the dilation family u = a x");
  std::vector<int> grid{4, 8, 16, 32, 64};
  flory->add_option("--grid", grid)->delimiter(',');
  flory->add_option("-d,--dimension", dim)->check(CLI::PositiveNumber);
  flory->add_option("--beta", beta)->check(CLI::PositiveNumber);
  flory->add_option("--gamma", gamma)->check(CLI::PositiveNumber);

  auto* semigroup = app.add_subcommand("semigroup", "Reflected walk return probabilities and decay fit");
  std::string csv_path;
  semigroup->add_option("-N,--half-width", n_half)->check(CLI::PositiveNumber);
  semigroup->add_option("--csv", csv_path, "Write the time series here");

  auto* validate = app.add_subcommand("validate", "Run the numerical validation suite");
  bool inject = false;
  validate->add_option("--seed", seed);
  validate->add_flag("--inject-fault", inject, "Perturb one eigenvalue of every basis first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (*sample) {
      const LatticeBox box(n_half, dim);
      const auto basis = basis_for(box);
      const GibbsParams params(beta, 0.0);
      CounterRng rng(seed, 0);
      for (std::size_t i = 0; i < count; ++i) {
        const auto field = drift == 0.0 ? sample_free_field(basis, params, rng)
                                        : sample_drifted_field(basis, params, drift, rng);
        nlohmann::json record{{"draw", i},
                              {"radius", effective_radius(field)},
                              {"energy", dirichlet_energy(field)},
                              {"penalty", penalty_integral(field).total}};
        if (with_values) {
          record["values"] = field.packed();
        }
        std::cout << record.dump() << "\n";
      }
    } else if (*mcmc) {
      GibbsParams params(beta, gamma);
      std::optional<ChainState> state;
      if (!resume.empty()) {
        std::ifstream in(resume);
        if (!in) {
          throw BadInput("cannot open checkpoint " + resume);
        }
        state.emplace(ChainState::restore(nlohmann::json::parse(in), &params));
        mcfg.burn_in = 0;
        mcfg.adapt_sigma = false;
      } else {
        state.emplace(linear_field(LatticeBox(n_half, dim), 1.0), seed, chain_id, gamma > 0.0);
      }
      mcfg.seed = seed;
      mcfg.validate();
      const auto summary = run_chain(
          *state, params, mcfg,
          [](const ChainState& s, std::int64_t sweep) {
            std::cout << nlohmann::json{{"sweep", sweep},
                                        {"step", s.steps()},
                                        {"radius", point_set_diameter(s.positions(), s.component_count())},
                                        {"energy", s.energy()},
                                        {"penalty", s.penalty()}}
                             .dump()
                      << "\n";
          },
          &std::cerr);
      std::cout << nlohmann::json{{"summary",
                                   {{"local_acceptance", summary.local_acceptance()},
                                    {"dilation_acceptance", summary.dilation_acceptance()},
                                    {"final_sigma", summary.final_sigma},
                                    {"max_cache_drift", summary.max_cache_drift}}}}
                       .dump()
                << "\n";
      if (!checkpoint_out.empty()) {
        open_output(checkpoint_out) << state->checkpoint(params).dump() << "\n";
      }
    } else if (*variance) {
      const LatticeBox box(n_half, dim);
      const GibbsParams params(beta, 0.0);
      if (scan) {
        const auto s = variance_bounds_scan(box, params);
        std::cout << nlohmann::json{{"min", s.min_variance},
                                    {"max", s.max_variance},
                                    {"argmin", {s.argmin.first, s.argmin.second}},
                                    {"argmax", {s.argmax.first, s.argmax.second}},
                                    {"exhaustive", s.exhaustive},
                                    {"pairs", s.pairs_examined}}
                         .dump()
                  << "\n";
      } else {
        if (site_z.empty() || site_w.empty()) {
          throw BadInput("variance needs -z and -w, or --scan");
        }
        const auto r = variance_pair(box, params, parse_site(box, site_z), parse_site(box, site_w));
        std::cout << nlohmann::json{{"variance", r.variance}, {"total", r.total}}.dump() << "\n";
      }
    } else if (*scaling || *emit) {
      auto cfg = build_config(config_path, settings);
      RunReport report;
      if (*scaling) {
        const std::filesystem::path path =
            log_path.empty() ? std::filesystem::path(cfg.output_dir) / "run.jsonl" : std::filesystem::path(log_path);
        auto out = open_output(path);
        RunLog log(out);
        report = run_scaling_study(cfg, &log);
        std::cout << "run log: " << path.string() << "\n";
      } else {
        cfg.log_measurements = false;
        report = run_scaling_study(cfg);
      }
      print_report(report);
      if (!plot_dir.empty()) {
        for (const auto& p : emit_plot_data(report, plot_dir)) {
          std::cout << "wrote " << p.string() << "\n";
        }
      }
    } else if (*flory) {
      for (const auto& row : run_flory_balance(grid, dim, beta, gamma)) {
        std::cout << nlohmann::json{{"N", row.half_width},       {"d", row.dimension},
                                    {"a_star", row.a_star},      {"energy", row.energy},
                                    {"penalty", row.penalty},    {"radius", row.radius},
                                    {"radius_over_N", row.radius_over_n}}
                         .dump()
                  << "\n";
      }
    } else if (*semigroup) {
      const auto decay = semigroup_decay(n_half);
      std::cout << nlohmann::json{{"N", n_half},
                                  {"slope", decay.slope},
                                  {"center_slope", decay.center_slope},
                                  {"window", {decay.t_lo, decay.t_hi}},
                                  {"sqrt_t_constant", decay.sqrt_t_constant},
                                  {"late_time_gap", decay.late_time_gap}}
                       .dump()
                << "\n";
      if (!csv_path.empty()) {
        auto out = open_output(csv_path);
        write_semigroup_csv(semigroup_diagnostics(n_half, log_time_grid(0.1, 10.0 * n_half * n_half, 200)), out);
      }
    } else if (*validate) {
      ValidationOptions options;
      options.seed = seed;
      options.inject_eigenvalue_fault = inject;
      const auto summary = run_validation_suite(options);
      for (const auto& c : summary.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
      }
      return summary.all_passed() ? 0 : kExitFailure;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const BadInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
