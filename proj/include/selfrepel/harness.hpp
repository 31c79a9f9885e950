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

#ifndef SELFREPEL_HARNESS_HPP
#define SELFREPEL_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <selfrepel/gibbs.hpp>
#include <selfrepel/mcmc.hpp>

/**
 * \file
 * \brief Experiment configuration, the radius-scaling and Flory experiments, the validation suite
 * and the JSON-lines run log.
 */

namespace selfrepel {

/// Git revision the library was built from, or "unknown".
const char* build_git_hash() noexcept;

/// Invalid configuration key or value; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string experiment = "scaling";
  std::vector<int> n_grid{4, 6, 8, 12, 16, 24, 32};
  int d = 2;
  GibbsParams params{1.0, 1.0};
  MCMCConfig mcmc;
  /// Measurement sweeps at half-width N are max(mcmc.sweeps, ceil(sweeps_per_n2 * N^2)).
  double sweeps_per_n2 = 0.0;
  /// Burn-in sweeps at half-width N are max(mcmc.burn_in, ceil(burn_in_fraction * measurement sweeps)).
  double burn_in_fraction = 0.0;
  int replicates = 2;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  /// "linear" (u = start_slope * x) or "free" (an exact gamma = 0 draw).
  std::string start = "linear";
  double start_slope = 1.0;
  /// gamma = 0 contrast: "exact" spectral draws, "mcmc", or "none".
  std::string control = "exact";
  std::size_t control_samples = 400;
  /// Annealed importance-sampling cross-check at N <= 4; 0 disables it.
  std::size_t is_particles = 0;
  int is_steps = 500;
  int is_sweeps = 4;
  double min_ess = 50.0;
  /// Write one run-log record per recorded sweep.
  bool log_measurements = true;

  /// Throws ConfigError.
  void validate() const;
  [[nodiscard]] std::int64_t measurement_sweeps(int half_width) const;
  [[nodiscard]] std::int64_t burn_in_sweeps(int half_width) const;
};

/// Sets one key from its text value; throws ConfigError on unknown keys or malformed values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Parses "key = value" lines; '#' starts a comment. Later keys override earlier ones.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base = {});

/// Every key with its current value, one "key = value" line each, in a fixed order.
std::string format_config(const ExperimentConfig& cfg);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------------------------
// Run log

/// JSON-lines writer. Each record is one line; values that vary between identical runs (wall
/// times, timestamps, host details) belong under the "meta" key.
class RunLog {
 public:
  explicit RunLog(std::ostream& out) : out_{&out} {}
  void write(const nlohmann::json& record);

 private:
  std::ostream* out_;
};

/// The run log with every "meta" member removed, re-serialized line by line.
std::string reproducible_payload(std::istream& in);

// ---------------------------------------------------------------------------------------------
// Radius-scaling study

/// One chain: a (N, replicate) cell.
struct CellResult {
  int half_width = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  std::uint64_t chain_id = 0;
  std::uint64_t step_begin = 0;
  std::uint64_t step_end = 0;
  std::size_t measurements = 0;
  double median_radius = 0.0;
  double mean_radius = 0.0;
  double mean_ci_lo = 0.0;
  double mean_ci_hi = 0.0;
  double tau = 0.0;
  double ess = 0.0;
  double local_acceptance = 0.0;
  double dilation_acceptance = 0.0;
  double final_sigma = 0.0;
  double energy_mean = 0.0;
  double penalty_mean = 0.0;
  double penalty_sd = 0.0;
  double max_cache_drift = 0.0;
  double wall_seconds = 0.0;
  std::vector<double> radii;
};

struct CrossCheck {
  double is_estimate = 0.0;
  double is_standard_error = 0.0;
  double is_ess = 0.0;
  double mcmc_mean = 0.0;
  double mcmc_standard_error = 0.0;
  /// |difference| / combined standard error.
  double z_score = 0.0;
};

/// Replicates pooled at one N.
struct PointSummary {
  int half_width = 0;
  double median_radius = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double mean_radius = 0.0;
  double mean_standard_error = 0.0;
  double ess = 0.0;
  bool converged = false;
  std::string flag;
  std::optional<CrossCheck> cross_check;
};

struct ScalingFit {
  bool valid = false;
  std::string reason;
  double exponent = 0.0;
  double exponent_se = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool reliable = false;
  std::vector<int> half_widths;
  std::vector<double> residuals;
};

/// gamma = 0 contrast at one N.
struct ControlPoint {
  int half_width = 0;
  double median_radius = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t samples = 0;
  std::string method;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<CellResult> cells;
  std::vector<PointSummary> points;
  ScalingFit fit;
  std::vector<ControlPoint> control;
  ScalingFit control_fit;
};

/// Fits log R = nu log N + c over the converged points; refuses fewer than 3.
ScalingFit fit_scaling(const std::vector<int>& half_widths, const std::vector<double>& radii,
                       const std::vector<bool>& usable);

/// Runs every (N, replicate) cell on `cfg.threads` workers and merges in cell order.
RunReport run_scaling_study(const ExperimentConfig& cfg, RunLog* log = nullptr);

nlohmann::json report_to_json(const RunReport& report);

// ---------------------------------------------------------------------------------------------
// Flory balance on the dilation family u_a(x) = a x

/// Exact integral of l^2 for u_a(x) = a x on [-N, N]^d with D = d: the overlap product separates
/// over axes, giving S(a)^d with S(a) = sum_k (2N + 1 - |k|) max(0, 1 - a |k|).
double dilation_penalty(int half_width, int dimension, double a);
/// H(u_a) = a^2 d (2N) (2N + 1)^{d - 1}.
double dilation_energy(int half_width, int dimension, double a);

struct FloryRow {
  int half_width = 0;
  int dimension = 0;
  double a_star = 0.0;
  double energy = 0.0;   ///< beta H(u_{a*})
  double penalty = 0.0;  ///< gamma int l^2 at a*
  double objective = 0.0;
  double radius = 0.0;
  double radius_over_n = 0.0;
};

/// Minimizes beta H(u_a) + gamma int l^2(u_a) over a > 0 by a log-spaced scan followed by
/// golden-section refinement.
std::vector<FloryRow> run_flory_balance(const std::vector<int>& half_widths, int dimension, double beta,
                                        double gamma);

struct FloryCurvePoint {
  double a = 0.0;
  double energy = 0.0;
  double penalty = 0.0;
};
std::vector<FloryCurvePoint> flory_curve(int half_width, int dimension, double beta, double gamma,
                                         const std::vector<double>& slopes);

// ---------------------------------------------------------------------------------------------
// Validation suite

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationOptions {
  /// Perturbs one eigenvalue of every computed basis before the checks run.
  bool inject_eigenvalue_fault = false;
  std::uint64_t seed = 1;
};

struct ValidationSummary {
  std::vector<ValidationCheck> checks;
  [[nodiscard]] bool all_passed() const;
};

ValidationSummary run_validation_suite(const ValidationOptions& options = {});

// ---------------------------------------------------------------------------------------------
// Plot data

/// Writes scaling.csv, control.csv, variance.csv and flory.csv into `dir`. Variances are scanned
/// for every N of the report's grid; the Flory curve uses the largest N.
/**
 * Throws std::runtime_error naming the path on I/O failure.
 */
std::vector<std::filesystem::path> emit_plot_data(const RunReport& report, const std::filesystem::path& dir);

}  // namespace selfrepel

#endif
