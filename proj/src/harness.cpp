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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <selfrepel/estimators.hpp>
#include <selfrepel/free_field.hpp>
#include <selfrepel/observables.hpp>
#include <selfrepel/spectral.hpp>
#include <selfrepel/stats.hpp>

namespace selfrepel {

namespace {

constexpr std::uint64_t kStartStream = std::uint64_t{1} << 62;
constexpr std::uint64_t kControlStream = (std::uint64_t{1} << 62) + (std::uint64_t{1} << 61);
constexpr double kZ95 = 1.959963984540054;
constexpr int kBatches = 20;

/// Runs `jobs` on `threads` workers; results land in slots owned by each job.
void run_jobs(std::vector<std::function<void()>>& jobs, int threads) {
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        jobs[j]();
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(threads), jobs.size());
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
      pool.emplace_back(worker);
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

/// Medians of `batches` contiguous blocks of `xs`, appended to `out`.
void batch_medians(const std::vector<double>& xs, int batches, std::vector<double>& out) {
  const std::size_t size = xs.size() / static_cast<std::size_t>(batches);
  if (size == 0) {
    return;
  }
  for (int b = 0; b < batches; ++b) {
    const auto first = xs.begin() + static_cast<std::ptrdiff_t>(b * size);
    out.push_back(stats::median(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(size))));
  }
}

/// Order-statistic confidence interval for the median of independent draws.
std::pair<double, double> median_interval(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double m = static_cast<double>(xs.size());
  const double half = kZ95 * std::sqrt(m) / 2.0;
  const auto lo = static_cast<std::size_t>(std::clamp(std::floor(m / 2.0 - half), 0.0, m - 1.0));
  const auto hi = static_cast<std::size_t>(std::clamp(std::ceil(m / 2.0 + half), 0.0, m - 1.0));
  return {xs[lo], xs[hi]};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SpectralBasis basis_for(const LatticeBox& box) {
  return box.dimension() == 1 ? eigendecompose(box) : eigendecompose_separable(box);
}

struct CellJob {
  CellResult result;
  std::vector<std::string> records;
  std::string warnings;
};

void run_cell(const ExperimentConfig& cfg, const GibbsParams& params, int half_width, int replicate,
              std::uint64_t chain_id, CellJob& job) {
  const auto started = std::chrono::steady_clock::now();
  const LatticeBox box(half_width, cfg.d);
  FieldConfig start = linear_field(box, cfg.start_slope);
  if (cfg.start == "free") {
    const auto basis = basis_for(box);
    CounterRng rng(cfg.seed, kStartStream + chain_id);
    start = sample_free_field(basis, GibbsParams(params.beta(), 0.0), rng);
  }
  ChainState state(start, cfg.seed, chain_id, params.gamma() > 0.0);
  MCMCConfig mcmc = cfg.mcmc;
  mcmc.seed = cfg.seed;
  mcmc.sweeps = cfg.measurement_sweeps(half_width);
  mcmc.burn_in = cfg.burn_in_sweeps(half_width);

  auto& out = job.result;
  out.half_width = half_width;
  out.replicate = replicate;
  out.seed = cfg.seed;
  out.chain_id = chain_id;
  std::vector<double> energies;
  std::vector<double> penalties;
  std::ostringstream warnings;
  const auto summary = run_chain(
      state, params, mcmc,
      [&](const ChainState& s, std::int64_t sweep) {
        const double radius = point_set_diameter(s.positions(), s.component_count());
        const double penalty = s.penalty();
        out.radii.push_back(radius);
        energies.push_back(s.energy());
        penalties.push_back(penalty);
        if (cfg.log_measurements) {
          nlohmann::json record{{"type", "measurement"},
                                {"N", half_width},
                                {"replicate", replicate},
                                {"seed", cfg.seed},
                                {"chain_id", chain_id},
                                {"sweep", sweep},
                                {"step", s.steps()},
                                {"radius", radius},
                                {"energy", s.energy()},
                                {"penalty", penalty}};
          job.records.push_back(record.dump());
        }
      },
      &warnings);

  out.step_begin = summary.measure_step_begin;
  out.step_end = summary.measure_step_end;
  out.measurements = out.radii.size();
  out.median_radius = stats::median(out.radii);
  out.mean_radius = stats::mean(out.radii);
  const double se = out.radii.size() > 1 ? stats::correlated_standard_error(out.radii) : 0.0;
  out.mean_ci_lo = out.mean_radius - kZ95 * se;
  out.mean_ci_hi = out.mean_radius + kZ95 * se;
  out.tau = out.radii.size() > 1 ? stats::autocorrelation_time(out.radii) : 1.0;
  out.ess = static_cast<double>(out.radii.size()) / out.tau;
  out.local_acceptance = summary.local_acceptance();
  out.dilation_acceptance = summary.dilation_acceptance();
  out.final_sigma = summary.final_sigma;
  out.energy_mean = stats::mean(energies);
  out.penalty_mean = stats::mean(penalties);
  out.penalty_sd = penalties.size() > 1 ? std::sqrt(stats::variance(penalties)) : 0.0;
  out.max_cache_drift = summary.max_cache_drift;
  job.warnings = warnings.str();
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
}

nlohmann::json cell_json(const CellResult& c) {
  return {{"type", "cell"},
          {"N", c.half_width},
          {"replicate", c.replicate},
          {"seed", c.seed},
          {"chain_id", c.chain_id},
          {"step_begin", c.step_begin},
          {"step_end", c.step_end},
          {"measurements", c.measurements},
          {"median_radius", c.median_radius},
          {"mean_radius", c.mean_radius},
          {"mean_ci", {c.mean_ci_lo, c.mean_ci_hi}},
          {"tau", c.tau},
          {"ess", c.ess},
          {"local_acceptance", c.local_acceptance},
          {"dilation_acceptance", c.dilation_acceptance},
          {"final_sigma", c.final_sigma},
          {"energy_mean", c.energy_mean},
          {"penalty_mean", c.penalty_mean},
          {"penalty_sd", c.penalty_sd},
          {"max_cache_drift", c.max_cache_drift},
          {"meta", {{"wall_seconds", c.wall_seconds}}}};
}

nlohmann::json point_json(const PointSummary& p) {
  nlohmann::json out{{"type", "point"},
                     {"N", p.half_width},
                     {"median_radius", p.median_radius},
                     {"median_ci", {p.ci_lo, p.ci_hi}},
                     {"mean_radius", p.mean_radius},
                     {"mean_standard_error", p.mean_standard_error},
                     {"ess", p.ess},
                     {"converged", p.converged},
                     {"flag", p.flag}};
  if (p.cross_check) {
    const auto& x = *p.cross_check;
    out["cross_check"] = {{"is_estimate", x.is_estimate},       {"is_standard_error", x.is_standard_error},
                          {"is_ess", x.is_ess},                 {"mcmc_mean", x.mcmc_mean},
                          {"mcmc_standard_error", x.mcmc_standard_error}, {"z_score", x.z_score}};
  }
  return out;
}

nlohmann::json fit_json(const ScalingFit& f, const std::string& type) {
  return {{"type", type},
          {"valid", f.valid},
          {"reason", f.reason},
          {"exponent", f.exponent},
          {"exponent_se", f.exponent_se},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared},
          {"reliable", f.reliable},
          {"N", f.half_widths},
          {"residuals", f.residuals}};
}

/// Median R_N divided by sqrt(beta) log N and by log N / sqrt(beta).
std::pair<double, double> control_normalizations(const ControlPoint& c, double beta) {
  const double log_n = std::log(static_cast<double>(c.half_width));
  return {c.median_radius / (std::sqrt(beta) * log_n), c.median_radius * std::sqrt(beta) / log_n};
}

nlohmann::json control_json(const ControlPoint& c, double beta) {
  const auto [plus, minus] = control_normalizations(c, beta);
  return {{"type", "control_point"},
          {"N", c.half_width},
          {"median_radius", c.median_radius},
          {"median_ci", {c.ci_lo, c.ci_hi}},
          {"samples", c.samples},
          {"method", c.method},
          {"median_over_sqrt_beta_log_n", plus},
          {"median_sqrt_beta_over_log_n", minus}};
}

PointSummary summarize_point(const ExperimentConfig& cfg, int half_width, const std::vector<CellResult>& cells) {
  PointSummary p;
  p.half_width = half_width;
  std::vector<double> pooled;
  std::vector<double> medians;
  double var_sum = 0.0;
  double drift = 0.0;
  for (const auto& c : cells) {
    pooled.insert(pooled.end(), c.radii.begin(), c.radii.end());
    batch_medians(c.radii, kBatches, medians);
    p.ess += c.ess;
    p.mean_radius += c.mean_radius / static_cast<double>(cells.size());
    const double se = (c.mean_ci_hi - c.mean_ci_lo) / (2.0 * kZ95);
    var_sum += se * se;
    drift = std::max(drift, c.max_cache_drift);
  }
  p.mean_standard_error = std::sqrt(var_sum) / static_cast<double>(cells.size());
  p.median_radius = stats::median(pooled);
  const double half =
      medians.size() > 1 ? kZ95 * std::sqrt(stats::variance(medians) / static_cast<double>(medians.size())) : 0.0;
  p.ci_lo = p.median_radius - half;
  p.ci_hi = p.median_radius + half;
  p.converged = p.ess >= cfg.min_ess && drift <= kCacheTolerance;
  if (p.ess < cfg.min_ess) {
    p.flag = "effective sample size " + std::to_string(p.ess) + " below " + std::to_string(cfg.min_ess);
  } else if (drift > kCacheTolerance) {
    p.flag = "cache drift " + std::to_string(drift) + " above tolerance";
  }
  return p;
}

}  // namespace

ScalingFit fit_scaling(const std::vector<int>& half_widths, const std::vector<double>& radii,
                       const std::vector<bool>& usable) {
  ScalingFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < half_widths.size(); ++i) {
    if (usable[i] && radii[i] > 0.0) {
      fit.half_widths.push_back(half_widths[i]);
      xs.push_back(half_widths[i]);
      ys.push_back(radii[i]);
    }
  }
  if (xs.size() < 3) {
    fit.reason = "need at least 3 usable points, have " + std::to_string(xs.size());
    return fit;
  }
  const auto ls = stats::loglog_fit(xs, ys);
  fit.valid = true;
  fit.exponent = ls.slope;
  fit.exponent_se = ls.slope_se;
  fit.intercept = ls.intercept;
  fit.r_squared = ls.r_squared;
  fit.residuals = ls.residuals;
  fit.reliable = ls.r_squared >= 0.9;
  if (!fit.reliable) {
    fit.reason = "R^2 below 0.9";
  }
  return fit;
}

RunReport run_scaling_study(const ExperimentConfig& cfg, RunLog* log) {
  cfg.validate();
  RunReport report;
  report.config = cfg;
  const auto grid_size = cfg.n_grid.size();
  const auto reps = static_cast<std::size_t>(cfg.replicates);

  std::vector<CellJob> cells(grid_size * reps);
  std::vector<CellJob> control_cells(cfg.control == "mcmc" ? grid_size * reps : 0);
  std::vector<ControlPoint> exact_control(cfg.control == "exact" ? grid_size : 0);
  std::vector<std::optional<CrossCheck>> checks(grid_size);
  std::vector<AnnealedEstimate> annealed(grid_size);

  std::vector<std::function<void()>> jobs;
  for (std::size_t i = 0; i < grid_size; ++i) {
    for (std::size_t r = 0; r < reps; ++r) {
      const auto c = i * reps + r;
      jobs.emplace_back([&, i, r, c] {
        run_cell(cfg, cfg.params, cfg.n_grid[i], static_cast<int>(r), c, cells[c]);
      });
      if (cfg.control == "mcmc") {
        jobs.emplace_back([&, i, r, c] {
          run_cell(cfg, cfg.params.with_gamma(0.0), cfg.n_grid[i], static_cast<int>(r), cells.size() + c,
                   control_cells[c]);
        });
      }
    }
    if (cfg.control == "exact") {
      jobs.emplace_back([&, i] {
        const int n_half = cfg.n_grid[i];
        const auto basis = basis_for(LatticeBox(n_half, cfg.d));
        const FreeFieldSampler sampler(basis, cfg.params.with_gamma(0.0));
        CounterRng rng(cfg.seed, kControlStream + static_cast<std::uint64_t>(n_half));
        std::vector<double> radii(cfg.control_samples);
        for (auto& r : radii) {
          r = effective_radius(sampler.sample(rng));
        }
        auto& out = exact_control[i];
        out.half_width = n_half;
        out.median_radius = stats::median(radii);
        std::tie(out.ci_lo, out.ci_hi) = median_interval(radii);
        out.samples = radii.size();
        out.method = "exact";
      });
    }
    if (cfg.is_particles > 0 && cfg.n_grid[i] <= 4 && cfg.params.gamma() > 0.0) {
      jobs.emplace_back([&, i] {
        const auto basis = basis_for(LatticeBox(cfg.n_grid[i], cfg.d));
        AnnealingSchedule schedule;
        schedule.steps = cfg.is_steps;
        schedule.sweeps_per_step = cfg.is_sweeps;
        const std::uint64_t is_seed = cfg.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(cfg.n_grid[i] + 1);
        annealed[i] = estimate_tilted_annealed(
            basis, cfg.params, [](const FieldConfig& f) { return effective_radius(f); }, cfg.is_particles, schedule,
            is_seed);
      });
    }
  }
  run_jobs(jobs, cfg.threads);

  if (log != nullptr) {
    log->write({{"type", "header"},
                {"experiment", cfg.experiment},
                {"config", config_to_json(cfg)},
                {"git_hash", build_git_hash()},
                {"meta", {{"timestamp", utc_timestamp()}}}});
  }
  std::vector<double> medians;
  std::vector<bool> usable;
  for (std::size_t i = 0; i < grid_size; ++i) {
    std::vector<CellResult> at_n;
    for (std::size_t r = 0; r < reps; ++r) {
      auto& job = cells[i * reps + r];
      if (log != nullptr) {
        for (const auto& line : job.records) {
          log->write(nlohmann::json::parse(line));
        }
        auto record = cell_json(job.result);
        if (!job.warnings.empty()) {
          record["warnings"] = job.warnings;
        }
        log->write(record);
      }
      job.records.clear();
      at_n.push_back(job.result);
    }
    auto point = summarize_point(cfg, cfg.n_grid[i], at_n);
    if (!annealed[i].log_weights.empty()) {
      CrossCheck x;
      x.is_estimate = annealed[i].tilted.estimate;
      x.is_standard_error = annealed[i].tilted.standard_error;
      x.is_ess = annealed[i].tilted.ess;
      x.mcmc_mean = point.mean_radius;
      x.mcmc_standard_error = point.mean_standard_error;
      x.z_score = std::abs(x.is_estimate - x.mcmc_mean) /
                  std::sqrt(x.is_standard_error * x.is_standard_error + x.mcmc_standard_error * x.mcmc_standard_error);
      point.cross_check = x;
    }
    medians.push_back(point.median_radius);
    usable.push_back(point.converged);
    report.points.push_back(point);
    report.cells.insert(report.cells.end(), at_n.begin(), at_n.end());
  }
  report.fit = fit_scaling(cfg.n_grid, medians, usable);

  if (cfg.control == "exact") {
    report.control = exact_control;
  } else if (cfg.control == "mcmc") {
    for (std::size_t i = 0; i < grid_size; ++i) {
      std::vector<CellResult> at_n;
      for (std::size_t r = 0; r < reps; ++r) {
        auto& job = control_cells[i * reps + r];
        if (log != nullptr) {
          auto record = cell_json(job.result);
          record["type"] = "control_cell";
          log->write(record);
        }
        at_n.push_back(job.result);
      }
      const auto p = summarize_point(cfg, cfg.n_grid[i], at_n);
      ControlPoint c;
      c.half_width = p.half_width;
      c.median_radius = p.median_radius;
      c.ci_lo = p.ci_lo;
      c.ci_hi = p.ci_hi;
      c.samples = static_cast<std::size_t>(p.ess);
      c.method = "mcmc";
      report.control.push_back(c);
    }
  }
  if (!report.control.empty()) {
    std::vector<double> control_medians;
    for (const auto& c : report.control) {
      control_medians.push_back(c.median_radius);
    }
    report.control_fit = fit_scaling(cfg.n_grid, control_medians, std::vector<bool>(grid_size, true));
  }

  if (log != nullptr) {
    for (const auto& p : report.points) {
      log->write(point_json(p));
    }
    for (const auto& c : report.control) {
      log->write(control_json(c, cfg.params.beta()));
    }
    log->write(fit_json(report.fit, "fit"));
    if (!report.control.empty()) {
      log->write(fit_json(report.control_fit, "control_fit"));
    }
  }
  return report;
}

nlohmann::json report_to_json(const RunReport& report) {
  nlohmann::json out;
  out["config"] = config_to_json(report.config);
  out["git_hash"] = build_git_hash();
  out["cells"] = nlohmann::json::array();
  for (const auto& c : report.cells) {
    out["cells"].push_back(cell_json(c));
  }
  out["points"] = nlohmann::json::array();
  for (const auto& p : report.points) {
    out["points"].push_back(point_json(p));
  }
  out["control"] = nlohmann::json::array();
  for (const auto& c : report.control) {
    out["control"].push_back(control_json(c, report.config.params.beta()));
  }
  out["fit"] = fit_json(report.fit, "fit");
  out["control_fit"] = fit_json(report.control_fit, "control_fit");
  return out;
}

// ---------------------------------------------------------------------------------------------
// Flory balance

double dilation_penalty(int half_width, int dimension, double a) {
  if (half_width < 1 || dimension < 1 || !(a >= 0.0)) {
    throw std::invalid_argument("dilation_penalty: need N >= 1, d >= 1, a >= 0");
  }
  const int side = 2 * half_width + 1;
  double s = side;
  for (int k = 1; k < side; ++k) {
    const double overlap = 1.0 - a * k;
    if (overlap <= 0.0) {
      break;
    }
    s += 2.0 * (side - k) * overlap;
  }
  return std::pow(s, dimension);
}

double dilation_energy(int half_width, int dimension, double a) {
  const double side = 2.0 * half_width + 1.0;
  return a * a * dimension * 2.0 * half_width * std::pow(side, dimension - 1);
}

std::vector<FloryCurvePoint> flory_curve(int half_width, int dimension, double beta, double gamma,
                                         const std::vector<double>& slopes) {
  std::vector<FloryCurvePoint> out;
  out.reserve(slopes.size());
  for (const double a : slopes) {
    out.push_back({a, beta * dilation_energy(half_width, dimension, a),
                   gamma * dilation_penalty(half_width, dimension, a)});
  }
  return out;
}

std::vector<FloryRow> run_flory_balance(const std::vector<int>& half_widths, int dimension, double beta,
                                        double gamma) {
  const GibbsParams params(beta, gamma);
  std::vector<FloryRow> rows;
  for (const int n_half : half_widths) {
    auto objective = [&](double a) {
      return params.beta() * dilation_energy(n_half, dimension, a) +
             params.gamma() * dilation_penalty(n_half, dimension, a);
    };
    constexpr int kScan = 2000;
    const double lo = std::log(1e-4);
    const double hi = std::log(4.0);
    std::vector<double> grid(kScan);
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kScan; ++k) {
      grid[static_cast<std::size_t>(k)] = std::exp(lo + (hi - lo) * k / (kScan - 1));
      const double v = objective(grid[static_cast<std::size_t>(k)]);
      if (v < best_value) {
        best_value = v;
        best = static_cast<std::size_t>(k);
      }
    }
    double a = grid[best == 0 ? 0 : best - 1];
    double b = grid[std::min<std::size_t>(best + 1, kScan - 1)];
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (int it = 0; it < 200 && (b - a) > 1e-14 * b; ++it) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - ratio * (b - a);
        fc = objective(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + ratio * (b - a);
        fd = objective(d);
      }
    }
    double a_star = 0.5 * (a + b);
    if (objective(grid[best]) < objective(a_star)) {
      a_star = grid[best];
    }
    FloryRow row;
    row.half_width = n_half;
    row.dimension = dimension;
    row.a_star = a_star;
    row.energy = params.beta() * dilation_energy(n_half, dimension, a_star);
    row.penalty = params.gamma() * dilation_penalty(n_half, dimension, a_star);
    row.objective = row.energy + row.penalty;
    row.radius = effective_radius(linear_field(LatticeBox(n_half, dimension), a_star));
    row.radius_over_n = row.radius / n_half;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------------------------
// Plot data

std::vector<std::filesystem::path> emit_plot_data(const RunReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("emit_plot_data: cannot create " + dir.string() + ": " + ec.message());
  }
  std::vector<std::filesystem::path> written;
  auto open = [&](const char* name) {
    const auto path = dir / name;
    std::ofstream out(path);
    if (!out) {
      throw std::runtime_error("emit_plot_data: cannot open " + path.string());
    }
    out.precision(17);
    written.push_back(path);
    return out;
  };
  auto finish = [&](std::ofstream& out) {
    out.close();
    if (!out) {
      throw std::runtime_error("emit_plot_data: write failed for " + written.back().string());
    }
  };
  const auto& cfg = report.config;
  {
    auto out = open("scaling.csv");
    out << "N,median_radius,ci_lo,ci_hi,mean_radius,ess,converged\n";
    for (const auto& p : report.points) {
      out << p.half_width << ',' << p.median_radius << ',' << p.ci_lo << ',' << p.ci_hi << ',' << p.mean_radius
          << ',' << p.ess << ',' << (p.converged ? 1 : 0) << '\n';
    }
    finish(out);
  }
  {
    auto out = open("control.csv");
    out << "N,median_radius,ci_lo,ci_hi,method,median_over_sqrt_beta_log_n,median_sqrt_beta_over_log_n\n";
    for (const auto& c : report.control) {
      const auto [plus, minus] = control_normalizations(c, cfg.params.beta());
      out << c.half_width << ',' << c.median_radius << ',' << c.ci_lo << ',' << c.ci_hi << ',' << c.method << ','
          << plus << ',' << minus << '\n';
    }
    finish(out);
  }
  {
    auto out = open("variance.csv");
    out << "N,variance_min,variance_max,min_pair_z,min_pair_w,max_pair_z,max_pair_w,exhaustive\n";
    const GibbsParams params(cfg.params.beta(), 0.0);
    for (const int n_half : cfg.n_grid) {
      const auto scan = variance_bounds_scan(LatticeBox(n_half, cfg.d), params);
      out << n_half << ',' << scan.min_variance << ',' << scan.max_variance << ',' << scan.argmin.first << ','
          << scan.argmin.second << ',' << scan.argmax.first << ',' << scan.argmax.second << ','
          << (scan.exhaustive ? 1 : 0) << '\n';
    }
    finish(out);
  }
  {
    auto out = open("flory.csv");
    out << "N,a,energy,penalty\n";
    const int n_half = cfg.n_grid.back();
    std::vector<double> slopes;
    for (int k = 0; k <= 200; ++k) {
      slopes.push_back(std::pow(10.0, -3.0 + 3.5 * k / 200.0));
    }
    for (const auto& p : flory_curve(n_half, cfg.d, cfg.params.beta(), cfg.params.gamma(), slopes)) {
      out << n_half << ',' << p.a << ',' << p.energy << ',' << p.penalty << '\n';
    }
    finish(out);
  }
  return written;
}

}  // namespace selfrepel
