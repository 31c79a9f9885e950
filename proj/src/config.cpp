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
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <type_traits>

#include <selfrepel/estimators.hpp>

#ifndef SELFREPEL_GIT_HASH
#define SELFREPEL_GIT_HASH "unknown"
#endif

namespace selfrepel {

const char* build_git_hash() noexcept { return SELFREPEL_GIT_HASH; }

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return {};
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw ConfigError("config key '" + key + "': value must be finite");
    }
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") {
    return true;
  }
  if (text == "false" || text == "0" || text == "no" || text == "off") {
    return false;
  }
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + text + "'");
}

std::vector<int> parse_grid(const std::string& key, const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    out.push_back(parse_number<int>(key, trim(item)));
  }
  if (out.empty()) {
    throw ConfigError("config key '" + key + "': empty list");
  }
  return out;
}

std::string join(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out += (i ? "," : "") + std::to_string(xs[i]);
  }
  return out;
}

std::string number(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_grid.empty()) {
    throw ConfigError("n_grid must not be empty");
  }
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) {
      throw ConfigError("n_grid entries must be >= 1");
    }
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw ConfigError("n_grid must be strictly increasing");
    }
  }
  if (d < 1 || d > CellList::kMaxDim) {
    throw ConfigError("d must be in 1.." + std::to_string(CellList::kMaxDim));
  }
  if (replicates < 1) {
    throw ConfigError("replicates must be >= 1");
  }
  if (threads < 1) {
    throw ConfigError("threads must be >= 1");
  }
  if (start != "linear" && start != "free") {
    throw ConfigError("start must be 'linear' or 'free'");
  }
  if (control != "exact" && control != "mcmc" && control != "none") {
    throw ConfigError("control must be 'exact', 'mcmc' or 'none'");
  }
  if (burn_in_fraction < 0.0) {
    throw ConfigError("burn_in_fraction must be >= 0");
  }
  if (sweeps_per_n2 < 0.0 || min_ess < 0.0 || !(start_slope > 0.0)) {
    throw ConfigError("sweeps_per_n2 and min_ess must be >= 0, start_slope > 0");
  }
  if (control != "none" && control_samples < 2) {
    throw ConfigError("control_samples must be >= 2");
  }
  if (is_steps < 1 || is_sweeps < 0) {
    throw ConfigError("is_steps must be >= 1 and is_sweeps >= 0");
  }
  if (is_particles != 0 && is_particles < kMinImportanceSamples) {
    throw ConfigError("is_particles must be 0 or >= " + std::to_string(kMinImportanceSamples));
  }
  try {
    mcmc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::int64_t ExperimentConfig::measurement_sweeps(int half_width) const {
  const double scaled = std::ceil(sweeps_per_n2 * half_width * half_width);
  return std::max(mcmc.sweeps, static_cast<std::int64_t>(scaled));
}

std::int64_t ExperimentConfig::burn_in_sweeps(int half_width) const {
  const double scaled = std::ceil(burn_in_fraction * static_cast<double>(measurement_sweeps(half_width)));
  return std::max(mcmc.burn_in, static_cast<std::int64_t>(scaled));
}

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  try {
    if (key == "experiment") {
      cfg.experiment = value;
    } else if (key == "n_grid") {
      cfg.n_grid = parse_grid(key, value);
    } else if (key == "d") {
      cfg.d = parse_number<int>(key, value);
    } else if (key == "beta") {
      cfg.params = cfg.params.with_beta(parse_number<double>(key, value));
    } else if (key == "gamma") {
      cfg.params = cfg.params.with_gamma(parse_number<double>(key, value));
    } else if (key == "replicates") {
      cfg.replicates = parse_number<int>(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(key, value);
      cfg.mcmc.seed = cfg.seed;
    } else if (key == "threads") {
      cfg.threads = parse_number<int>(key, value);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "start") {
      cfg.start = value;
    } else if (key == "start_slope") {
      cfg.start_slope = parse_number<double>(key, value);
    } else if (key == "control") {
      cfg.control = value;
    } else if (key == "control_samples") {
      cfg.control_samples = parse_number<std::size_t>(key, value);
    } else if (key == "is_particles") {
      cfg.is_particles = parse_number<std::size_t>(key, value);
    } else if (key == "is_steps") {
      cfg.is_steps = parse_number<int>(key, value);
    } else if (key == "is_sweeps") {
      cfg.is_sweeps = parse_number<int>(key, value);
    } else if (key == "min_ess") {
      cfg.min_ess = parse_number<double>(key, value);
    } else if (key == "log_measurements") {
      cfg.log_measurements = parse_bool(key, value);
    } else if (key == "sweeps_per_n2") {
      cfg.sweeps_per_n2 = parse_number<double>(key, value);
    } else if (key == "burn_in_fraction") {
      cfg.burn_in_fraction = parse_number<double>(key, value);
    } else if (key == "mcmc.sigma") {
      cfg.mcmc.sigma = parse_number<double>(key, value);
    } else if (key == "mcmc.dilation_probability") {
      cfg.mcmc.dilation_probability = parse_number<double>(key, value);
    } else if (key == "mcmc.dilation_eta") {
      cfg.mcmc.dilation_eta = parse_number<double>(key, value);
    } else if (key == "mcmc.sweeps") {
      cfg.mcmc.sweeps = parse_number<std::int64_t>(key, value);
    } else if (key == "mcmc.burn_in") {
      cfg.mcmc.burn_in = parse_number<std::int64_t>(key, value);
    } else if (key == "mcmc.thinning") {
      cfg.mcmc.thinning = parse_number<std::int64_t>(key, value);
    } else if (key == "mcmc.adapt_sigma") {
      cfg.mcmc.adapt_sigma = parse_bool(key, value);
    } else if (key == "mcmc.cache_check_interval") {
      cfg.mcmc.cache_check_interval = parse_number<std::int64_t>(key, value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    if (trim(line).empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_number) + ": expected 'key = value'");
    }
    try {
      apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  try {
    return parse_config(in, std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string format_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "experiment = " << cfg.experiment << "\n"
      << "n_grid = " << join(cfg.n_grid) << "\n"
      << "d = " << cfg.d << "\n"
      << "beta = " << number(cfg.params.beta()) << "\n"
      << "gamma = " << number(cfg.params.gamma()) << "\n"
      << "replicates = " << cfg.replicates << "\n"
      << "seed = " << cfg.seed << "\n"
      << "threads = " << cfg.threads << "\n"
      << "output_dir = " << cfg.output_dir << "\n"
      << "start = " << cfg.start << "\n"
      << "start_slope = " << number(cfg.start_slope) << "\n"
      << "control = " << cfg.control << "\n"
      << "control_samples = " << cfg.control_samples << "\n"
      << "is_particles = " << cfg.is_particles << "\n"
      << "is_steps = " << cfg.is_steps << "\n"
      << "is_sweeps = " << cfg.is_sweeps << "\n"
      << "min_ess = " << number(cfg.min_ess) << "\n"
      << "log_measurements = " << (cfg.log_measurements ? "true" : "false") << "\n"
      << "sweeps_per_n2 = " << number(cfg.sweeps_per_n2) << "\n"
      << "burn_in_fraction = " << number(cfg.burn_in_fraction) << "\n"
      << "mcmc.sigma = " << number(cfg.mcmc.sigma) << "\n"
      << "mcmc.dilation_probability = " << number(cfg.mcmc.dilation_probability) << "\n"
      << "mcmc.dilation_eta = " << number(cfg.mcmc.dilation_eta) << "\n"
      << "mcmc.sweeps = " << cfg.mcmc.sweeps << "\n"
      << "mcmc.burn_in = " << cfg.mcmc.burn_in << "\n"
      << "mcmc.thinning = " << cfg.mcmc.thinning << "\n"
      << "mcmc.adapt_sigma = " << (cfg.mcmc.adapt_sigma ? "true" : "false") << "\n"
      << "mcmc.cache_check_interval = " << cfg.mcmc.cache_check_interval << "\n";
  return out.str();
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json out;
  std::istringstream in(format_config(cfg));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void RunLog::write(const nlohmann::json& record) {
  *out_ << record.dump() << '\n';
  if (!*out_) {
    throw std::runtime_error("RunLog: write failed");
  }
}

std::string reproducible_payload(std::istream& in) {
  std::string out;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      continue;
    }
    auto record = nlohmann::json::parse(line);
    record.erase("meta");
    out += record.dump();
    out += '\n';
  }
  return out;
}

}  // namespace selfrepel
