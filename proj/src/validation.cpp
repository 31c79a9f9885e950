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
#include <cmath>
#include <sstream>

#include <selfrepel/free_field.hpp>
#include <selfrepel/observables.hpp>
#include <selfrepel/penalty.hpp>
#include <selfrepel/spectral.hpp>

namespace selfrepel {

namespace {

constexpr double kFaultSize = 0.1;

std::string fmt_double(double x) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << x;
  return out.str();
}

SpectralBasis make_basis(const LatticeBox& box, const ValidationOptions& options) {
  SpectralBasis basis = eigendecompose(box);
  if (options.inject_eigenvalue_fault) {
    basis.perturb_eigenvalue(1, kFaultSize);
  }
  return basis;
}

ValidationCheck check_laplacian_identity(CounterRng& rng) {
  double worst = 0.0;
  for (int d = 1; d <= 3; ++d) {
    for (int n_half = 1; n_half <= 3; ++n_half) {
      const LatticeBox box(n_half, d);
      const auto n = static_cast<Eigen::Index>(box.site_count());
      for (int rep = 0; rep < 4; ++rep) {
        ScalarField f(n);
        ScalarField g(n);
        for (Eigen::Index i = 0; i < n; ++i) {
          f[i] = rng.normal();
          g[i] = rng.normal();
        }
        const double lhs = dirichlet_energy(f, g, box);
        const double rhs = -f.dot(apply_laplacian(g, box));
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      }
    }
  }
  return {"laplacian_identity", worst < 1e-10, "max relative error " + fmt_double(worst)};
}

ValidationCheck check_spectral(const ValidationOptions& options) {
  double gram = 0.0;
  double residual = 0.0;
  for (int d = 1; d <= 3; ++d) {
    for (int n_half = 1; n_half <= (d == 3 ? 3 : 8); ++n_half) {
      const auto basis = make_basis(LatticeBox(n_half, d), options);
      gram = std::max(gram, basis.gram_deviation());
      residual = std::max(residual, basis.max_residual());
    }
  }
  return {"spectral_orthonormality_residual", gram < 1e-9 && residual < 1e-8,
          "gram " + fmt_double(gram) + ", residual " + fmt_double(residual)};
}

ValidationCheck check_tensor_sum(const ValidationOptions& options) {
  double worst = 0.0;
  for (int n_half = 1; n_half <= 4; ++n_half) {
    const auto one = make_basis(LatticeBox(n_half, 1), options);
    const std::vector<double> one_dim(one.eigenvalues().begin(), one.eigenvalues().end());
    for (int d = 2; d <= 3; ++d) {
      if (d == 3 && n_half > 3) {
        continue;
      }
      const auto expected = tensor_sum_spectrum(one_dim, d);
      const auto basis = make_basis(LatticeBox(n_half, d), options);
      for (std::size_t k = 0; k < expected.size(); ++k) {
        worst = std::max(worst, std::abs(expected[k] - basis.eigenvalues()[static_cast<Eigen::Index>(k)]));
      }
    }
  }
  return {"tensor_sum_spectrum", worst < 1e-9, "max deviation " + fmt_double(worst)};
}

ValidationCheck check_covariance(const ValidationOptions& options) {
  const LatticeBox box(3, 2);
  const GibbsParams params(1.0, 0.0);
  const auto basis = make_basis(box, options);
  const PairVarianceSolver solver(box);
  const FreeFieldSampler sampler(basis, params);
  CounterRng rng(options.seed, 11);
  const std::vector<std::pair<SiteIndex, SiteIndex>> pairs{{0, 48}, {0, 1}, {24, 31}, {6, 42}, {10, 17}};
  constexpr int kDraws = 20000;
  std::vector<double> sum(pairs.size());
  std::vector<double> sum_sq(pairs.size());
  for (int s = 0; s < kDraws; ++s) {
    const auto field = sampler.sample(rng);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const double diff = field.value(pairs[p].first, 0) - field.value(pairs[p].second, 0);
      sum[p] += diff * diff;
      sum_sq[p] += diff * diff * diff * diff;
    }
  }
  double worst = 0.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const double mean = sum[p] / kDraws;
    const double se = std::sqrt((sum_sq[p] / kDraws - mean * mean) / kDraws);
    const double exact = solver.variance(params, pairs[p].first, pairs[p].second).variance;
    worst = std::max(worst, std::abs(mean - exact) / se);
  }
  return {"free_field_covariance", worst < 4.5, "max |z| " + fmt_double(worst) + " over 5 pairs"};
}

ValidationCheck check_penalty(CounterRng& rng) {
  double worst_grid = 0.0;
  double worst_hash = 0.0;
  constexpr double kStep = 1.0 / 1024.0;
  for (int rep = 0; rep < 10; ++rep) {
    const int dim = 1 + rep % 2;
    const LatticeBox box(dim == 1 ? 20 : 4, dim);
    FieldConfig field(box, dim);
    for (int i = 0; i < dim; ++i) {
      auto& c = field.component(i);
      for (Eigen::Index s = 0; s < c.size(); ++s) {
        c[s] = std::round(3.0 * rng.normal() / kStep) * kStep;
      }
    }
    const auto packed = field.packed();
    const double exact = penalty_integral(field).total;
    const double grid = penalty_grid_integral(packed, dim, kStep);
    worst_grid = std::max(worst_grid, std::abs(exact - grid) / exact);
    worst_hash = std::max(worst_hash, std::abs(exact - penalty_integral_naive(field).total));
  }
  return {"penalty_oracle", worst_grid < 1e-9 && worst_hash == 0.0,
          "grid relative error " + fmt_double(worst_grid) + ", hashed vs naive " + fmt_double(worst_hash)};
}

ValidationCheck check_variance(const ValidationOptions& options) {
  const GibbsParams params(1.0, 0.0);
  double worst = 0.0;
  for (int d = 1; d <= 2; ++d) {
    const LatticeBox box(4, d);
    const auto basis = make_basis(box, options);
    const PairVarianceSolver solver(box);
    const auto n = static_cast<SiteIndex>(box.site_count());
    for (SiteIndex z = 0; z < n; z += 3) {
      for (SiteIndex w = z + 1; w < n; w += 5) {
        const double a = solver.variance(params, z, w).variance;
        const double b = variance_pair_spectral(basis, params, z, w);
        worst = std::max(worst, std::abs(a - b) / a);
      }
    }
  }
  return {"variance_solve_vs_spectral", worst < 1e-9, "max relative error " + fmt_double(worst)};
}

ValidationCheck check_variance_bounds() {
  const GibbsParams params(1.0, 0.0);
  std::string detail;
  bool ok = true;
  for (int d = 1; d <= 3; ++d) {
    const LatticeBox box(d == 3 ? 3 : 6, d);
    const auto scan = variance_bounds_scan(box, params);
    const double floor = 1.0 / (4.0 * d * params.beta());
    ok = ok && scan.min_variance >= floor;
    detail += "d=" + std::to_string(d) + " min " + fmt_double(scan.min_variance) + " >= " + fmt_double(floor) + "; ";
  }
  return {"variance_lower_bound", ok, detail};
}

ValidationCheck check_jensen() {
  const LatticeBox box(4, 2);
  const auto constant = FieldConfig(box, 2);
  const auto small = linear_field(box, 0.25 / 4.0);
  const auto c1 = penalty_jensen_check(constant, 0.5);
  const auto c2 = penalty_jensen_check(small, 1.0);
  const bool ok = c1.applicable && c1.holds && c2.applicable && c2.holds;
  return {"jensen_lower_bound", ok,
          "constant " + fmt_double(c1.lhs) + " >= " + fmt_double(c1.rhs) + ", contracted " + fmt_double(c2.lhs) +
              " >= " + fmt_double(c2.rhs)};
}

ValidationCheck check_drift() {
  double worst = 0.0;
  double closed = 0.0;
  for (int d = 1; d <= 3; ++d) {
    for (int n_half = 2; n_half <= 12; n_half += 5) {
      const auto alpha = alpha_coefficients(n_half, d);
      for (int n = -n_half; n <= n_half; ++n) {
        worst = std::max(worst, std::abs(alpha.reconstruct(n) - n));
      }
      for (int k = 1; k <= n_half; ++k) {
        closed = std::max(closed, std::abs(alpha.alpha(k) - alpha_closed_form(n_half, d, k)) /
                                      std::max(1.0, std::abs(alpha.alpha(k))));
        closed = std::max(closed, std::abs(alpha.alpha(-k)));
      }
    }
  }
  return {"drift_coefficients", worst < 1e-8 && closed < 1e-9,
          "reconstruction " + fmt_double(worst) + ", closed form " + fmt_double(closed)};
}

ValidationCheck check_semigroup() {
  const auto decay = semigroup_decay(32);
  const bool ok = decay.slope >= -0.6 && decay.slope <= -0.4 && decay.late_time_gap < 1e-6;
  return {"semigroup_decay", ok,
          "slope " + fmt_double(decay.slope) + ", late-time gap " + fmt_double(decay.late_time_gap)};
}

ValidationCheck check_mcmc_cache(std::uint64_t seed) {
  const LatticeBox box(3, 2);
  ChainState state(linear_field(box, 1.0), seed, 5, true);
  MCMCConfig cfg;
  cfg.seed = seed;
  cfg.burn_in = 0;
  cfg.sweeps = 200;
  cfg.dilation_probability = 0.05;
  const auto summary = run_chain(state, GibbsParams(1.0, 1.0), cfg, nullptr);
  const double drift = std::max(summary.max_cache_drift, state.resynchronize());
  return {"mcmc_cache_coherence", drift < kCacheTolerance, "max relative drift " + fmt_double(drift)};
}

}  // namespace

bool ValidationSummary::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

ValidationSummary run_validation_suite(const ValidationOptions& options) {
  CounterRng rng(options.seed, 3);
  ValidationSummary out;
  out.checks.push_back(check_laplacian_identity(rng));
  out.checks.push_back(check_spectral(options));
  out.checks.push_back(check_tensor_sum(options));
  out.checks.push_back(check_covariance(options));
  out.checks.push_back(check_penalty(rng));
  out.checks.push_back(check_variance(options));
  out.checks.push_back(check_variance_bounds());
  out.checks.push_back(check_jensen());
  out.checks.push_back(check_drift());
  out.checks.push_back(check_semigroup());
  out.checks.push_back(check_mcmc_cache(options.seed));
  return out;
}

}  // namespace selfrepel
