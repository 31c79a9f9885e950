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

#ifndef SELFREPEL_FREE_FIELD_HPP
#define SELFREPEL_FREE_FIELD_HPP

#include <selfrepel/gibbs.hpp>
#include <selfrepel/lattice.hpp>
#include <selfrepel/rng.hpp>
#include <selfrepel/spectral.hpp>

namespace selfrepel {

/// Exact sampler of the vector-valued free field with density proportional to exp(-beta H(u))
/// on zero-mean fields.
/**
 * Every non-constant mode k of every component gets an independent N(0, 1 / (2 beta lambda_k))
 * coefficient. The field has as many components as the box has dimensions.
 */
class FreeFieldSampler {
 public:
  FreeFieldSampler(const SpectralBasis& basis, const GibbsParams& params);

  [[nodiscard]] const LatticeBox& box() const noexcept { return basis_->box(); }
  [[nodiscard]] int component_count() const noexcept { return box().dimension(); }

  /// Standard deviation of the coefficient of mode k (k != constant mode).
  [[nodiscard]] double coefficient_sd(Eigen::Index k) const { return scale_[k]; }

  [[nodiscard]] FieldConfig sample(CounterRng& rng) const;
  /// Sample and also return the drawn coefficients (one column per component, row 0 unused).
  [[nodiscard]] FieldConfig sample(CounterRng& rng, Eigen::MatrixXd& coefficients) const;

 private:
  const SpectralBasis* basis_;
  Eigen::VectorXd scale_;
};

inline FieldConfig sample_free_field(const SpectralBasis& basis, const GibbsParams& params, CounterRng& rng) {
  return FreeFieldSampler(basis, params).sample(rng);
}

/// Free field plus the linear drift `drift * x_i` on component i, re-centered per component.
FieldConfig sample_drifted_field(const SpectralBasis& basis, const GibbsParams& params, double drift,
                                 CounterRng& rng);

}  // namespace selfrepel

#endif
