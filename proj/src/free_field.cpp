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

#include <cmath>
#include <stdexcept>

namespace selfrepel {

FreeFieldSampler::FreeFieldSampler(const SpectralBasis& basis, const GibbsParams& params) : basis_{&basis} {
  const auto& lambda = basis.eigenvalues();
  scale_ = Eigen::VectorXd::Zero(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (k == basis.constant_mode()) {
      continue;
    }
    if (!(lambda[k] > kZeroEigenvalueTolerance)) {
      throw std::logic_error("FreeFieldSampler: a non-constant mode has a zero eigenvalue");
    }
    scale_[k] = 1.0 / std::sqrt(2.0 * params.beta() * lambda[k]);
  }
}

FieldConfig FreeFieldSampler::sample(CounterRng& rng) const {
  Eigen::MatrixXd unused;
  return sample(rng, unused);
}

FieldConfig FreeFieldSampler::sample(CounterRng& rng, Eigen::MatrixXd& coefficients) const {
  const auto modes = scale_.size();
  const int dim = component_count();
  coefficients = Eigen::MatrixXd::Zero(modes, dim);
  for (int i = 0; i < dim; ++i) {
    for (Eigen::Index k = 1; k < modes; ++k) {
      coefficients(k, i) = scale_[k] * rng.normal();
    }
  }
  const auto& phi = basis_->eigenvectors();
  // Skip the constant column so the components are zero-mean up to rounding.
  const Eigen::MatrixXd values = phi.rightCols(modes - 1) * coefficients.bottomRows(modes - 1);
  std::vector<ScalarField> components;
  components.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    ScalarField c = values.col(i);
    c.array() -= c.mean();
    components.push_back(std::move(c));
  }
  return FieldConfig(box(), std::move(components));
}

FieldConfig sample_drifted_field(const SpectralBasis& basis, const GibbsParams& params, double drift,
                                 CounterRng& rng) {
  FieldConfig field = sample_free_field(basis, params, rng);
  if (drift == 0.0) {
    return field;
  }
  // x_i sums to zero over the symmetric box, so the drift keeps every component centered.
  const auto& box = basis.box();
  for (int i = 0; i < field.component_count(); ++i) {
    auto& c = field.component(i);
    for (SiteIndex s = 0; s < box.site_count(); ++s) {
      c[static_cast<Eigen::Index>(s)] += drift * box.coordinate(s, i);
    }
  }
  return field;
}

}  // namespace selfrepel
