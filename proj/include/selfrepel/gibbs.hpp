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

#ifndef SELFREPEL_GIBBS_HPP
#define SELFREPEL_GIBBS_HPP

#include <stdexcept>
#include <string>

namespace selfrepel {

/// Inverse temperature `beta` > 0 and repulsion strength `gamma` >= 0.
class GibbsParams {
 public:
  GibbsParams(double beta, double gamma) : beta_{beta}, gamma_{gamma} {
    if (!(beta > 0.0)) {
      throw std::invalid_argument("GibbsParams: beta must be > 0, got " + std::to_string(beta));
    }
    if (!(gamma >= 0.0)) {
      throw std::invalid_argument("GibbsParams: gamma must be >= 0, got " + std::to_string(gamma));
    }
  }

  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] double gamma() const noexcept { return gamma_; }

  [[nodiscard]] GibbsParams with_gamma(double gamma) const { return {beta_, gamma}; }
  [[nodiscard]] GibbsParams with_beta(double beta) const { return {beta, gamma_}; }

  friend bool operator==(const GibbsParams&, const GibbsParams&) = default;

 private:
  double beta_;
  double gamma_;
};

}  // namespace selfrepel

#endif
