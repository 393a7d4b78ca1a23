// Copyright 2026 The LASAS Authors
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

#include "lasas/numerics/adam.hpp"

#include <cmath>
#include <string>

#include "lasas/errors.hpp"

namespace lasas::numerics {

Adam::Adam(ParamList params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const Param* p : params_) {
    m_.emplace_back(p->value.rows(), p->value.cols());
    v_.emplace_back(p->value.rows(), p->value.cols());
  }
}

void Adam::step(std::int64_t t) {
  if (t < 1) throw ConfigError("Adam::step: step index must be >= 1");
  for (const Param* p : params_) {
    if (!p->grad.all_finite()) throw NumericError("Adam: non-finite gradient in parameter " + p->name);
  }
  const Real bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<Real>(t));
  const Real bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<Real>(t));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Param& p = *params_[k];
    Real* w = p.value.data();
    const Real* g = p.grad.data();
    Real* m = m_[k].data();
    Real* v = v_[k].data();
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      const Real m_hat = m[i] / bc1;
      const Real v_hat = v[i] / bc2;
      w[i] -= cfg_.lr * m_hat / (std::sqrt(v_hat) + cfg_.eps);
    }
  }
  steps_ = t;
}

}  // namespace lasas::numerics
