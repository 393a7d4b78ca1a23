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

#pragma once

#include <cstdint>
#include <vector>

#include "lasas/numerics/param.hpp"

namespace lasas::numerics {

struct AdamConfig {
  Real lr = 1e-3;
  Real beta1 = 0.9;
  Real beta2 = 0.999;
  Real eps = 1e-8;
};

/// Adam with bias correction. Gradients are read, never cleared; the caller
/// zeroes them between steps.
class Adam {
 public:
  Adam(ParamList params, AdamConfig cfg);

  /// Applies one update as step number `t` (t >= 1). Throws NumericError
  /// naming the first parameter with a non-finite gradient; in that case no
  /// parameter is modified.
  void step(std::int64_t t);
  /// Applies the next update (t = steps_taken() + 1).
  void step() { step(steps_ + 1); }

  std::int64_t steps_taken() const { return steps_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  ParamList params_;
  AdamConfig cfg_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  std::int64_t steps_ = 0;
};

}  // namespace lasas::numerics
