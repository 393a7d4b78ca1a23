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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lasas/numerics/param.hpp"
#include "lasas/numerics/tape.hpp"

namespace lasas::numerics {

/// Builds a scalar loss on the given tape from the current parameter values.
using LossBuilder = std::function<Var(Tape&)>;

struct GradCheckOptions {
  Real step = 1e-5;
  /// Coordinates probed per Param; a Param with fewer entries is probed fully.
  std::size_t coords_per_param = 32;
  std::uint64_t seed = 0;
};

struct ParamCheck {
  std::string name;
  std::size_t coords = 0;
  Real max_rel_error = 0.0;
  std::size_t worst_index = 0;
};

struct GradCheckResult {
  Real max_rel_error = 0.0;
  std::string worst_param;
  std::vector<ParamCheck> per_param;
};

/// Compares backward gradients with central differences. The error for one
/// coordinate is |g_fd - g_bp| / max(1, |g_fd|, |g_bp|); the result reports the
/// maximum. Param grads are left holding the backward gradient.
GradCheckResult finite_diff_check(const LossBuilder& loss_fn, const ParamList& params,
                                  const GradCheckOptions& opts = {});

}  // namespace lasas::numerics
