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

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lasas/harness/config.hpp"
#include "lasas/numerics/gradcheck.hpp"

namespace lasas::harness {

struct ModuleGradCheck {
  std::string module;  // encoder, lasas, head, dc
  Real max_rel_error = 0.0;
  std::string worst_param;
};

struct GradCheckReport {
  Real threshold = 1e-5;
  std::vector<ModuleGradCheck> modules;
  Real max_rel_error = 0.0;
  std::string worst_param;
  bool passed = false;

  nlohmann::json to_json() const;
};

/// Finite-difference check of the full model for cfg's architecture (the
/// variant is forced to lasas so all three modules are on the path) on a tiny
/// deterministic batch of two utterances. Parameters are grouped by module.
GradCheckReport run_gradcheck(const ExperimentConfig& cfg, Real threshold = 1e-5,
                              const numerics::GradCheckOptions& opts = {});

}  // namespace lasas::harness
