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
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lasas/harness/trainer.hpp"

namespace lasas::harness {

enum class AblationAxis { kSpaces, kVariant, kTaps, kCorruption };

std::string to_string(AblationAxis axis);
/// Accepts spaces (or n), variant, taps, corruption.
AblationAxis axis_from_string(const std::string& s);

struct AblationSetting {
  std::string label;
  ExperimentConfig config;  // seed = base seed; per-seed runs add 0, 1, 2, …
};

/// Settings swept for an axis:
///   spaces      N in {2, 4, 8} (lasas variant)
///   variant     lasas, direct_concat, acoustic_only
///   taps        shallow, middle and deep thirds of the encoder, then all layers
///   corruption  (train, eval) in {(0, 0), (0, 0.06), (0.06, 0.06)}
std::vector<AblationSetting> ablation_settings(const ExperimentConfig& base, AblationAxis axis);

struct AblationRow {
  std::string label;
  std::vector<RunReport> runs;  // one per seed
  Real mean = 0.0;              // test accuracy over seeds
  Real min = 0.0;
  Real max = 0.0;
};

struct AblationTable {
  AblationAxis axis = AblationAxis::kVariant;
  std::vector<AblationRow> rows;

  const AblationRow& row(const std::string& label) const;
  nlohmann::json to_json() const;
  /// Markdown table: setting | mean | range | per-seed accuracies.
  std::string to_markdown() const;
};

using Runner = std::function<RunReport(const ExperimentConfig&)>;

/// Runs every setting of `axis` with `seeds` consecutive seeds starting at
/// base.seed. When base.output_dir is set, each run writes to
/// <output_dir>/<axis>/<label>/seed<k>.
AblationTable ablate(const ExperimentConfig& base, AblationAxis axis, const Runner& run, std::size_t seeds = 3);

}  // namespace lasas::harness
