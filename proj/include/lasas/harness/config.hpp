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
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "lasas/accent_shift/lasas_block.hpp"
#include "lasas/arhead/head.hpp"
#include "lasas/encoder/encoder.hpp"

namespace lasas::harness {

using numerics::Real;

struct OptimizerConfig {
  Real lr = 1e-3;
  std::size_t epochs = 15;
  std::size_t batch_size = 8;
};

/// Text corruption rates for training and evaluation transcripts.
struct CorruptionConfig {
  Real train = 0.0;
  Real eval = 0.0;
};

/// One experiment. `data` points at a corpus manifest.json (or its directory); it may be left
/// empty when the caller supplies the corpus in memory.
struct ExperimentConfig {
  std::string data;
  arhead::SystemVariant variant = arhead::SystemVariant::kLasas;
  encoder::EncoderConfig encoder;
  accent_shift::LasasConfig lasas;
  arhead::HeadConfig head;
  OptimizerConfig optimizer;
  CorruptionConfig corruption;
  std::uint64_t seed = 1;
  std::string output_dir;

  /// Checks every sub-config; with `check_files`, also that `data` exists.
  void validate(bool check_files = false) const;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static ExperimentConfig from_json(const nlohmann::json& doc);
  static ExperimentConfig load(const std::string& path);
};

}  // namespace lasas::harness
