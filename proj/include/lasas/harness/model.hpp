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
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lasas/harness/config.hpp"
#include "lasas/synthgen/corpus.hpp"

namespace lasas::harness {

using numerics::Matrix;
using numerics::ParamList;
using numerics::Tape;
using numerics::Var;
using tokenizer::SubwordId;

/// Encoder, optional LASAS block or direct-concat reduction, and AR head for
/// one system variant. Parameters are initialized from derive_seed(seed).
class AccentModel {
 public:
  AccentModel(const ExperimentConfig& cfg, std::size_t feature_dim, std::size_t vocab_size, std::size_t num_accents);
  AccentModel(const AccentModel&) = delete;
  AccentModel& operator=(const AccentModel&) = delete;

  /// 1×K logits for one utterance; `text_ids` holds one subword id per frame.
  Var forward(Tape& tape, const Matrix& frames, const std::vector<SubwordId>& text_ids);

  /// T×N accent shift of one utterance (LASAS variant only).
  Matrix shift(const Matrix& frames, const std::vector<SubwordId>& text_ids);

  const ParamList& params() const { return params_; }
  arhead::SystemVariant variant() const { return variant_; }
  std::size_t vocab_size() const { return vocab_size_; }
  accent_shift::LasasParams* lasas() { return lasas_.get(); }

 private:
  Var acoustic_embedding(Tape& tape, const Matrix& frames);

  arhead::SystemVariant variant_;
  std::size_t vocab_size_;
  std::vector<std::size_t> taps_;
  std::unique_ptr<encoder::AcousticEncoder> encoder_;
  std::unique_ptr<accent_shift::LasasParams> lasas_;
  numerics::Param dc_reduction_;
  std::unique_ptr<arhead::AccentHead> head_;
  ParamList params_;
};

inline constexpr int kCheckpointVersion = 1;

/// {"format":"lasas-checkpoint","version":1,"params":[{"name","rows","cols","data"}]}
nlohmann::json checkpoint_to_json(const ParamList& params);
/// Copies values into `params` by name. Missing names, shape mismatches and
/// unsupported versions throw.
void load_checkpoint(const nlohmann::json& doc, const ParamList& params);
void write_checkpoint(const std::string& path, const ParamList& params);
void read_checkpoint(const std::string& path, const ParamList& params);

}  // namespace lasas::harness
