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
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lasas/encoder/layers.hpp"

namespace lasas::encoder {

struct EncoderConfig {
  std::size_t num_layers = 6;
  std::size_t d_model = 32;
  std::size_t heads = 4;
  std::size_t ff_dim = 64;
  /// 1-based layer indices whose outputs form the acoustic embedding.
  std::vector<std::size_t> taps{2, 3, 4};

  void validate() const;
  /// D1 = |taps| · d_model.
  std::size_t embedding_dim() const { return taps.size() * d_model; }

  nlohmann::json to_json() const;
  static EncoderConfig from_json(const nlohmann::json& doc);
};

/// Input projection plus a stack of pre-norm self-attention blocks.
class AcousticEncoder {
 public:
  AcousticEncoder(const EncoderConfig& cfg, std::size_t feature_dim, Rng& rng);
  AcousticEncoder(const AcousticEncoder&) = delete;
  AcousticEncoder& operator=(const AcousticEncoder&) = delete;

  /// Returns all L layer outputs, each T×d_model. Throws on T = 0.
  std::vector<Var> encode(Tape& tape, const Matrix& frames, const FrameMask& mask = {},
                          std::vector<Matrix>* attention = nullptr);

  const EncoderConfig& config() const { return cfg_; }
  std::size_t feature_dim() const { return input_.in_dim(); }
  void collect(ParamList& out);

 private:
  EncoderConfig cfg_;
  Linear input_;
  std::vector<TransformerBlock> layers_;
};

/// Concatenates the tapped layer outputs in ascending tap order, giving the
/// T×(|taps|·d_model) acoustic embedding. Taps are 1-based.
Var tap_concat(Tape& tape, const std::vector<Var>& layer_outputs, const std::vector<std::size_t>& taps);

}  // namespace lasas::encoder
