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
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lasas/encoder/layers.hpp"

namespace lasas::arhead {

using encoder::FrameMask;
using encoder::Linear;
using encoder::Matrix;
using encoder::ParamList;
using encoder::Real;
using encoder::Tape;
using encoder::Var;

/// Which representation feeds the AR head.
enum class SystemVariant {
  kAcousticOnly,  // X_a
  kDirectConcat,  // [X_a | X_t W_td]
  kLasas,         // Y_bm
};

std::string to_string(SystemVariant v);
SystemVariant variant_from_string(const std::string& s);

struct HeadConfig {
  std::size_t context_layers = 3;
  std::size_t context_dim = 32;
  std::size_t heads = 4;
  std::size_t ff_dim = 64;
  std::size_t dnn_layers = 3;
  std::size_t num_accents = 4;

  void validate() const;
  /// Widths of the frame-wise DNN: context_dim/2, context_dim/4, …
  std::vector<std::size_t> dnn_widths() const;
  std::size_t pooled_dim() const { return 2 * dnn_widths().back(); }

  nlohmann::json to_json() const;
  static HeadConfig from_json(const nlohmann::json& doc);
};

/// Input projection → context Transformer (with a closing LayerNorm) →
/// frame-wise ReLU DNN with halving widths → mean⊕std pooling over valid frames → linear classifier.
class AccentHead {
 public:
  AccentHead(const HeadConfig& cfg, std::size_t input_dim, encoder::Rng& rng);
  AccentHead(const AccentHead&) = delete;
  AccentHead& operator=(const AccentHead&) = delete;

  /// 1×K logits. Throws when every frame is masked.
  Var forward(Tape& tape, Var inputs, const FrameMask& mask = {});
  /// Same as forward, also exposing the pooled vector.
  Var forward(Tape& tape, Var inputs, const FrameMask& mask, Var* pooled);

  const HeadConfig& config() const { return cfg_; }
  std::size_t input_dim() const { return input_.in_dim(); }
  void collect(ParamList& out);

 private:
  HeadConfig cfg_;
  Linear input_;
  std::vector<encoder::TransformerBlock> context_;
  encoder::LayerNormParams context_norm_;
  std::vector<Linear> dnn_;
  Linear classifier_;
};

/// Mean ⊕ population std (ε = 1e-9 under the root) over valid rows, 1×2d.
Matrix stat_pool(const Matrix& frames, const FrameMask& mask = {});

/// −log softmax(logits)[label].
Real cross_entropy(const Matrix& logits, std::size_t label);

/// Index of the largest logit; first one wins ties.
std::size_t predict(const Matrix& logits);

/// Fraction of positions where predictions equal labels. Empty input → 0.
Real accuracy(const std::vector<std::size_t>& predictions, const std::vector<std::size_t>& labels);

}  // namespace lasas::arhead
