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

#include "lasas/numerics/param.hpp"
#include "lasas/numerics/random.hpp"
#include "lasas/numerics/tape.hpp"

namespace lasas::encoder {

using numerics::FrameMask;
using numerics::Matrix;
using numerics::Param;
using numerics::ParamList;
using numerics::Real;
using numerics::Rng;
using numerics::Tape;
using numerics::Var;

/// y = x W + b. W is Xavier-uniform, b starts at zero.
struct Linear {
  Linear() = default;
  Linear(const std::string& name, std::size_t in, std::size_t out, Rng& rng);

  Var operator()(Tape& tape, Var x);
  void collect(ParamList& out) { out.push_back(&weight); out.push_back(&bias); }
  std::size_t in_dim() const { return weight.value.rows(); }
  std::size_t out_dim() const { return weight.value.cols(); }

  Param weight;
  Param bias;
};

struct LayerNormParams {
  LayerNormParams() = default;
  LayerNormParams(const std::string& name, std::size_t width);

  Var operator()(Tape& tape, Var x);
  void collect(ParamList& out) { out.push_back(&gain); out.push_back(&bias); }

  Param gain;
  Param bias;
};

/// Pre-norm Transformer block:
///   h = x + MHA(LN1(x));  out = h + W2 relu(W1 LN2(h) + b1) + b2
struct TransformerBlock {
  TransformerBlock() = default;
  TransformerBlock(const std::string& name, std::size_t d_model, std::size_t heads, std::size_t ff_dim, Rng& rng);

  /// `mask` flags valid rows; padded rows are excluded as attention keys.
  /// When `attention` is non-null, each head's weight matrix is appended.
  Var operator()(Tape& tape, Var x, const FrameMask& mask = {}, std::vector<Matrix>* attention = nullptr);
  void collect(ParamList& out);

  std::size_t heads = 1;
  LayerNormParams norm1;
  Param query;
  Param key;
  Param value;
  Param output;
  LayerNormParams norm2;
  Linear ff_in;
  Linear ff_out;
};

/// Standard sin/cos position table, T×d.
Matrix sinusoidal_positions(std::size_t frames, std::size_t d_model);

}  // namespace lasas::encoder
