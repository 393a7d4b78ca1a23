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

#include "lasas/encoder/layers.hpp"

#include <cmath>

#include "lasas/errors.hpp"

namespace lasas::encoder {

Linear::Linear(const std::string& name, std::size_t in, std::size_t out, Rng& rng)
    : weight(name + ".weight", numerics::xavier_uniform(in, out, rng)), bias(name + ".bias", Matrix(1, out)) {}

Var Linear::operator()(Tape& tape, Var x) {
  return tape.add_row(tape.matmul(x, tape.param(weight)), tape.param(bias));
}

LayerNormParams::LayerNormParams(const std::string& name, std::size_t width)
    : gain(name + ".gain", Matrix(1, width, 1.0)), bias(name + ".bias", Matrix(1, width)) {}

Var LayerNormParams::operator()(Tape& tape, Var x) {
  return tape.layer_norm(x, tape.param(gain), tape.param(bias));
}

TransformerBlock::TransformerBlock(const std::string& name, std::size_t d_model, std::size_t num_heads,
                                   std::size_t ff_dim, Rng& rng)
    : heads(num_heads),
      norm1(name + ".norm1", d_model),
      query(name + ".attn.query", numerics::xavier_uniform(d_model, d_model, rng)),
      key(name + ".attn.key", numerics::xavier_uniform(d_model, d_model, rng)),
      value(name + ".attn.value", numerics::xavier_uniform(d_model, d_model, rng)),
      output(name + ".attn.output", numerics::xavier_uniform(d_model, d_model, rng)),
      norm2(name + ".norm2", d_model),
      ff_in(name + ".ff_in", d_model, ff_dim, rng),
      ff_out(name + ".ff_out", ff_dim, d_model, rng) {
  if (num_heads == 0 || d_model % num_heads != 0) {
    throw ConfigError(name + ": d_model " + std::to_string(d_model) + " not divisible by " +
                      std::to_string(num_heads) + " heads");
  }
}

Var TransformerBlock::operator()(Tape& tape, Var x, const FrameMask& mask, std::vector<Matrix>* attention) {
  const std::size_t d_model = tape.value(x).cols();
  const std::size_t head_dim = d_model / heads;
  const Real scale = 1.0 / std::sqrt(static_cast<Real>(head_dim));

  const Var normed = norm1(tape, x);
  const Var q = tape.matmul(normed, tape.param(query));
  const Var k = tape.matmul(normed, tape.param(key));
  const Var v = tape.matmul(normed, tape.param(value));
  std::vector<Var> head_out;
  head_out.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    const Var qh = tape.slice_cols(q, h * head_dim, head_dim);
    const Var kh = tape.slice_cols(k, h * head_dim, head_dim);
    const Var vh = tape.slice_cols(v, h * head_dim, head_dim);
    const Var scores = tape.scale(tape.matmul(qh, tape.transpose(kh)), scale);
    const Var weights = tape.softmax_rows(scores, mask);
    if (attention != nullptr) attention->push_back(tape.value(weights));
    head_out.push_back(tape.matmul(weights, vh));
  }
  const Var attended = tape.matmul(tape.concat_cols(head_out), tape.param(output));
  const Var h = tape.add(x, attended);

  const Var ff = ff_out(tape, tape.relu(ff_in(tape, norm2(tape, h))));
  return tape.add(h, ff);
}

void TransformerBlock::collect(ParamList& out) {
  norm1.collect(out);
  out.push_back(&query);
  out.push_back(&key);
  out.push_back(&value);
  out.push_back(&output);
  norm2.collect(out);
  ff_in.collect(out);
  ff_out.collect(out);
}

Matrix sinusoidal_positions(std::size_t frames, std::size_t d_model) {
  Matrix pe(frames, d_model);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t i = 0; i < d_model; ++i) {
      const Real exponent = static_cast<Real>(2 * (i / 2)) / static_cast<Real>(d_model);
      const Real angle = static_cast<Real>(t) / std::pow(10000.0, exponent);
      pe(t, i) = (i % 2 == 0) ? std::sin(angle) : std::cos(angle);
    }
  }
  return pe;
}

}  // namespace lasas::encoder
