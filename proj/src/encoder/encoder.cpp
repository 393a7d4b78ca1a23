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

#include "lasas/encoder/encoder.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "lasas/errors.hpp"

namespace lasas::encoder {

void EncoderConfig::validate() const {
  if (num_layers == 0) throw ConfigError("encoder: num_layers must be positive");
  if (d_model == 0 || heads == 0 || d_model % heads != 0) {
    throw ConfigError("encoder: d_model must be a positive multiple of heads");
  }
  if (ff_dim == 0) throw ConfigError("encoder: ff_dim must be positive");
  if (taps.empty()) throw ConfigError("encoder: tap set is empty");
  std::set<std::size_t> seen;
  for (std::size_t t : taps) {
    if (t == 0 || t > num_layers) {
      throw ConfigError("encoder: tap " + std::to_string(t) + " outside 1.." + std::to_string(num_layers));
    }
    if (!seen.insert(t).second) throw ConfigError("encoder: duplicate tap " + std::to_string(t));
  }
}

nlohmann::json EncoderConfig::to_json() const {
  return {{"num_layers", num_layers}, {"d_model", d_model}, {"heads", heads}, {"ff_dim", ff_dim}, {"taps", taps}};
}

EncoderConfig EncoderConfig::from_json(const nlohmann::json& doc) {
  EncoderConfig c;
  if (doc.contains("num_layers")) c.num_layers = doc.at("num_layers").get<std::size_t>();
  if (doc.contains("d_model")) c.d_model = doc.at("d_model").get<std::size_t>();
  if (doc.contains("heads")) c.heads = doc.at("heads").get<std::size_t>();
  if (doc.contains("ff_dim")) c.ff_dim = doc.at("ff_dim").get<std::size_t>();
  if (doc.contains("taps")) c.taps = doc.at("taps").get<std::vector<std::size_t>>();
  return c;
}

AcousticEncoder::AcousticEncoder(const EncoderConfig& cfg, std::size_t feature_dim, Rng& rng) : cfg_(cfg) {
  cfg_.validate();
  std::sort(cfg_.taps.begin(), cfg_.taps.end());
  if (feature_dim == 0) throw ConfigError("encoder: feature_dim must be positive");
  input_ = Linear("encoder.input", feature_dim, cfg_.d_model, rng);
  layers_.reserve(cfg_.num_layers);
  for (std::size_t l = 0; l < cfg_.num_layers; ++l) {
    layers_.emplace_back("encoder.layer" + std::to_string(l + 1), cfg_.d_model, cfg_.heads, cfg_.ff_dim, rng);
  }
}

std::vector<Var> AcousticEncoder::encode(Tape& tape, const Matrix& frames, const FrameMask& mask,
                                         std::vector<Matrix>* attention) {
  if (frames.rows() == 0) throw DimensionError("encode: utterance has no frames");
  if (frames.cols() != feature_dim()) {
    throw DimensionError("encode: expected " + std::to_string(feature_dim()) + " features, got " + frames.shape_str());
  }
  Var x = tape.add(input_(tape, tape.constant(frames)),
                   tape.constant(sinusoidal_positions(frames.rows(), cfg_.d_model)));
  std::vector<Var> outputs;
  outputs.reserve(layers_.size());
  for (auto& layer : layers_) {
    x = layer(tape, x, mask, attention);
    outputs.push_back(x);
  }
  return outputs;
}

void AcousticEncoder::collect(ParamList& out) {
  input_.collect(out);
  for (auto& layer : layers_) layer.collect(out);
}

Var tap_concat(Tape& tape, const std::vector<Var>& layer_outputs, const std::vector<std::size_t>& taps) {
  if (taps.empty()) throw ConfigError("tap_concat: no taps");
  std::vector<std::size_t> ordered = taps;
  std::sort(ordered.begin(), ordered.end());
  std::vector<Var> parts;
  for (std::size_t t : ordered) {
    if (t == 0 || t > layer_outputs.size()) {
      throw ConfigError("tap_concat: tap " + std::to_string(t) + " outside 1.." + std::to_string(layer_outputs.size()));
    }
    parts.push_back(layer_outputs[t - 1]);
  }
  return tape.concat_cols(parts);
}

}  // namespace lasas::encoder
