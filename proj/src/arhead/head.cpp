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

#include "lasas/arhead/head.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "lasas/errors.hpp"

namespace lasas::arhead {

std::string to_string(SystemVariant v) {
  switch (v) {
    case SystemVariant::kAcousticOnly: return "acoustic_only";
    case SystemVariant::kDirectConcat: return "direct_concat";
    case SystemVariant::kLasas: return "lasas";
  }
  return "unknown";
}

SystemVariant variant_from_string(const std::string& s) {
  if (s == "acoustic_only") return SystemVariant::kAcousticOnly;
  if (s == "direct_concat") return SystemVariant::kDirectConcat;
  if (s == "lasas") return SystemVariant::kLasas;
  throw ConfigError("unknown system variant '" + s + "' (expected acoustic_only, direct_concat or lasas)");
}

void HeadConfig::validate() const {
  if (context_dim == 0 || heads == 0 || context_dim % heads != 0) {
    throw ConfigError("head: context_dim must be a positive multiple of heads");
  }
  if (ff_dim == 0) throw ConfigError("head: ff_dim must be positive");
  if (dnn_layers == 0) throw ConfigError("head: need at least one DNN layer");
  if (dnn_layers >= 8 * sizeof(std::size_t) || context_dim % (std::size_t{1} << dnn_layers) != 0) {
    throw ConfigError("head: context_dim " + std::to_string(context_dim) + " not divisible by 2^" +
                      std::to_string(dnn_layers));
  }
  if (num_accents < 2) throw ConfigError("head: need at least two accents");
}

std::vector<std::size_t> HeadConfig::dnn_widths() const {
  std::vector<std::size_t> w;
  std::size_t width = context_dim;
  for (std::size_t i = 0; i < dnn_layers; ++i) w.push_back(width /= 2);
  return w;
}

nlohmann::json HeadConfig::to_json() const {
  return {{"context_layers", context_layers}, {"context_dim", context_dim}, {"heads", heads},
          {"ff_dim", ff_dim},                 {"dnn_layers", dnn_layers},   {"num_accents", num_accents}};
}

HeadConfig HeadConfig::from_json(const nlohmann::json& doc) {
  HeadConfig c;
  if (doc.contains("context_layers")) c.context_layers = doc.at("context_layers").get<std::size_t>();
  if (doc.contains("context_dim")) c.context_dim = doc.at("context_dim").get<std::size_t>();
  if (doc.contains("heads")) c.heads = doc.at("heads").get<std::size_t>();
  if (doc.contains("ff_dim")) c.ff_dim = doc.at("ff_dim").get<std::size_t>();
  if (doc.contains("dnn_layers")) c.dnn_layers = doc.at("dnn_layers").get<std::size_t>();
  if (doc.contains("num_accents")) c.num_accents = doc.at("num_accents").get<std::size_t>();
  return c;
}

AccentHead::AccentHead(const HeadConfig& cfg, std::size_t input_dim, encoder::Rng& rng) : cfg_(cfg) {
  cfg_.validate();
  if (input_dim == 0) throw ConfigError("head: input_dim must be positive");
  input_ = Linear("head.input", input_dim, cfg_.context_dim, rng);
  context_.reserve(cfg_.context_layers);
  for (std::size_t l = 0; l < cfg_.context_layers; ++l) {
    context_.emplace_back("head.context" + std::to_string(l + 1), cfg_.context_dim, cfg_.heads, cfg_.ff_dim, rng);
  }
  context_norm_ = encoder::LayerNormParams("head.context_norm", cfg_.context_dim);
  std::size_t width = cfg_.context_dim;
  dnn_.reserve(cfg_.dnn_layers);
  for (std::size_t w : cfg_.dnn_widths()) {
    dnn_.emplace_back("head.dnn" + std::to_string(dnn_.size() + 1), width, w, rng);
    width = w;
  }
  classifier_ = Linear("head.classifier", 2 * width, cfg_.num_accents, rng);
}

Var AccentHead::forward(Tape& tape, Var inputs, const FrameMask& mask) { return forward(tape, inputs, mask, nullptr); }

Var AccentHead::forward(Tape& tape, Var inputs, const FrameMask& mask, Var* pooled) {
  const Matrix& x = tape.value(inputs);
  if (x.cols() != input_dim()) {
    throw DimensionError("head: expected input width " + std::to_string(input_dim()) + ", got " + x.shape_str());
  }
  if (!mask.empty() && std::none_of(mask.begin(), mask.end(), [](auto m) { return m != 0; })) {
    throw DimensionError("head: every frame is masked");
  }
  Var h = input_(tape, inputs);
  for (auto& block : context_) h = block(tape, h, mask);
  h = context_norm_(tape, h);
  for (std::size_t i = 0; i < dnn_.size(); ++i) {
    h = dnn_[i](tape, h);
    // The last layer stays linear: a dead unit there would freeze the pooled statistics.
    if (i + 1 < dnn_.size()) h = tape.relu(h);
  }
  const Var stats = tape.stat_pool(h, mask);
  if (pooled != nullptr) *pooled = stats;
  return classifier_(tape, stats);
}

void AccentHead::collect(ParamList& out) {
  input_.collect(out);
  for (auto& block : context_) block.collect(out);
  context_norm_.collect(out);
  for (auto& layer : dnn_) layer.collect(out);
  classifier_.collect(out);
}

Matrix stat_pool(const Matrix& frames, const FrameMask& mask) {
  Tape tape;
  return tape.value(tape.stat_pool(tape.constant(frames), mask));
}

Real cross_entropy(const Matrix& logits, std::size_t label) {
  Tape tape;
  return tape.scalar(tape.cross_entropy(tape.constant(logits), label));
}

std::size_t predict(const Matrix& logits) {
  if (logits.empty()) throw DimensionError("predict: empty logits");
  const auto v = logits.values();
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

Real accuracy(const std::vector<std::size_t>& predictions, const std::vector<std::size_t>& labels) {
  if (predictions.size() != labels.size()) throw DimensionError("accuracy: prediction/label count mismatch");
  if (predictions.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += predictions[i] == labels[i] ? 1 : 0;
  return static_cast<Real>(hits) / static_cast<Real>(labels.size());
}

}  // namespace lasas::arhead
