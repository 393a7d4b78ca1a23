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

#include "lasas/harness/model.hpp"

#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "lasas/errors.hpp"
#include "lasas/tokenizer/alignment.hpp"

namespace lasas::harness {

namespace {
constexpr std::uint64_t kInitStream = 101;
}

AccentModel::AccentModel(const ExperimentConfig& cfg, std::size_t feature_dim, std::size_t vocab_size,
                         std::size_t num_accents)
    : variant_(cfg.variant), vocab_size_(vocab_size) {
  cfg.validate();
  numerics::Rng rng(numerics::derive_seed({cfg.seed, kInitStream}));
  encoder_ = std::make_unique<encoder::AcousticEncoder>(cfg.encoder, feature_dim, rng);
  taps_ = encoder_->config().taps;
  const std::size_t d1 = cfg.encoder.embedding_dim();
  std::size_t head_in = d1;
  switch (variant_) {
    case arhead::SystemVariant::kAcousticOnly:
      break;
    case arhead::SystemVariant::kDirectConcat:
      dc_reduction_ = numerics::Param("dc.text_reduction", numerics::xavier_uniform(vocab_size, cfg.lasas.text_dim, rng));
      head_in = d1 + cfg.lasas.text_dim;
      break;
    case arhead::SystemVariant::kLasas:
      lasas_ = std::make_unique<accent_shift::LasasParams>(cfg.lasas, d1, vocab_size, rng);
      head_in = cfg.lasas.bimodal_dim();
      break;
  }
  arhead::HeadConfig hc = cfg.head;
  hc.num_accents = num_accents;
  head_ = std::make_unique<arhead::AccentHead>(hc, head_in, rng);

  encoder_->collect(params_);
  if (lasas_) lasas_->collect(params_);
  if (variant_ == arhead::SystemVariant::kDirectConcat) params_.push_back(&dc_reduction_);
  head_->collect(params_);
}

Var AccentModel::acoustic_embedding(Tape& tape, const Matrix& frames) {
  return encoder::tap_concat(tape, encoder_->encode(tape, frames), taps_);
}

Var AccentModel::forward(Tape& tape, const Matrix& frames, const std::vector<SubwordId>& text_ids) {
  if (text_ids.size() != frames.rows()) {
    throw DimensionError("model: " + std::to_string(text_ids.size()) + " subword ids for " +
                         std::to_string(frames.rows()) + " frames");
  }
  const Var xa = acoustic_embedding(tape, frames);
  Var input = xa;
  if (variant_ == arhead::SystemVariant::kDirectConcat) {
    const Var xt = tape.constant(tokenizer::one_hot(text_ids, vocab_size_));
    const Var parts[] = {xa, tape.matmul(xt, tape.param(dc_reduction_))};
    input = tape.concat_cols(parts);
  } else if (variant_ == arhead::SystemVariant::kLasas) {
    const Var xt = tape.constant(tokenizer::one_hot(text_ids, vocab_size_));
    const auto sh = accent_shift::compute_shift(tape, xa, xt, *lasas_);
    input = accent_shift::bimodal(tape, xt, sh.shift, *lasas_).bimodal;
  }
  return head_->forward(tape, input);
}

Matrix AccentModel::shift(const Matrix& frames, const std::vector<SubwordId>& text_ids) {
  if (!lasas_) throw ConfigError("model: accent shift is only defined for the lasas variant");
  Tape tape;
  const Var xa = acoustic_embedding(tape, frames);
  const Var xt = tape.constant(tokenizer::one_hot(text_ids, vocab_size_));
  return tape.value(accent_shift::compute_shift(tape, xa, xt, *lasas_).shift);
}

nlohmann::json checkpoint_to_json(const ParamList& params) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto* p : params) {
    list.push_back({{"name", p->name}, {"rows", p->value.rows()}, {"cols", p->value.cols()},
                    {"data", std::vector<double>(p->value.values().begin(), p->value.values().end())}});
  }
  return {{"format", "lasas-checkpoint"}, {"version", kCheckpointVersion}, {"params", list}};
}

void load_checkpoint(const nlohmann::json& doc, const ParamList& params) {
  if (doc.value("format", "") != "lasas-checkpoint") throw IoError("checkpoint: unrecognized format");
  if (doc.value("version", 0) != kCheckpointVersion) {
    throw IoError("checkpoint: unsupported version " + doc.value("version", nlohmann::json(0)).dump());
  }
  std::map<std::string, const nlohmann::json*> by_name;
  for (const auto& e : doc.at("params")) by_name[e.at("name").get<std::string>()] = &e;
  for (auto* p : params) {
    const auto it = by_name.find(p->name);
    if (it == by_name.end()) throw IoError("checkpoint: missing parameter " + p->name);
    const auto& e = *it->second;
    const auto rows = e.at("rows").get<std::size_t>(), cols = e.at("cols").get<std::size_t>();
    if (rows != p->value.rows() || cols != p->value.cols()) {
      throw IoError("checkpoint: " + p->name + " is " + std::to_string(rows) + "x" + std::to_string(cols) +
                    ", model expects " + p->value.shape_str());
    }
    p->value = Matrix(rows, cols, e.at("data").get<std::vector<double>>());
  }
}

void write_checkpoint(const std::string& path, const ParamList& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << checkpoint_to_json(params).dump() << "\n";
  if (!out) throw IoError("write failed: " + path);
}

void read_checkpoint(const std::string& path, const ParamList& params) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("checkpoint " + path + ": " + e.what());
  }
  load_checkpoint(doc, params);
}

}  // namespace lasas::harness
