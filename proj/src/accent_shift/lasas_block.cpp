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

#include "lasas/accent_shift/lasas_block.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "lasas/errors.hpp"

namespace lasas::accent_shift {

std::string to_string(SpaceDimMode mode) { return mode == SpaceDimMode::kFull ? "full" : "split"; }

SpaceDimMode space_dim_mode_from_string(const std::string& s) {
  if (s == "full") return SpaceDimMode::kFull;
  if (s == "split") return SpaceDimMode::kSplit;
  throw ConfigError("unknown space_dim_mode '" + s + "' (expected full or split)");
}

void LasasConfig::validate() const {
  if (num_spaces == 0) throw ConfigError("lasas: N must be >= 1");
  if (hidden_dim == 0) throw ConfigError("lasas: C must be >= 1");
  if (text_dim == 0) throw ConfigError("lasas: D_td must be >= 1");
  if (mode == SpaceDimMode::kSplit && hidden_dim % num_spaces != 0) {
    throw ConfigError("lasas: split mode needs N | C (N=" + std::to_string(num_spaces) +
                      ", C=" + std::to_string(hidden_dim) + ")");
  }
}

nlohmann::json LasasConfig::to_json() const {
  return {{"num_spaces", num_spaces}, {"hidden_dim", hidden_dim}, {"text_dim", text_dim}, {"space_dim_mode", to_string(mode)}};
}

LasasConfig LasasConfig::from_json(const nlohmann::json& doc) {
  LasasConfig c;
  if (doc.contains("num_spaces")) c.num_spaces = doc.at("num_spaces").get<std::size_t>();
  if (doc.contains("hidden_dim")) c.hidden_dim = doc.at("hidden_dim").get<std::size_t>();
  if (doc.contains("text_dim")) c.text_dim = doc.at("text_dim").get<std::size_t>();
  if (doc.contains("space_dim_mode")) c.mode = space_dim_mode_from_string(doc.at("space_dim_mode").get<std::string>());
  return c;
}

LasasParams::LasasParams(const LasasConfig& cfg, std::size_t acoustic_dim, std::size_t vocab_size, numerics::Rng& rng)
    : config(cfg) {
  config.validate();
  if (acoustic_dim == 0 || vocab_size == 0) throw ConfigError("lasas: D1 and D2 must be positive");
  const std::size_t width = config.space_width();
  text_maps.reserve(config.num_spaces);
  acoustic_maps.reserve(config.num_spaces);
  for (std::size_t i = 0; i < config.num_spaces; ++i) {
    text_maps.emplace_back("lasas.text_map" + std::to_string(i + 1), numerics::xavier_uniform(vocab_size, width, rng));
    acoustic_maps.emplace_back("lasas.acoustic_map" + std::to_string(i + 1),
                               numerics::xavier_uniform(acoustic_dim, width, rng));
  }
  text_reduction = Param("lasas.text_reduction", numerics::xavier_uniform(vocab_size, config.text_dim, rng));
}

void LasasParams::collect(ParamList& out) {
  for (auto& p : text_maps) out.push_back(&p);
  for (auto& p : acoustic_maps) out.push_back(&p);
  out.push_back(&text_reduction);
}

std::vector<Var> compute_anchors(Tape& tape, Var text, LasasParams& params) {
  const Matrix& x = tape.value(text);
  if (x.cols() != params.vocab_size()) {
    throw DimensionError("compute_anchors: text is " + x.shape_str() + " but W_t expects " +
                         std::to_string(params.vocab_size()) + " columns");
  }
  std::vector<Var> anchors;
  anchors.reserve(params.text_maps.size());
  for (auto& w : params.text_maps) anchors.push_back(tape.matmul(text, tape.param(w)));
  return anchors;
}

ShiftOutput compute_shift(Tape& tape, Var acoustic, Var text, LasasParams& params) {
  const Matrix& xa = tape.value(acoustic);
  const Matrix& xt = tape.value(text);
  if (xa.rows() != xt.rows()) throw DimensionError("compute_shift: acoustic " + xa.shape_str() + " vs text " + xt.shape_str());
  if (xa.cols() != params.acoustic_dim()) {
    throw DimensionError("compute_shift: acoustic is " + xa.shape_str() + " but W_a expects " +
                         std::to_string(params.acoustic_dim()) + " columns");
  }
  ShiftOutput out;
  out.anchors = compute_anchors(tape, text, params);
  const Real d_k = params.config.d_k();
  for (std::size_t i = 0; i < params.acoustic_maps.size(); ++i) {
    out.mapped.push_back(tape.matmul(acoustic, tape.param(params.acoustic_maps[i])));
    out.per_space.push_back(tape.rowwise_scaled_dot(out.mapped.back(), out.anchors[i], d_k));
  }
  out.shift = tape.concat_cols(out.per_space);
  return out;
}

BimodalOutput bimodal(Tape& tape, Var text, Var shift, LasasParams& params) {
  const Matrix& xt = tape.value(text);
  const Matrix& s = tape.value(shift);
  if (xt.rows() != s.rows()) throw DimensionError("bimodal: text " + xt.shape_str() + " vs shift " + s.shape_str());
  BimodalOutput out;
  out.reduced_text = tape.matmul(text, tape.param(params.text_reduction));
  const Var parts[] = {shift, out.reduced_text};
  out.bimodal = tape.concat_cols(parts);
  return out;
}

Matrix shift_matrix(const Matrix& acoustic, const Matrix& text, LasasParams& params) {
  Tape tape;
  return tape.value(compute_shift(tape, tape.constant(acoustic), tape.constant(text), params).shift);
}

std::vector<Matrix> anchor_matrices(const Matrix& text, LasasParams& params) {
  Tape tape;
  std::vector<Matrix> out;
  for (Var v : compute_anchors(tape, tape.constant(text), params)) out.push_back(tape.value(v));
  return out;
}

MeanShiftTable export_mean_shift(const std::vector<ShiftObservation>& observations) {
  MeanShiftTable table;
  for (const auto& obs : observations) {
    if (obs.shift.rows() != obs.frame_ids.size()) {
      throw DimensionError("export_mean_shift: " + std::to_string(obs.frame_ids.size()) + " frame ids vs shift " +
                           obs.shift.shape_str());
    }
    if (table.num_spaces == 0) table.num_spaces = obs.shift.cols();
    if (obs.shift.cols() != table.num_spaces) throw DimensionError("export_mean_shift: inconsistent N");
    for (std::size_t t = 0; t < obs.frame_ids.size(); ++t) {
      const auto sub = obs.frame_ids[t];
      if (sub == tokenizer::kSilenceId) continue;
      auto& acc = table.centroids[{sub, obs.accent}];
      if (acc.empty()) acc.assign(table.num_spaces, 0.0);
      for (std::size_t j = 0; j < table.num_spaces; ++j) acc[j] += obs.shift(t, j);
      ++table.frame_counts[{sub, obs.accent}];
    }
  }
  for (auto& [key, acc] : table.centroids) {
    const auto n = static_cast<Real>(table.frame_counts[key]);
    for (Real& v : acc) v /= n;
  }
  return table;
}

void write_mean_shift_csv(const std::string& path, const MeanShiftTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "subword,accent";
  for (std::size_t j = 0; j < table.num_spaces; ++j) out << ",s" << j + 1;
  out << "\n";
  char buf[40];
  for (const auto& [key, c] : table.centroids) {
    out << key.first << "," << key.second;
    for (Real v : c) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out << buf;
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace lasas::accent_shift
