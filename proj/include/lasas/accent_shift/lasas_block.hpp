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
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lasas/numerics/param.hpp"
#include "lasas/numerics/random.hpp"
#include "lasas/numerics/tape.hpp"
#include "lasas/tokenizer/bpe.hpp"

namespace lasas::accent_shift {

using numerics::Matrix;
using numerics::Param;
using numerics::ParamList;
using numerics::Real;
using numerics::Tape;
using numerics::Var;

/// How wide each mapping space is.
///   kFull:  every space has width C, similarities scaled by sqrt(C/N).
///   kSplit: every space has width C/N (multi-head style), same scale.
enum class SpaceDimMode { kFull, kSplit };

std::string to_string(SpaceDimMode mode);
SpaceDimMode space_dim_mode_from_string(const std::string& s);

struct LasasConfig {
  std::size_t num_spaces = 8;   // N
  std::size_t hidden_dim = 64;  // C
  std::size_t text_dim = 8;     // D_td
  SpaceDimMode mode = SpaceDimMode::kFull;

  void validate() const;
  Real d_k() const { return static_cast<Real>(hidden_dim) / static_cast<Real>(num_spaces); }
  /// Per-space mapping width: C (full) or C/N (split).
  std::size_t space_width() const { return mode == SpaceDimMode::kFull ? hidden_dim : hidden_dim / num_spaces; }
  /// Width of the bimodal representation, N + D_td.
  std::size_t bimodal_dim() const { return num_spaces + text_dim; }

  nlohmann::json to_json() const;
  static LasasConfig from_json(const nlohmann::json& doc);
};

/// Trainable matrices of the block: N text maps (D2×Cs), N acoustic maps
/// (D1×Cs) and the text reduction matrix (D2×D_td).
struct LasasParams {
  LasasParams(const LasasConfig& cfg, std::size_t acoustic_dim, std::size_t vocab_size, numerics::Rng& rng);
  LasasParams(const LasasParams&) = delete;
  LasasParams& operator=(const LasasParams&) = delete;

  void collect(ParamList& out);
  std::size_t acoustic_dim() const { return acoustic_maps.front().value.rows(); }
  std::size_t vocab_size() const { return text_maps.front().value.rows(); }

  LasasConfig config;
  std::vector<Param> text_maps;
  std::vector<Param> acoustic_maps;
  Param text_reduction;
};

struct ShiftOutput {
  std::vector<Var> anchors;  // V_t^i, T×Cs each
  std::vector<Var> mapped;   // V_a^i, T×Cs each
  std::vector<Var> per_space;  // S^i, T×1 each
  Var shift;                 // S, T×N
};

struct BimodalOutput {
  Var reduced_text;  // V_td, T×D_td
  Var bimodal;       // Y_bm = [S | V_td], T×(N+D_td)
};

/// V_t^i = X_t · W_t^i for every space.
std::vector<Var> compute_anchors(Tape& tape, Var text, LasasParams& params);

/// V_a^i = X_a · W_a^i, S^i = <V_a^i[t], V_t^i[t]> / sqrt(C/N), S = [S^1 … S^N].
ShiftOutput compute_shift(Tape& tape, Var acoustic, Var text, LasasParams& params);

/// V_td = X_t · W_td and Y_bm = [S | V_td].
BimodalOutput bimodal(Tape& tape, Var text, Var shift, LasasParams& params);

/// Non-recording convenience wrappers.
Matrix shift_matrix(const Matrix& acoustic, const Matrix& text, LasasParams& params);
std::vector<Matrix> anchor_matrices(const Matrix& text, LasasParams& params);

/// Mean frame-level shift per (subword, accent), silence excluded.
struct MeanShiftTable {
  std::size_t num_spaces = 0;
  /// (subword, accent) -> mean S over every frame of that subword in that accent.
  std::map<std::pair<tokenizer::SubwordId, std::size_t>, std::vector<Real>> centroids;
  std::map<std::pair<tokenizer::SubwordId, std::size_t>, std::size_t> frame_counts;
};

/// One utterance worth of input to export_mean_shift: its frame ids, its
/// accent and its T×N shift matrix.
struct ShiftObservation {
  std::vector<tokenizer::SubwordId> frame_ids;
  std::size_t accent = 0;
  Matrix shift;
};

/// Accumulates centroids over a stream of observations. Pairs that never
/// occur are absent from the table.
MeanShiftTable export_mean_shift(const std::vector<ShiftObservation>& observations);

/// Writes `subword,accent,s1,…,sN`, one row per table entry.
void write_mean_shift_csv(const std::string& path, const MeanShiftTable& table);

}  // namespace lasas::accent_shift
