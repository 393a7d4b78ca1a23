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
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lasas/numerics/matrix.hpp"
#include "lasas/numerics/random.hpp"
#include "lasas/tokenizer/alignment.hpp"
#include "lasas/tokenizer/bpe.hpp"

namespace lasas::synthgen {

using numerics::Matrix;
using numerics::Real;
using tokenizer::SubwordId;
using tokenizer::SubwordSegment;

struct CorpusConfig {
  std::size_t num_accents = 4;
  std::size_t train_speakers = 10;  // per accent
  std::size_t dev_speakers = 2;
  std::size_t test_speakers = 2;
  std::size_t utterances_per_speaker = 25;

  std::size_t lexicon_size = 60;
  std::size_t num_merges = 25;
  std::size_t min_words = 3;  // per utterance
  std::size_t max_words = 5;
  std::size_t min_subword_frames = 2;
  std::size_t max_subword_frames = 6;
  std::size_t min_silence_frames = 1;
  std::size_t max_silence_frames = 3;

  std::size_t feature_dim = 16;
  Real base_scale = 1.0;
  Real shift_magnitude = 2.0;
  Real shifted_fraction = 0.5;
  Real speaker_offset_scale = 0.5;
  Real noise_scale = 0.3;

  std::uint64_t seed = 1;

  std::size_t speakers_per_accent() const { return train_speakers + dev_speakers + test_speakers; }
  /// Throws ConfigError on an invalid combination.
  void validate() const;

  nlohmann::json to_json() const;
  static CorpusConfig from_json(const nlohmann::json& doc);
};

/// Per-accent shift vectors. Subwords outside `shifted_set` have an exact
/// zero row in `shift_table`.
struct AccentSpec {
  std::size_t accent_id = 0;
  Matrix shift_table;  // vocab × feature_dim
  std::set<SubwordId> shifted_set;
  Real shift_magnitude = 0.0;

  std::span<const Real> shift(SubwordId id) const { return shift_table.row(id); }
};

/// Everything needed to sample utterances: lexicon, inventory, base
/// pronunciations, accent shifts and speaker offsets.
struct World {
  CorpusConfig config;
  std::vector<std::string> lexicon;
  std::vector<Real> word_weights;
  std::vector<std::vector<SubwordId>> lexicon_ids;
  tokenizer::SubwordInventory inventory;
  Matrix base_embeddings;   // vocab × feature_dim; row 0 is the silence embedding
  std::vector<AccentSpec> accents;
  std::set<SubwordId> shifted_subwords;
  Matrix speaker_offsets;   // (accent * speakers_per_accent + speaker) × feature_dim

  std::size_t vocab_size() const { return inventory.size(); }
  std::span<const Real> speaker_offset(std::size_t accent, std::size_t speaker) const;

  nlohmann::json to_json() const;
  static World from_json(const nlohmann::json& doc);
};

struct UtteranceSample {
  std::string id;
  std::size_t accent_id = 0;
  std::string speaker_id;
  std::vector<SubwordSegment> segments;
  Matrix frames;  // T × feature_dim

  std::size_t num_frames() const { return frames.rows(); }
  std::vector<SubwordId> frame_ids() const { return tokenizer::expand_alignment(segments); }
};

using Dataset = std::vector<UtteranceSample>;

struct Corpus {
  World world;
  Dataset train;
  Dataset dev;
  Dataset test;
};

World build_world(const CorpusConfig& cfg);

/// Frames follow base + accent shift + speaker offset + N(0, noise) per frame;
/// silence frames between words carry no accent shift.
UtteranceSample sample_utterance(const World& world, std::size_t accent_id, std::size_t speaker_index,
                                 numerics::Rng& rng);

/// Frames for a fixed segment list (used by sample_utterance and tests).
Matrix render_frames(const World& world, std::size_t accent_id, std::size_t speaker_index,
                     const std::vector<SubwordSegment>& segments, numerics::Rng& rng);

std::string speaker_name(std::size_t accent_id, std::size_t speaker_index);

/// Speaker-disjoint, accent-balanced splits. Each utterance uses its own
/// engine seeded by derive_seed(seed, accent, speaker, utterance).
Corpus make_corpus(const CorpusConfig& cfg);

/// make_corpus plus files under out_dir: manifest.json, inventory.json,
/// world.json, train.jsonl, dev.jsonl, test.jsonl.
Corpus generate_corpus(const CorpusConfig& cfg, const std::filesystem::path& out_dir);

/// Loads what generate_corpus wrote, given the manifest path or its directory.
Corpus load_corpus(const std::filesystem::path& path);

/// Each non-silence subword id is replaced, with probability p, by a uniformly
/// drawn different non-silence id. Durations are untouched.
std::vector<SubwordSegment> corrupt_text(const std::vector<SubwordSegment>& segments, Real p,
                                         std::size_t vocab_size, numerics::Rng& rng);

void write_jsonl(const std::filesystem::path& path, const Dataset& data);
Dataset read_jsonl(const std::filesystem::path& path);

nlohmann::json utterance_to_json(const UtteranceSample& u);
UtteranceSample utterance_from_json(const nlohmann::json& doc);

}  // namespace lasas::synthgen
