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

#include "lasas/synthgen/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "lasas/errors.hpp"

namespace lasas::synthgen {

namespace fs = std::filesystem;
using nlohmann::json;
using numerics::Rng;

namespace {

constexpr std::string_view kConsonants = "bdgklmnprst";
constexpr std::string_view kVowels = "aeiou";

// Stream tags keep the derived engines of different world components apart.
enum Stream : std::uint64_t { kLexicon = 1, kBase, kShiftSet, kShifts, kSpeakers, kUtterance };

std::size_t draw_between(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::string make_word(Rng& rng) {
  const std::size_t syllables = draw_between(rng, 1, 3);
  std::string w;
  for (std::size_t s = 0; s < syllables; ++s) {
    w += kConsonants[draw_between(rng, 0, kConsonants.size() - 1)];
    w += kVowels[draw_between(rng, 0, kVowels.size() - 1)];
    if (draw_between(rng, 0, 3) == 0) w += kConsonants[draw_between(rng, 0, kConsonants.size() - 1)];
  }
  return w;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(std::vector<Real>(m.row(r).begin(), m.row(r).end()));
  return rows;
}

Matrix matrix_from_json(const json& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionError("frame row " + std::to_string(r) + " has wrong width");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c].get<Real>();
  }
  return m;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("cannot parse " + path.string() + ": " + e.what());
  }
}

}  // namespace

void CorpusConfig::validate() const {
  if (num_accents < 2) throw ConfigError("corpus: num_accents must be >= 2");
  if (train_speakers == 0 || dev_speakers == 0 || test_speakers == 0 || utterances_per_speaker == 0) {
    throw ConfigError("corpus: every split needs at least one speaker and utterance");
  }
  if (lexicon_size == 0) throw ConfigError("corpus: lexicon_size must be positive");
  if (min_words == 0 || min_words > max_words) throw ConfigError("corpus: bad word count range");
  if (min_subword_frames == 0 || min_subword_frames > max_subword_frames) {
    throw ConfigError("corpus: bad subword duration range");
  }
  if (min_silence_frames == 0 || min_silence_frames > max_silence_frames) {
    throw ConfigError("corpus: bad silence duration range");
  }
  if (feature_dim == 0) throw ConfigError("corpus: feature_dim must be positive");
  if (base_scale < 0 || shift_magnitude < 0 || speaker_offset_scale < 0 || noise_scale < 0) {
    throw ConfigError("corpus: scales must be >= 0");
  }
  if (shifted_fraction < 0 || shifted_fraction > 1) throw ConfigError("corpus: shifted_fraction must be in [0,1]");
}

json CorpusConfig::to_json() const {
  return {{"num_accents", num_accents},
          {"train_speakers", train_speakers},
          {"dev_speakers", dev_speakers},
          {"test_speakers", test_speakers},
          {"utterances_per_speaker", utterances_per_speaker},
          {"lexicon_size", lexicon_size},
          {"num_merges", num_merges},
          {"min_words", min_words},
          {"max_words", max_words},
          {"min_subword_frames", min_subword_frames},
          {"max_subword_frames", max_subword_frames},
          {"min_silence_frames", min_silence_frames},
          {"max_silence_frames", max_silence_frames},
          {"feature_dim", feature_dim},
          {"base_scale", base_scale},
          {"shift_magnitude", shift_magnitude},
          {"shifted_fraction", shifted_fraction},
          {"speaker_offset_scale", speaker_offset_scale},
          {"noise_scale", noise_scale},
          {"seed", seed}};
}

CorpusConfig CorpusConfig::from_json(const json& doc) {
  CorpusConfig c;
  auto get = [&doc](const char* key, auto& field) {
    if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("num_accents", c.num_accents);
  get("train_speakers", c.train_speakers);
  get("dev_speakers", c.dev_speakers);
  get("test_speakers", c.test_speakers);
  get("utterances_per_speaker", c.utterances_per_speaker);
  get("lexicon_size", c.lexicon_size);
  get("num_merges", c.num_merges);
  get("min_words", c.min_words);
  get("max_words", c.max_words);
  get("min_subword_frames", c.min_subword_frames);
  get("max_subword_frames", c.max_subword_frames);
  get("min_silence_frames", c.min_silence_frames);
  get("max_silence_frames", c.max_silence_frames);
  get("feature_dim", c.feature_dim);
  get("base_scale", c.base_scale);
  get("shift_magnitude", c.shift_magnitude);
  get("shifted_fraction", c.shifted_fraction);
  get("speaker_offset_scale", c.speaker_offset_scale);
  get("noise_scale", c.noise_scale);
  get("seed", c.seed);
  return c;
}

std::span<const Real> World::speaker_offset(std::size_t accent, std::size_t speaker) const {
  const std::size_t per = config.speakers_per_accent();
  if (accent >= config.num_accents || speaker >= per) {
    throw ConfigError("speaker_offset: accent/speaker out of range");
  }
  return speaker_offsets.row(accent * per + speaker);
}

World build_world(const CorpusConfig& cfg) {
  cfg.validate();
  World w;
  w.config = cfg;
  const std::size_t dim = cfg.feature_dim;

  // Lexicon with Zipf-like weights; counts double as the BPE training corpus.
  {
    Rng rng(numerics::derive_seed({cfg.seed, kLexicon}));
    std::set<std::string> seen;
    std::size_t attempts = 0;
    while (w.lexicon.size() < cfg.lexicon_size) {
      if (++attempts > 1000 * cfg.lexicon_size) throw ConfigError("corpus: cannot draw enough distinct words");
      std::string word = make_word(rng);
      if (seen.insert(word).second) w.lexicon.push_back(std::move(word));
    }
  }
  tokenizer::WordCounts counts;
  for (std::size_t r = 0; r < w.lexicon.size(); ++r) {
    w.word_weights.push_back(1.0 / static_cast<Real>(r + 1));
    counts[w.lexicon[r]] = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(200.0 / static_cast<Real>(r + 1))));
  }
  w.inventory = tokenizer::bpe_train(counts, cfg.num_merges);
  if (w.inventory.merges().size() < cfg.num_merges) {
    throw ConfigError("corpus: lexicon too small for " + std::to_string(cfg.num_merges) + " merges (got " +
                      std::to_string(w.inventory.merges().size()) + ")");
  }
  std::set<SubwordId> reachable;
  for (const auto& word : w.lexicon) {
    w.lexicon_ids.push_back(w.inventory.encode(word));
    reachable.insert(w.lexicon_ids.back().begin(), w.lexicon_ids.back().end());
  }
  const std::size_t vocab = w.inventory.size();

  {
    Rng rng(numerics::derive_seed({cfg.seed, kBase}));
    w.base_embeddings = numerics::uniform_matrix(vocab, dim, -cfg.base_scale, cfg.base_scale, rng);
  }

  // One shifted set shared by all accents, drawn from subwords that occur in the lexicon.
  {
    Rng rng(numerics::derive_seed({cfg.seed, kShiftSet}));
    std::vector<SubwordId> candidates(reachable.begin(), reachable.end());
    std::shuffle(candidates.begin(), candidates.end(), rng);
    const auto take = static_cast<std::size_t>(std::lround(cfg.shifted_fraction * static_cast<Real>(candidates.size())));
    w.shifted_subwords.insert(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take));
  }

  w.accents.resize(cfg.num_accents);
  for (std::size_t a = 0; a < cfg.num_accents; ++a) {
    w.accents[a].accent_id = a;
    w.accents[a].shift_table = Matrix(vocab, dim);
    w.accents[a].shift_magnitude = cfg.shift_magnitude;
    w.accents[a].shifted_set = w.shifted_subwords;
  }
  {
    Rng rng(numerics::derive_seed({cfg.seed, kShifts}));
    for (SubwordId s : w.shifted_subwords) {
      for (std::size_t a = 0; a < cfg.num_accents; ++a) {
        // Rejection-sample a direction at least magnitude/2 away from the other accents.
        for (int attempt = 0;; ++attempt) {
          std::vector<Real> dir(dim);
          Real norm = 0.0;
          for (Real& v : dir) {
            v = numerics::gaussian(rng, 1.0);
            norm += v * v;
          }
          norm = std::sqrt(norm);
          for (Real& v : dir) v = v / norm * cfg.shift_magnitude;
          bool ok = true;
          for (std::size_t b = 0; b < a && ok; ++b) {
            Real d2 = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
              const Real diff = dir[j] - w.accents[b].shift_table(s, j);
              d2 += diff * diff;
            }
            ok = std::sqrt(d2) >= cfg.shift_magnitude / 2.0;
          }
          if (ok || attempt > 1000) {
            std::copy(dir.begin(), dir.end(), w.accents[a].shift_table.row(s).begin());
            break;
          }
        }
      }
    }
  }

  {
    Rng rng(numerics::derive_seed({cfg.seed, kSpeakers}));
    w.speaker_offsets = numerics::uniform_matrix(cfg.num_accents * cfg.speakers_per_accent(), dim,
                                                 -cfg.speaker_offset_scale, cfg.speaker_offset_scale, rng);
  }
  return w;
}

Matrix render_frames(const World& world, std::size_t accent_id, std::size_t speaker_index,
                     const std::vector<SubwordSegment>& segments, Rng& rng) {
  if (accent_id >= world.accents.size()) throw ConfigError("accent id out of range");
  const auto ids = tokenizer::expand_alignment(segments);
  const std::size_t dim = world.config.feature_dim;
  const auto offset = world.speaker_offset(accent_id, speaker_index);
  const AccentSpec& accent = world.accents[accent_id];
  Matrix frames(ids.size(), dim);
  for (std::size_t t = 0; t < ids.size(); ++t) {
    const SubwordId s = ids[t];
    if (s >= world.vocab_size()) throw ConfigError("subword id out of range");
    const auto base = world.base_embeddings.row(s);
    const auto shift = accent.shift(s);
    auto out = frames.row(t);
    for (std::size_t j = 0; j < dim; ++j) {
      const Real noise = world.config.noise_scale > 0 ? numerics::gaussian(rng, world.config.noise_scale) : 0.0;
      out[j] = base[j] + shift[j] + offset[j] + noise;
    }
  }
  return frames;
}

UtteranceSample sample_utterance(const World& world, std::size_t accent_id, std::size_t speaker_index,
                                 Rng& rng) {
  const CorpusConfig& cfg = world.config;
  if (accent_id >= cfg.num_accents || speaker_index >= cfg.speakers_per_accent()) {
    throw ConfigError("sample_utterance: accent or speaker out of range");
  }
  std::discrete_distribution<std::size_t> pick_word(world.word_weights.begin(), world.word_weights.end());
  const std::size_t num_words = draw_between(rng, cfg.min_words, cfg.max_words);

  UtteranceSample u;
  u.accent_id = accent_id;
  u.speaker_id = speaker_name(accent_id, speaker_index);
  for (std::size_t k = 0; k < num_words; ++k) {
    if (k > 0) {
      u.segments.push_back({tokenizer::kSilenceId, draw_between(rng, cfg.min_silence_frames, cfg.max_silence_frames)});
    }
    for (SubwordId s : world.lexicon_ids[pick_word(rng)]) {
      u.segments.push_back({s, draw_between(rng, cfg.min_subword_frames, cfg.max_subword_frames)});
    }
  }
  u.frames = render_frames(world, accent_id, speaker_index, u.segments, rng);
  return u;
}

std::string speaker_name(std::size_t accent_id, std::size_t speaker_index) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "a%zu-s%02zu", accent_id, speaker_index);
  return buf;
}

Corpus make_corpus(const CorpusConfig& cfg) {
  Corpus c;
  c.world = build_world(cfg);
  const std::size_t ranges[3][2] = {{0, cfg.train_speakers},
                                    {cfg.train_speakers, cfg.train_speakers + cfg.dev_speakers},
                                    {cfg.train_speakers + cfg.dev_speakers, cfg.speakers_per_accent()}};
  Dataset* splits[3] = {&c.train, &c.dev, &c.test};
  for (int split = 0; split < 3; ++split) {
    for (std::size_t a = 0; a < cfg.num_accents; ++a) {
      for (std::size_t s = ranges[split][0]; s < ranges[split][1]; ++s) {
        for (std::size_t k = 0; k < cfg.utterances_per_speaker; ++k) {
          Rng rng(numerics::derive_seed({cfg.seed, kUtterance, a, s, k}));
          UtteranceSample u = sample_utterance(c.world, a, s, rng);
          char buf[32];
          std::snprintf(buf, sizeof buf, "-u%03zu", k);
          u.id = u.speaker_id + buf;
          splits[split]->push_back(std::move(u));
        }
      }
    }
  }
  return c;
}

json utterance_to_json(const UtteranceSample& u) {
  json segs = json::array();
  for (const auto& s : u.segments) segs.push_back({s.subword_id, s.duration});
  return {{"id", u.id},
          {"accent", u.accent_id},
          {"speaker", u.speaker_id},
          {"segments", segs},
          {"frames", matrix_to_json(u.frames)}};
}

UtteranceSample utterance_from_json(const json& doc) {
  UtteranceSample u;
  u.id = doc.at("id").get<std::string>();
  u.accent_id = doc.at("accent").get<std::size_t>();
  u.speaker_id = doc.at("speaker").get<std::string>();
  for (const auto& s : doc.at("segments")) {
    u.segments.push_back({s.at(0).get<SubwordId>(), s.at(1).get<std::size_t>()});
  }
  const auto& frames = doc.at("frames");
  const std::size_t cols = frames.empty() ? 0 : frames.at(0).size();
  u.frames = matrix_from_json(frames, cols);
  std::size_t total = 0;
  for (const auto& s : u.segments) total += s.duration;
  if (total != u.frames.rows()) {
    throw DimensionError("utterance " + u.id + ": segment durations sum to " + std::to_string(total) + " but " +
                         std::to_string(u.frames.rows()) + " frames present");
  }
  return u;
}

void write_jsonl(const fs::path& path, const Dataset& data) {
  std::string text;
  for (const auto& u : data) {
    text += utterance_to_json(u).dump();
    text += '\n';
  }
  write_text(path, text);
}

Dataset read_jsonl(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Dataset data;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      data.push_back(utterance_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return data;
}

json World::to_json() const {
  json accents_json = json::array();
  for (const auto& a : accents) accents_json.push_back(matrix_to_json(a.shift_table));
  return {{"config", config.to_json()},
          {"lexicon", lexicon},
          {"word_weights", word_weights},
          {"inventory", inventory.to_json()},
          {"base_embeddings", matrix_to_json(base_embeddings)},
          {"shifted_subwords", std::vector<SubwordId>(shifted_subwords.begin(), shifted_subwords.end())},
          {"shift_tables", accents_json},
          {"speaker_offsets", matrix_to_json(speaker_offsets)}};
}

World World::from_json(const json& doc) {
  World w;
  w.config = CorpusConfig::from_json(doc.at("config"));
  const std::size_t dim = w.config.feature_dim;
  w.lexicon = doc.at("lexicon").get<std::vector<std::string>>();
  w.word_weights = doc.at("word_weights").get<std::vector<Real>>();
  w.inventory = tokenizer::SubwordInventory::from_json(doc.at("inventory"));
  for (const auto& word : w.lexicon) w.lexicon_ids.push_back(w.inventory.encode(word));
  w.base_embeddings = matrix_from_json(doc.at("base_embeddings"), dim);
  const auto shifted = doc.at("shifted_subwords").get<std::vector<SubwordId>>();
  w.shifted_subwords.insert(shifted.begin(), shifted.end());
  const auto& tables = doc.at("shift_tables");
  for (std::size_t a = 0; a < tables.size(); ++a) {
    AccentSpec spec;
    spec.accent_id = a;
    spec.shift_table = matrix_from_json(tables[a], dim);
    spec.shifted_set = w.shifted_subwords;
    spec.shift_magnitude = w.config.shift_magnitude;
    w.accents.push_back(std::move(spec));
  }
  w.speaker_offsets = matrix_from_json(doc.at("speaker_offsets"), dim);
  return w;
}

Corpus generate_corpus(const CorpusConfig& cfg, const fs::path& out_dir) {
  Corpus c = make_corpus(cfg);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  write_text(out_dir / "inventory.json", c.world.inventory.to_json().dump(2) + "\n");
  write_text(out_dir / "world.json", c.world.to_json().dump() + "\n");
  write_jsonl(out_dir / "train.jsonl", c.train);
  write_jsonl(out_dir / "dev.jsonl", c.dev);
  write_jsonl(out_dir / "test.jsonl", c.test);
  json manifest = {{"config", cfg.to_json()},
                   {"seed", cfg.seed},
                   {"inventory", "inventory.json"},
                   {"world", "world.json"},
                   {"splits", {{"train", "train.jsonl"}, {"dev", "dev.jsonl"}, {"test", "test.jsonl"}}}};
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return c;
}

Corpus load_corpus(const fs::path& path) {
  const fs::path manifest_path = fs::is_directory(path) ? path / "manifest.json" : path;
  const json manifest = read_json_file(manifest_path);
  const fs::path dir = manifest_path.parent_path();
  Corpus c;
  c.world = World::from_json(read_json_file(dir / manifest.at("world").get<std::string>()));
  const auto& splits = manifest.at("splits");
  c.train = read_jsonl(dir / splits.at("train").get<std::string>());
  c.dev = read_jsonl(dir / splits.at("dev").get<std::string>());
  c.test = read_jsonl(dir / splits.at("test").get<std::string>());
  return c;
}

std::vector<SubwordSegment> corrupt_text(const std::vector<SubwordSegment>& segments, Real p,
                                         std::size_t vocab_size, Rng& rng) {
  if (p < 0.0 || p > 1.0) throw ConfigError("corrupt_text: p must be in [0,1]");
  std::vector<SubwordSegment> out = segments;
  if (p == 0.0) return out;
  if (vocab_size < 3) throw ConfigError("corrupt_text: need at least two non-silence subwords");
  std::bernoulli_distribution flip(p);
  // Replacement drawn from the vocab_size - 2 non-silence ids that differ from the original.
  std::uniform_int_distribution<SubwordId> other(1, static_cast<SubwordId>(vocab_size - 2));
  for (auto& seg : out) {
    if (seg.subword_id == tokenizer::kSilenceId) continue;
    if (!flip(rng)) continue;
    SubwordId r = other(rng);
    if (r >= seg.subword_id) ++r;
    seg.subword_id = r;
  }
  return out;
}

}  // namespace lasas::synthgen
