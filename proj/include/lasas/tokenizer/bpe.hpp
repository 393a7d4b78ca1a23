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
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace lasas::tokenizer {

using SubwordId = std::uint32_t;

/// Reserved id for silence / padding frames.
inline constexpr SubwordId kSilenceId = 0;

using SymbolPair = std::pair<std::string, std::string>;
using WordCounts = std::map<std::string, std::size_t>;

/// BPE merge list plus a dense symbol -> id table. Id 0 is silence and has no
/// symbol; characters get ids 1.. in byte order, merged symbols follow in
/// merge order.
class SubwordInventory {
 public:
  SubwordInventory() = default;
  SubwordInventory(std::vector<SymbolPair> merges, std::map<std::string, SubwordId> ids);

  const std::vector<SymbolPair>& merges() const { return merges_; }
  const std::map<std::string, SubwordId>& ids() const { return ids_; }
  /// D2: number of ids including silence.
  std::size_t size() const { return symbols_.size(); }

  bool contains(std::string_view symbol) const;
  SubwordId id(std::string_view symbol) const;
  /// Symbol for an id; the empty string for silence.
  const std::string& symbol(SubwordId id) const;

  /// Applies the merges in learned order. Throws EncodingError on a
  /// character outside the alphabet.
  std::vector<SubwordId> encode(std::string_view word) const;
  std::string decode(const std::vector<SubwordId>& ids) const;

  nlohmann::json to_json() const;
  static SubwordInventory from_json(const nlohmann::json& doc);

 private:
  std::vector<SymbolPair> merges_;
  std::map<std::string, SubwordId> ids_;
  std::vector<std::string> symbols_;  // indexed by id
};

struct BpeOptions {
  std::size_t num_merges = 0;
  /// A pair seen fewer times than this (frequency-weighted) is never merged.
  std::size_t min_pair_frequency = 2;
};

/// Greedy most-frequent-pair BPE. Ties go to the lexicographically smallest
/// (left, right) pair. Throws ConfigError on an empty corpus.
SubwordInventory bpe_train(const WordCounts& corpus, const BpeOptions& opts);

inline SubwordInventory bpe_train(const WordCounts& corpus, std::size_t num_merges) {
  return bpe_train(corpus, BpeOptions{num_merges});
}

inline std::vector<SubwordId> bpe_encode(std::string_view word, const SubwordInventory& inv) {
  return inv.encode(word);
}

}  // namespace lasas::tokenizer
