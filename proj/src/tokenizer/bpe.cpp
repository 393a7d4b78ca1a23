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

#include "lasas/tokenizer/bpe.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "lasas/errors.hpp"

namespace lasas::tokenizer {

namespace {

using Symbols = std::vector<std::string>;

// Merges every non-overlapping occurrence of (left, right), scanning left to right.
void apply_merge(Symbols& word, const SymbolPair& pair) {
  if (word.size() < 2) return;
  Symbols out;
  out.reserve(word.size());
  for (std::size_t i = 0; i < word.size();) {
    if (i + 1 < word.size() && word[i] == pair.first && word[i + 1] == pair.second) {
      out.push_back(pair.first + pair.second);
      i += 2;
    } else {
      out.push_back(word[i]);
      ++i;
    }
  }
  word = std::move(out);
}

Symbols split_chars(std::string_view word) {
  Symbols s;
  s.reserve(word.size());
  for (char c : word) s.emplace_back(1, c);
  return s;
}

}  // namespace

SubwordInventory::SubwordInventory(std::vector<SymbolPair> merges,
                                   std::map<std::string, SubwordId> ids)
    : merges_(std::move(merges)), ids_(std::move(ids)) {
  symbols_.assign(ids_.size() + 1, std::string());
  for (const auto& [sym, id] : ids_) {
    if (id == kSilenceId || id >= symbols_.size() || !symbols_[id].empty() || sym.empty()) {
      throw ConfigError("SubwordInventory: ids must be dense 1..n with unique non-empty symbols");
    }
    symbols_[id] = sym;
  }
  for (const auto& [l, r] : merges_) {
    if (!contains(l) || !contains(r) || !contains(l + r)) {
      throw ConfigError("SubwordInventory: merge (" + l + ", " + r + ") references unknown symbols");
    }
  }
}

bool SubwordInventory::contains(std::string_view symbol) const {
  return ids_.find(std::string(symbol)) != ids_.end();
}

SubwordId SubwordInventory::id(std::string_view symbol) const {
  auto it = ids_.find(std::string(symbol));
  if (it == ids_.end()) throw EncodingError("unknown subword symbol '" + std::string(symbol) + "'");
  return it->second;
}

const std::string& SubwordInventory::symbol(SubwordId id) const {
  if (id >= symbols_.size()) throw EncodingError("subword id " + std::to_string(id) + " out of range");
  return symbols_[id];
}

std::vector<SubwordId> SubwordInventory::encode(std::string_view word) const {
  for (char c : word) {
    if (!contains(std::string(1, c))) {
      throw EncodingError(std::string("unknown character '") + c + "' in word '" + std::string(word) + "'");
    }
  }
  Symbols symbols = split_chars(word);
  for (const SymbolPair& m : merges_) apply_merge(symbols, m);
  std::vector<SubwordId> out;
  out.reserve(symbols.size());
  for (const auto& s : symbols) out.push_back(id(s));
  return out;
}

std::string SubwordInventory::decode(const std::vector<SubwordId>& ids) const {
  std::string out;
  for (SubwordId i : ids) out += symbol(i);
  return out;
}

nlohmann::json SubwordInventory::to_json() const {
  nlohmann::json merges = nlohmann::json::array();
  for (const auto& [l, r] : merges_) merges.push_back({l, r});
  nlohmann::json ids = nlohmann::json::object();
  for (const auto& [sym, id] : ids_) ids[sym] = id;
  return {{"merges", merges}, {"ids", ids}};
}

SubwordInventory SubwordInventory::from_json(const nlohmann::json& doc) {
  std::vector<SymbolPair> merges;
  for (const auto& m : doc.at("merges")) {
    merges.emplace_back(m.at(0).get<std::string>(), m.at(1).get<std::string>());
  }
  std::map<std::string, SubwordId> ids;
  for (const auto& [sym, id] : doc.at("ids").items()) ids[sym] = id.get<SubwordId>();
  return SubwordInventory(std::move(merges), std::move(ids));
}

SubwordInventory bpe_train(const WordCounts& corpus, const BpeOptions& opts) {
  if (corpus.empty()) throw ConfigError("bpe_train: empty corpus");

  std::set<std::string> alphabet;
  std::vector<std::pair<Symbols, std::size_t>> words;
  for (const auto& [word, freq] : corpus) {
    for (char c : word) alphabet.emplace(1, c);
    words.emplace_back(split_chars(word), freq);
  }

  std::map<std::string, SubwordId> ids;
  for (const auto& sym : alphabet) ids.emplace(sym, static_cast<SubwordId>(ids.size() + 1));

  std::vector<SymbolPair> merges;
  for (std::size_t step = 0; step < opts.num_merges; ++step) {
    // std::map iteration is ordered, so the first maximum is the lexicographic tie-break.
    std::map<SymbolPair, std::size_t> counts;
    for (const auto& [symbols, freq] : words) {
      for (std::size_t i = 0; i + 1 < symbols.size(); ++i) counts[{symbols[i], symbols[i + 1]}] += freq;
    }
    const SymbolPair* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& [pair, count] : counts) {
      if (count > best_count) {
        best = &pair;
        best_count = count;
      }
    }
    if (best == nullptr || best_count < std::max<std::size_t>(opts.min_pair_frequency, 1)) break;

    const SymbolPair merge = *best;
    for (auto& [symbols, freq] : words) apply_merge(symbols, merge);
    ids.emplace(merge.first + merge.second, static_cast<SubwordId>(ids.size() + 1));
    merges.push_back(merge);
  }
  return SubwordInventory(std::move(merges), std::move(ids));
}

}  // namespace lasas::tokenizer
