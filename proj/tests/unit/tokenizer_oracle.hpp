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

// Reference BPE trainer kept deliberately naive: words are space-joined
// strings, pair counts are recomputed from scratch with string splitting, and
// ties are resolved by sorting the candidate list.

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lasas/numerics/random.hpp"
#include "lasas/tokenizer/bpe.hpp"

namespace lasas::oracle {

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline std::vector<tokenizer::SymbolPair> naive_bpe_merges(const tokenizer::WordCounts& corpus,
                                                           std::size_t num_merges, std::size_t min_freq) {
  std::vector<std::pair<std::string, std::size_t>> words;
  for (const auto& [w, f] : corpus) {
    std::string spaced;
    for (char c : w) {
      if (!spaced.empty()) spaced += ' ';
      spaced += c;
    }
    words.emplace_back(spaced, f);
  }
  std::vector<tokenizer::SymbolPair> merges;
  for (std::size_t step = 0; step < num_merges; ++step) {
    std::vector<std::pair<tokenizer::SymbolPair, std::size_t>> tally;
    for (const auto& [w, f] : words) {
      const auto syms = split_ws(w);
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
        const tokenizer::SymbolPair p{syms[i], syms[i + 1]};
        auto it = std::find_if(tally.begin(), tally.end(), [&](const auto& e) { return e.first == p; });
        if (it == tally.end()) tally.emplace_back(p, f);
        else it->second += f;
      }
    }
    if (tally.empty()) break;
    std::sort(tally.begin(), tally.end(), [](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second > y.second;
      return x.first < y.first;
    });
    if (tally.front().second < min_freq) break;
    const auto best = tally.front().first;
    merges.push_back(best);
    for (auto& [w, f] : words) {
      const auto syms = split_ws(w);
      std::vector<std::string> out;
      for (std::size_t i = 0; i < syms.size(); ++i) {
        if (i + 1 < syms.size() && syms[i] == best.first && syms[i + 1] == best.second) {
          out.push_back(best.first + best.second);
          ++i;
        } else {
          out.push_back(syms[i]);
        }
      }
      std::string joined;
      for (const auto& s : out) joined += (joined.empty() ? "" : " ") + s;
      w = joined;
    }
  }
  return merges;
}

inline tokenizer::WordCounts random_corpus(numerics::Rng& rng, std::size_t max_words, const std::string& alphabet) {
  tokenizer::WordCounts corpus;
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_words)(rng);
  std::uniform_int_distribution<std::size_t> len(1, 7), chr(0, alphabet.size() - 1), freq(1, 6);
  while (corpus.size() < n) {
    std::string w;
    for (std::size_t i = len(rng); i > 0; --i) w += alphabet[chr(rng)];
    corpus[w] = freq(rng);
  }
  return corpus;
}

}  // namespace lasas::oracle
