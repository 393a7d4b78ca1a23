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

#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "lasas/errors.hpp"
#include "lasas/numerics/random.hpp"
#include "lasas/tokenizer/alignment.hpp"
#include "lasas/tokenizer/bpe.hpp"
#include "tokenizer_oracle.hpp"

using namespace lasas;
using namespace lasas::tokenizer;

TEST_CASE("bpe_train with zero merges yields characters plus silence") {
  const auto inv = bpe_train({{"abc", 1}, {"cab", 2}}, 0);
  CHECK(inv.merges().empty());
  CHECK(inv.size() == 4);
  CHECK(inv.id("a") == 1);
  CHECK(inv.id("b") == 2);
  CHECK(inv.id("c") == 3);
  CHECK(inv.symbol(kSilenceId).empty());
}

TEST_CASE("bpe_train low/lowest worked example") {
  const auto inv = bpe_train({{"low", 2}, {"lowest", 1}}, 2);
  const std::vector<SymbolPair> expected{{"l", "o"}, {"lo", "w"}};
  CHECK(inv.merges() == expected);
  CHECK(inv.merges() == oracle::naive_bpe_merges({{"low", 2}, {"lowest", 1}}, 2, 2));
  CHECK(inv.encode("low") == std::vector<SubwordId>{inv.id("low")});
  CHECK(inv.encode("lowest") ==
        std::vector<SubwordId>{inv.id("low"), inv.id("e"), inv.id("s"), inv.id("t")});
}

TEST_CASE("single pair below the frequency floor is only merged when the floor allows it") {
  CHECK(bpe_train({{"aa", 1}}, 1).merges().empty());
  const auto inv = bpe_train({{"aa", 1}}, BpeOptions{1, 1});
  REQUIRE(inv.merges().size() == 1);
  CHECK(inv.merges()[0] == SymbolPair{"a", "a"});
  CHECK(inv.encode("aa") == std::vector<SubwordId>{inv.id("aa")});
}

TEST_CASE("bpe_encode edge cases") {
  const auto inv = bpe_train({{"low", 2}, {"lowest", 1}}, 2);
  CHECK(inv.encode("").empty());
  CHECK(inv.encode("st") == std::vector<SubwordId>{inv.id("s"), inv.id("t")});
  try {
    inv.encode("lox");
    FAIL("expected EncodingError");
  } catch (const EncodingError& e) {
    CHECK(std::string(e.what()).find("'x'") != std::string::npos);
  }
  CHECK_THROWS_AS(bpe_train({}, 3), ConfigError);
}

TEST_CASE("bpe_train agrees with the naive oracle on random corpora") {
  numerics::Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const WordCounts corpus = oracle::random_corpus(rng, 50, "abcde");
    const std::size_t merges = std::uniform_int_distribution<std::size_t>(0, 20)(rng);
    const auto inv = bpe_train(corpus, merges);
    CHECK(inv.merges() == oracle::naive_bpe_merges(corpus, merges, 2));
    // ids dense, round trip exact
    for (std::size_t id = 1; id < inv.size(); ++id) CHECK(inv.id(inv.symbol(static_cast<SubwordId>(id))) == id);
    for (const auto& [word, freq] : corpus) {
      const auto ids = inv.encode(word);
      for (SubwordId i : ids) CHECK(i < inv.size());
      CHECK(inv.decode(ids) == word);
    }
  }
}

TEST_CASE("inventory JSON layout and round trip") {
  const auto inv = bpe_train({{"low", 2}, {"lowest", 1}}, 2);
  const auto doc = inv.to_json();
  CHECK(doc.at("merges") == nlohmann::json::parse(R"([["l","o"],["lo","w"]])"));
  CHECK(doc.at("ids").at("l") == inv.id("l"));
  CHECK_FALSE(doc.at("ids").contains(""));
  const auto back = SubwordInventory::from_json(nlohmann::json::parse(doc.dump()));
  CHECK(back.merges() == inv.merges());
  CHECK(back.ids() == inv.ids());
  CHECK(back.encode("lowest") == inv.encode("lowest"));
}

TEST_CASE("expand_alignment") {
  CHECK(expand_alignment({{5, 2}, {3, 1}}) == std::vector<SubwordId>{5, 5, 3});
  CHECK(expand_alignment({{7, 4}}) == std::vector<SubwordId>(4, 7));
  CHECK_THROWS_AS(expand_alignment({}), ConfigError);
  CHECK_THROWS_AS(expand_alignment({{1, 2}, {2, 0}}), ConfigError);

  numerics::Rng rng(3);
  std::vector<SubwordSegment> segs;
  std::map<SubwordId, std::size_t> expected;
  std::size_t total = 0;
  for (int i = 0; i < 30; ++i) {
    const SubwordSegment s{static_cast<SubwordId>(rng() % 6), 1 + rng() % 5};
    segs.push_back(s);
    expected[s.subword_id] += s.duration;
    total += s.duration;
  }
  const auto frames = expand_alignment(segs);
  CHECK(frames.size() == total);
  std::map<SubwordId, std::size_t> got;
  for (SubwordId id : frames) ++got[id];
  CHECK(got == expected);
}

TEST_CASE("one_hot") {
  const auto x = one_hot({0}, 3);
  CHECK(x == numerics::Matrix{{1, 0, 0}});
  const auto y = one_hot({2, 0, 1, 1}, 3);
  for (std::size_t t = 0; t < y.rows(); ++t) {
    double total = 0;
    for (double v : y.row(t)) total += v;
    CHECK(total == 1.0);
  }
  const numerics::Matrix w{{1, 2}, {3, 4}, {5, 6}};
  const auto sel = numerics::matmul(y, w);
  CHECK(sel == numerics::Matrix{{5, 6}, {1, 2}, {3, 4}, {3, 4}});
  CHECK_THROWS_AS(one_hot({3}, 3), DimensionError);
}
