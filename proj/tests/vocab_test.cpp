// Copyright 2026 The unitlang Authors.
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

#include "unitlang/vocab.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "test_util.hpp"

namespace unitlang {
namespace {

WordCounts counts(std::initializer_list<std::pair<Span, std::uint64_t>> entries) {
  WordCounts out;
  for (const auto& [w, c] : entries) out[w] = c;
  return out;
}

TEST(BuildVocabTest, FrequencyRanking) {
  auto v = build_vocab_from_counts(counts({{{1}, 5}, {{2}, 5}, {{1, 2}, 4}, {{2, 1}, 1}}), 3);
  EXPECT_EQ(v.words(), (std::vector<Span>{{1}, {2}, {1, 2}}));
}

TEST(BuildVocabTest, CapEqualToUnitInventory) {
  auto v = build_vocab_from_counts(counts({{{1}, 1}, {{2}, 9}, {{1, 2}, 40}}), 2);
  EXPECT_EQ(v.words(), (std::vector<Span>{{2}, {1}}));
  EXPECT_THROW(build_vocab_from_counts(counts({{{1}, 1}, {{2}, 9}}), 1), ContractError);
}

TEST(BuildVocabTest, TiesGoLexicographic) {
  auto v = build_vocab_from_counts(counts({{{3}, 1}, {{1}, 1}, {{3, 1}, 2}, {{1, 3}, 2}}), 3);
  EXPECT_EQ(v.words(), (std::vector<Span>{{1, 3}, {1}, {3}}));
}

TEST(BuildVocabTest, UnitsOnlyInsideWordsAreReserved) {
  auto v = build_vocab(std::vector<std::vector<Span>>{{{4, 5}, {4, 5}}}, 3);
  EXPECT_TRUE(v.id(Span{4}).has_value());
  EXPECT_TRUE(v.id(Span{5}).has_value());
  EXPECT_EQ(*v.id(Span{4, 5}), 0u);
}

TEST(EncodeTest, DirectAndFallback) {
  UnitWordVocabulary v({{1}, {2}, {3}, {1, 2}});
  EXPECT_EQ(encode(parse_words("1_2 3"), v), (std::vector<WordId>{3, 2}));
  EXPECT_EQ(encode(parse_words("2_1"), v), (std::vector<WordId>{1, 0}));
  EXPECT_THROW(encode(parse_words("7"), v), ContractError);
  EXPECT_EQ(render_words(decode({3, 2}, v)), "1_2 3");
  EXPECT_THROW(decode({4}, v), ContractError);
}

TEST(VocabFileTest, SaveAndLoad) {
  UnitWordVocabulary v({{1, 2}, {1}, {2}});
  std::ostringstream out;
  save_vocab(out, v);
  EXPECT_EQ(out.str(), "1_2\t0\n1\t1\n2\t2\n");
  std::istringstream in(out.str());
  EXPECT_EQ(load_vocab(in), v);

  std::istringstream gap("1\t0\n2\t2\n");
  EXPECT_THROW(load_vocab(gap), FormatError);
  std::istringstream dup("1\t0\n1\t1\n");
  EXPECT_THROW(load_vocab(dup), FormatError);
  std::istringstream junk("1 0\n");
  EXPECT_THROW(load_vocab(junk), FormatError);
}

TEST(VocabPropertyTest, UnitRoundTripAndCap) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<Span>> corpus;
    std::uniform_int_distribution<UnitId> unit(0, 6);
    std::uniform_int_distribution<std::size_t> len(1, 3), words(0, 8);
    for (int line = 0; line < 10; ++line) {
      std::vector<Span> ws(words(rng));
      for (auto& w : ws) {
        w.resize(len(rng));
        for (auto& u : w) u = unit(rng);
      }
      corpus.push_back(std::move(ws));
    }
    const std::size_t units = [&] {
      std::set<UnitId> s;
      for (const auto& ws : corpus)
        for (const auto& w : ws) s.insert(w.begin(), w.end());
      return s.size();
    }();
    const std::size_t cap = units + trial % 10;
    auto v = build_vocab(corpus, cap);
    EXPECT_LE(v.size(), cap);
    for (const auto& ws : corpus) {
      auto back = decode(encode(ws, v), v);
      EXPECT_EQ(testing::concatenate(back), testing::concatenate(ws));
    }
    // Same corpus, same vocabulary file.
    std::ostringstream a, b;
    save_vocab(a, v);
    save_vocab(b, build_vocab(corpus, cap));
    EXPECT_EQ(a.str(), b.str());
  }
}

TEST(VocabTest, BuildFromSegmentations) {
  Segmentation s1, s2;
  s1.words = {{1, 2}, {3}};
  s2.words = {{1, 2}};
  auto v = build_vocab(std::vector<Segmentation>{s1, s2}, 10);
  EXPECT_EQ(v.words().front(), (Span{1, 2}));
  EXPECT_EQ(v.size(), 4u);
  EXPECT_EQ(encode(s1, v).size(), 2u);
}

}  // namespace
}  // namespace unitlang
