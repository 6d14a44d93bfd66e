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

#include "unitlang/bpe.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "test_util.hpp"

namespace unitlang {
namespace {

std::vector<std::string> rendered(const std::vector<std::vector<Span>>& stream) {
  std::vector<std::string> out;
  for (const auto& words : stream) out.push_back(render_words(words));
  return out;
}

TEST(BpeTrainTest, HandRunExample) {
  std::vector<std::vector<Span>> stream;
  auto table = bpe_train(parse_corpus("1 1 2 1 1 2\n"), 1, &stream);
  ASSERT_EQ(table.num_merges(), 1u);
  EXPECT_EQ(table.merges[0], (std::pair<Span, Span>{{1}, {1}}));
  EXPECT_EQ(rendered(stream), (std::vector<std::string>{"1_1 2 1_1 2"}));

  table = bpe_train(parse_corpus("1 1 2 1 1 2\n"), 2, &stream);
  ASSERT_EQ(table.num_merges(), 2u);
  EXPECT_EQ(table.merges[1], (std::pair<Span, Span>{{1, 1}, {2}}));
  EXPECT_EQ(rendered(stream), (std::vector<std::string>{"1_1_2 1_1_2"}));
}

TEST(BpeTrainTest, StopsWhenNoPairRepeats) {
  EXPECT_EQ(bpe_train(parse_corpus("1 2 3\n"), 5).num_merges(), 0u);
  auto table = bpe_train(parse_corpus("1 1 2 1 1 2\n"), 50);
  EXPECT_EQ(table.num_merges(), 2u);
}

TEST(BpeTrainTest, PairsDoNotCrossLines) {
  EXPECT_EQ(bpe_train(parse_corpus("1\n2\n1\n2\n"), 3).num_merges(), 0u);
}

TEST(BpeTrainTest, Errors) {
  EXPECT_THROW(bpe_train(parse_corpus(""), 3), ContractError);
  EXPECT_THROW(bpe_train(parse_corpus("1 1\n"), 0), ContractError);
}

TEST(BpeApplyTest, Examples) {
  auto table = bpe_train(parse_corpus("1 1 2 1 1 2\n"), 2);
  EXPECT_EQ(render(bpe_apply(Span{1, 1, 2}, table)), "1_1_2");
  EXPECT_EQ(render(bpe_apply(Span{1, 2, 3}, BpeMergeTable{})), "1 2 3");
  EXPECT_EQ(render(bpe_apply(Span{9, 1, 1, 9}, table)), "9 1_1 9");
  EXPECT_EQ(render(bpe_apply(Span{}, table)), "");
}

TEST(BpeApplyTest, OverlappingRunsMergeLeftToRight) {
  BpeMergeTable table{{{{1}, {1}}}};
  EXPECT_EQ(render(bpe_apply(Span{1, 1, 1}, table)), "1_1 1");
}

TEST(MergeFileTest, SaveAndLoad) {
  auto table = bpe_train(parse_corpus("1 1 2 1 1 2\n"), 2);
  std::ostringstream out;
  save_merges(out, table);
  EXPECT_EQ(out.str(), "1 1\n1_1 2\n");
  std::istringstream in(out.str());
  EXPECT_EQ(load_merges(in), table);
  std::istringstream bad("1_1\n");
  EXPECT_THROW(load_merges(bad), FormatError);
  std::istringstream bad_unit("1 x\n");
  EXPECT_THROW(load_merges(bad_unit), FormatError);
}

TEST(BpePropertyTest, ApplyingTableReproducesTrainingStream) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    Corpus c = testing::random_corpus(rng, 2 + trial % 4, 20 + trial * 3);
    std::vector<std::vector<Span>> stream;
    auto table = bpe_train(c, 1 + trial % 15, &stream);
    BpeApplier applier(table);
    for (std::size_t i = 0; i < c.sequences.size(); ++i) {
      auto words = applier.apply(c.sequences[i].units);
      EXPECT_EQ(words, stream[i]);
      EXPECT_EQ(testing::concatenate(words), c.sequences[i].units);
    }
  }
}

}  // namespace
}  // namespace unitlang
