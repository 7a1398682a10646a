// Copyright 2026 The CharGround Authors.
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

#include "charground/ranking.hpp"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "charground/error.hpp"
#include "test_util.hpp"

namespace charground {
namespace {

using testing::text_in;
using testing::visual_in;

// Text-only character with `n` mentions starting at sentence `first`.
MultiModalChain text_character(const std::string& id, std::size_t first, std::size_t n) {
  std::vector<Mention> ms;
  for (std::size_t i = 0; i < n; ++i) ms.push_back(testing::mention(first, i));
  return make_multimodal(id, testing::text_chain(id, ms), {});
}

TEST(Importance, SumOfSides) {
  const TextChain t = text_in("T", {0, 1, 2});
  const VisualChain v = visual_in("V", {0, 1});
  EXPECT_EQ(importance_score(make_multimodal("M", t, {&v})), 5u);
  EXPECT_EQ(importance_score(make_multimodal("M", text_in("T", {0, 1, 2, 3}), {})), 4u);
  const VisualChain one = visual_in("V", {2});
  EXPECT_EQ(importance_score(make_multimodal("M", std::nullopt, {&one})), 1u);
}

TEST(RankCharacters, TieBrokenByFirstOccurrence) {
  const std::vector<MultiModalChain> chains = {text_character("C", 3, 2),
                                               text_character("A", 0, 5),
                                               text_character("B", 1, 2)};
  EXPECT_EQ(rank_characters(chains), (std::vector<std::string>{"A", "B", "C"}));
}

TEST(RankCharacters, SingleAndAllEqual) {
  const std::vector<MultiModalChain> one = {text_character("X", 2, 1)};
  EXPECT_EQ(rank_characters(one), (std::vector<std::string>{"X"}));
  const std::vector<MultiModalChain> equal = {text_character("c", 4, 1),
                                              text_character("a", 0, 1),
                                              text_character("b", 2, 1)};
  EXPECT_EQ(rank_characters(equal), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(RankCharacters, VisualOnlyTiesUseImageIndex) {
  const VisualChain late = visual_in("L", {3});
  const VisualChain early = visual_in("E", {1});
  const std::vector<MultiModalChain> chains = {make_multimodal("L", std::nullopt, {&late}),
                                               make_multimodal("E", std::nullopt, {&early})};
  EXPECT_EQ(rank_characters(chains), (std::vector<std::string>{"E", "L"}));
}

TEST(Protagonist, Examples) {
  const std::vector<MultiModalChain> ab = {text_character("B", 1, 2),
                                           text_character("A", 0, 5)};
  EXPECT_EQ(protagonist(ab), "A");
  const std::vector<MultiModalChain> tie = {text_character("B", 2, 3),
                                            text_character("A", 0, 3)};
  EXPECT_EQ(protagonist(tie), "A");
  const std::vector<MultiModalChain> single = {text_character("S", 0, 1)};
  EXPECT_EQ(protagonist(single), "S");
}

TEST(Protagonist, EmptyIsParameterError) {
  try {
    protagonist(std::vector<MultiModalChain>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParameter);
  }
}

// Ranks are non-increasing in importance and adding a mention never moves a
// character down.
TEST(RankCharacters, OrderProperties) {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<MultiModalChain> chains;
    const std::size_t n = 1 + rng() % 6;
    for (std::size_t i = 0; i < n; ++i) {
      chains.push_back(text_character("c" + std::to_string(i), i, 1 + rng() % 4));
    }
    const auto order = rank_characters(chains);
    std::vector<MultiModalChain> sorted = chains;
    sort_by_rank(sorted);
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      EXPECT_GE(sorted[i - 1].importance, sorted[i].importance);
    }
    const std::size_t pick = rng() % n;
    const auto before = std::find(order.begin(), order.end(), chains[pick].chain_id) - order.begin();
    std::vector<MultiModalChain> boosted = chains;
    auto& t = *boosted[pick].text;
    t.mentions.push_back(testing::mention(pick, t.mentions.size()));
    boosted[pick] = make_multimodal(boosted[pick].chain_id, t, {});
    const auto after_order = rank_characters(boosted);
    const auto after =
        std::find(after_order.begin(), after_order.end(), chains[pick].chain_id) -
        after_order.begin();
    EXPECT_LE(after, before);
  }
}

TEST(BuildCharacters, Modalities) {
  const std::vector<TextChain> text = {text_in("T0", {0}), text_in("T1", {1, 2, 3})};
  const std::vector<VisualChain> vis = {visual_in("V0", {1, 2})};
  const auto by_text = build_characters(Modality::kText, text, vis, nullptr);
  ASSERT_EQ(by_text.size(), 2u);
  EXPECT_EQ(by_text[0].chain_id, "M0");
  EXPECT_EQ(by_text[0].text->chain_id, "T1");

  const auto by_image = build_characters(Modality::kImage, text, vis, nullptr);
  ASSERT_EQ(by_image.size(), 1u);
  EXPECT_FALSE(by_image[0].text.has_value());

  EXPECT_THROW(build_characters(Modality::kMulti, text, vis, nullptr), Error);
  Alignment a;
  a.pairs.push_back({1, 0, 0.5});
  const auto multi = build_characters(Modality::kMulti, text, vis, &a);
  ASSERT_EQ(multi.size(), 2u);
  EXPECT_EQ(multi[0].importance, 5u);
}

}  // namespace
}  // namespace charground
