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

#include "charground/model.hpp"

#include <algorithm>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace charground {
namespace {

using testing::face;
using testing::filler_story;
using testing::mention;
using testing::text_in;
using testing::visual_in;

bool has_violation(const std::vector<std::string>& v, const std::string& prefix) {
  return std::any_of(v.begin(), v.end(),
                     [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

TEST(ValidateStory, WellFormedStoryHasNoViolations) {
  AnnotatedStory story = filler_story(5);
  GoldAnnotation gold;
  gold.text_chains.push_back(text_in("T", {0, 2}));
  gold.visual_chains.push_back(visual_in("V", {0, 4}));
  gold.alignment.emplace_back("T", "V");
  gold.importance["T"] = 4;
  story.gold = gold;
  EXPECT_TRUE(validate_story(story).empty());
}

TEST(ValidateStory, SentenceImageCountMismatch) {
  AnnotatedStory story = filler_story(5);
  story.images.pop_back();
  const auto v = validate_story(story);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], "sentence/image count mismatch");
}

TEST(ValidateStory, ZeroWidthBoxIsDegenerate) {
  AnnotatedStory story = filler_story(5);
  GoldAnnotation gold;
  VisualChain v = visual_in("V", {1});
  v.faces[0].box.w = 0;
  gold.visual_chains.push_back(v);
  story.gold = gold;
  const auto violations = validate_story(story);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_TRUE(has_violation(violations, "degenerate bounding box"));
}

TEST(ValidateStory, StarsOutOfRange) {
  AnnotatedStory story = filler_story(2);
  GoldAnnotation gold;
  gold.text_chains.push_back(text_in("T", {0}));
  gold.importance["T"] = 6;
  story.gold = gold;
  EXPECT_TRUE(has_violation(validate_story(story), "stars out of range"));
}

TEST(ValidateStory, BoxOutsideImage) {
  AnnotatedStory story = filler_story(2);
  GoldAnnotation gold;
  VisualChain v;
  v.chain_id = "V";
  v.faces.push_back(face(0, 95, 0, 10, 10));  // images are 100x100
  gold.visual_chains.push_back(v);
  story.gold = gold;
  EXPECT_TRUE(has_violation(validate_story(story), "bounding box outside image bounds"));
}

TEST(ValidateStory, AlignmentIdsMustExistAndBeUsedOnce) {
  AnnotatedStory story = filler_story(3);
  GoldAnnotation gold;
  gold.text_chains.push_back(text_in("T", {0}));
  gold.visual_chains.push_back(visual_in("V", {0}));
  gold.alignment = {{"T", "V"}, {"T", "V"}, {"X", "V"}};
  story.gold = gold;
  const auto v = validate_story(story);
  EXPECT_TRUE(has_violation(v, "text chain aligned more than once"));
  EXPECT_TRUE(has_violation(v, "visual chain aligned more than once"));
  EXPECT_TRUE(has_violation(v, "alignment references unknown text chain"));
}

TEST(ValidateStory, NonContiguousIndices) {
  AnnotatedStory story = filler_story(2);
  story.sentences[1].index = 5;
  EXPECT_TRUE(has_violation(validate_story(story), "sentence index not contiguous"));
}

TEST(ValidateStory, UnsortedMentionsAndWrongChainNumber) {
  AnnotatedStory story = filler_story(3);
  GoldAnnotation gold;
  TextChain t = text_in("T", {2, 0});
  t.number = Number::kPlural;
  gold.text_chains.push_back(t);
  story.gold = gold;
  const auto v = validate_story(story);
  EXPECT_TRUE(has_violation(v, "mentions not in story order"));
  EXPECT_TRUE(has_violation(v, "chain number inconsistent with mentions"));
}

TEST(ChainNumber, GroupDominatesPlural) {
  EXPECT_EQ(chain_number({mention(0, 0)}), Number::kSingular);
  EXPECT_EQ(chain_number({mention(0, 0), mention(1, 0, "x", Number::kPlural)}),
            Number::kPlural);
  EXPECT_EQ(chain_number({mention(0, 0, "x", Number::kPlural),
                          mention(1, 0, "x", Number::kGroup)}),
            Number::kGroup);
}

TEST(MakeMultimodal, ImportanceIsSumOfSides) {
  const TextChain t = text_in("T", {0, 1, 2});
  const VisualChain v1 = visual_in("V1", {0});
  const VisualChain v2 = visual_in("V2", {3});
  const MultiModalChain m = make_multimodal("M", t, {&v1, &v2});
  EXPECT_EQ(m.importance, 5u);
  ASSERT_TRUE(m.visual.has_value());
  EXPECT_EQ(m.visual->faces.size(), 2u);
  EXPECT_EQ(m.visual_chain_ids, (std::vector<std::string>{"V1", "V2"}));

  const MultiModalChain text_only = make_multimodal("A", t, {});
  EXPECT_EQ(text_only.importance, 3u);
  EXPECT_FALSE(text_only.visual.has_value());
}

TEST(EmbeddingTable, MentionLookupFallsBackToLowercase) {
  EmbeddingTable table;
  table.dim = 1;
  table.mentions["he"] = {1.0f};
  ASSERT_NE(table.mention("He"), nullptr);
  EXPECT_EQ(table.mention("She"), nullptr);
}

TEST(Names, RoundTrip) {
  for (Number n : {Number::kSingular, Number::kPlural, Number::kGroup}) {
    EXPECT_EQ(parse_number(to_string(n)), n);
  }
  for (Modality m : {Modality::kText, Modality::kImage, Modality::kMulti}) {
    EXPECT_EQ(parse_modality(to_string(m)), m);
  }
  EXPECT_FALSE(parse_number("dual").has_value());
}

}  // namespace
}  // namespace charground
