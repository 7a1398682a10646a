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

#include "charground/metrics.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "charground/error.hpp"
#include "test_util.hpp"

namespace charground {
namespace {

using testing::face;

// Matching over the same n items: item i of the prediction is item i of gold.
ChainMatching same_items(const std::vector<std::size_t>& pred,
                         const std::vector<std::size_t>& gold) {
  ChainMatching m;
  m.pred_chain_of = pred;
  m.gold_chain_of = gold;
  for (std::size_t i = 0; i < pred.size(); ++i) m.gold_of_pred.push_back(i);
  for (std::size_t c : pred) m.pred_chains = std::max(m.pred_chains, c + 1);
  for (std::size_t c : gold) m.gold_chains = std::max(m.gold_chains, c + 1);
  return m;
}

// B-cubed straight from the set definitions.
std::pair<double, double> b_cubed_oracle(const std::vector<std::size_t>& pred,
                                         const std::vector<std::size_t>& gold) {
  const std::size_t n = pred.size();
  auto members = [&](const std::vector<std::size_t>& labels, std::size_t i) {
    std::set<std::size_t> s;
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[j] == labels[i]) s.insert(j);
    }
    return s;
  };
  double p = 0, r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = members(pred, i);
    const auto b = members(gold, i);
    std::size_t both = 0;
    for (std::size_t x : a) both += b.count(x);
    p += static_cast<double>(both) / a.size();
    r += static_cast<double>(both) / b.size();
  }
  return {p / n, r / n};
}

std::vector<std::size_t> random_partition(std::size_t n, std::mt19937& rng) {
  const std::size_t k = 1 + rng() % n;
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i < k ? i : rng() % k;
  std::shuffle(labels.begin(), labels.end(), rng);
  // compact to 0..k-1 in first-appearance order
  std::map<std::size_t, std::size_t> remap;
  for (std::size_t& l : labels) l = remap.emplace(l, remap.size()).first->second;
  return labels;
}

TEST(IoU, Examples) {
  const BoundingBox a{0, 0, 10, 10};
  EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(iou(a, {20, 20, 5, 5}), 0.0);
  EXPECT_NEAR(iou(a, {5, 0, 10, 10}), 1.0 / 3.0, 1e-12);
}

TEST(IoU, SymmetricAndTranslationInvariant) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  std::uniform_real_distribution<double> s(1.0, 30.0);
  for (int i = 0; i < 500; ++i) {
    const BoundingBox a{u(rng), u(rng), s(rng), s(rng)};
    const BoundingBox b{u(rng), u(rng), s(rng), s(rng)};
    const double v = iou(a, b);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_NEAR(v, iou(b, a), 1e-12);
    const double dx = u(rng), dy = u(rng);
    EXPECT_NEAR(v, iou({a.x + dx, a.y + dy, a.w, a.h}, {b.x + dx, b.y + dy, b.w, b.h}), 1e-9);
  }
}

TEST(BoxInside, BoundaryIsInside) {
  const BoundingBox body{0, 0, 50, 100};
  EXPECT_TRUE(box_inside({0, 0, 50, 100}, body));
  EXPECT_TRUE(box_inside({10, 10, 20, 20}, body));
  EXPECT_FALSE(box_inside({31, 10, 20, 20}, body));
}

TEST(Detection, VisualCounts) {
  VisualChain gold{"G", {face(0, 0, 0, 50, 100), face(1, 0, 0, 50, 100)}};
  VisualChain pred{"P", {face(0, 10, 10, 20, 20), face(2, 10, 10, 20, 20)}};
  const auto pr = detection_pr(std::vector{pred}, std::vector{gold},
                               MentionMatcher::face_in_body());
  EXPECT_DOUBLE_EQ(*pr.precision, 0.5);
  EXPECT_DOUBLE_EQ(*pr.recall, 0.5);

  const auto same = detection_pr(std::vector{gold}, std::vector{gold},
                                 MentionMatcher::face_in_body());
  EXPECT_DOUBLE_EQ(*same.precision, 1.0);
  EXPECT_DOUBLE_EQ(*same.recall, 1.0);
}

TEST(Detection, FaceProtrudingByOnePixelIsIncorrect) {
  VisualChain gold{"G", {face(0, 0, 0, 50, 100)}};
  VisualChain pred{"P", {face(0, 31, 10, 20, 20)}};
  const auto pr = detection_pr(std::vector{pred}, std::vector{gold},
                               MentionMatcher::face_in_body());
  EXPECT_DOUBLE_EQ(*pr.precision, 0.0);
}

TEST(Detection, EmptySidesAreAbsent) {
  const auto pr = detection_pr(std::vector<VisualChain>{}, std::vector<VisualChain>{},
                               MentionMatcher::face_in_body());
  EXPECT_FALSE(pr.precision.has_value());
  EXPECT_FALSE(pr.recall.has_value());
}

TEST(Detection, TextHeadWords) {
  const auto story = testing::make_story(
      {{{"the", "DT"}, {"man", "NN"}, {"and", "CC"}, {"a", "DT"}, {"dog", "NN"}}});
  Mention man = testing::mention(0, 0, "the man");
  man.token_end = 2;
  const TextChain gold = testing::text_chain("G", {man, testing::mention(0, 4, "dog")});
  const TextChain pred = testing::text_chain(
      "P", {testing::mention(0, 1, "man"), testing::mention(0, 3, "a")});
  const auto pr = detection_pr(story, std::vector{pred}, std::vector{gold});
  EXPECT_DOUBLE_EQ(*pr.precision, 0.5);
  EXPECT_DOUBLE_EQ(*pr.recall, 0.5);
}

TEST(BoxIoUMatcher, StrictThreshold) {
  VisualChain a{"A", {face(0, 0, 0, 100, 100)}};
  // IoU = 59 * 100 / (100 * 100) = 0.59
  VisualChain b{"B", {face(0, 0, 0, 59, 100)}};
  const auto pr = detection_pr(std::vector{b}, std::vector{a}, MentionMatcher::box_iou(0.6));
  EXPECT_DOUBLE_EQ(*pr.precision, 0.0);
  VisualChain c{"C", {face(0, 0, 0, 61, 100)}};
  EXPECT_DOUBLE_EQ(
      *detection_pr(std::vector{c}, std::vector{a}, MentionMatcher::box_iou(0.6)).precision,
      1.0);
}

TEST(BCubed, WorkedExample) {
  // gold {a,b,c},{d}; predicted {a,b},{c,d}
  const auto pr = b_cubed_counts(same_items({0, 0, 1, 1}, {0, 0, 0, 1})).value();
  EXPECT_NEAR(*pr.precision, 0.75, 1e-12);
  EXPECT_NEAR(*pr.recall, 2.0 / 3.0, 1e-12);
}

TEST(BCubed, SingletonPredictions) {
  const auto pr = b_cubed_counts(same_items({0, 1, 2, 3, 4}, {0, 0, 0, 0, 0})).value();
  EXPECT_NEAR(*pr.precision, 1.0, 1e-12);
  EXPECT_NEAR(*pr.recall, 0.2, 1e-12);
}

TEST(BCubed, MatchesSetDefinitionOnRandomPartitions) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    const auto pred = random_partition(n, rng);
    const auto gold = random_partition(n, rng);
    const auto pr = b_cubed_counts(same_items(pred, gold)).value();
    const auto [p, r] = b_cubed_oracle(pred, gold);
    EXPECT_NEAR(*pr.precision, p, 1e-12);
    EXPECT_NEAR(*pr.recall, r, 1e-12);
  }
}

// Merging two predicted chains can only lower precision and raise recall.
TEST(BCubed, MergeMonotonicity) {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 10;
    auto pred = random_partition(n, rng);
    const auto gold = random_partition(n, rng);
    std::size_t k = 0;
    for (std::size_t l : pred) k = std::max(k, l + 1);
    if (k < 2) continue;
    const auto before = b_cubed_counts(same_items(pred, gold)).value();
    for (std::size_t& l : pred) {
      if (l == k - 1) l = 0;
    }
    const auto after = b_cubed_counts(same_items(pred, gold)).value();
    EXPECT_LE(*after.precision, *before.precision + 1e-12);
    EXPECT_GE(*after.recall, *before.recall - 1e-12);
  }
}

TEST(BCubed, SpuriousAndMissedMentionsCount) {
  ChainMatching m = same_items({0, 0}, {0, 0});
  m.pred_chain_of.push_back(1);  // spurious prediction
  m.gold_of_pred.push_back(std::nullopt);
  m.pred_chains = 2;
  m.gold_chain_of.push_back(1);  // missed gold mention
  m.gold_chains = 2;
  const auto pr = b_cubed_counts(m).value();
  EXPECT_NEAR(*pr.precision, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(*pr.recall, 2.0 / 3.0, 1e-12);
}

TEST(ExactMatch, Examples) {
  const auto same = exact_match_counts(same_items({0, 0, 1}, {0, 0, 1})).value();
  EXPECT_DOUBLE_EQ(*same.precision, 1.0);
  EXPECT_DOUBLE_EQ(*same.recall, 1.0);

  const auto merged = exact_match_counts(same_items({0, 0, 0}, {0, 0, 1})).value();
  EXPECT_DOUBLE_EQ(*merged.precision, 0.0);
  EXPECT_DOUBLE_EQ(*merged.recall, 0.0);

  ChainMatching m = same_items({0, 0, 1}, {0, 0, 1});
  m.pred_chain_of.push_back(2);
  m.gold_of_pred.push_back(std::nullopt);
  m.pred_chains = 3;
  const auto spurious = exact_match_counts(m).value();
  EXPECT_NEAR(*spurious.precision, 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(*spurious.recall, 1.0);
}

TEST(ExactMatch, SubsetChainIsNotExact) {
  const auto pr = exact_match_counts(same_items({0, 0, 1}, {0, 0, 0})).value();
  EXPECT_DOUBLE_EQ(*pr.precision, 0.0);
  EXPECT_DOUBLE_EQ(*pr.recall, 0.0);
}

TEST(MapChains, PluralityAndTies) {
  // predicted 0 -> {g0, g0, g1}; predicted 1 -> {g1, g2}
  const auto map = map_chains(same_items({0, 0, 0, 1, 1}, {0, 0, 1, 1, 2}));
  ASSERT_EQ(map.size(), 2u);
  EXPECT_EQ(map[0], std::optional<std::size_t>(0));
  EXPECT_FALSE(map[1].has_value());
}

TEST(Grounding, CountExample) {
  // 4 gold pairs; 2 predicted pairs, one of them correct
  const std::vector<IndexPair> gold = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  const std::vector<IndexPair> pred = {{0, 0}, {1, 2}};
  const std::vector<std::optional<std::size_t>> identity = {0, 1, 2, 3};
  const auto pr = grounding_counts(pred, identity, identity, gold).value();
  EXPECT_DOUBLE_EQ(*pr.precision, 0.5);
  EXPECT_DOUBLE_EQ(*pr.recall, 0.25);

  const auto all = grounding_counts(gold, identity, identity, gold).value();
  EXPECT_DOUBLE_EQ(*all.precision, 1.0);
  EXPECT_DOUBLE_EQ(*all.recall, 1.0);
}

TEST(Grounding, UnmappedChainsCountAsWrong) {
  const std::vector<IndexPair> gold = {{0, 0}};
  const std::vector<IndexPair> pred = {{0, 0}};
  const std::vector<std::optional<std::size_t>> none = {std::nullopt};
  const std::vector<std::optional<std::size_t>> zero = {0};
  const auto pr = grounding_counts(pred, none, zero, gold).value();
  EXPECT_DOUBLE_EQ(*pr.precision, 0.0);
  const std::vector<IndexPair> bad = {{3, 0}};
  EXPECT_THROW(grounding_counts(bad, zero, zero, gold), Error);
}

GoldCharacter gold_word(const std::string& w) {
  GoldCharacter g;
  g.head.head_word = w;
  g.stars = 3;
  return g;
}

CharacterHead word(const std::string& w) {
  CharacterHead h;
  h.head_word = w;
  return h;
}

TEST(PrecisionAtK, Examples) {
  const std::vector<GoldCharacter> gold = {gold_word("man"), gold_word("dog"),
                                           gold_word("girl")};
  const std::vector<CharacterHead> same = {word("man"), word("dog"), word("girl")};
  for (std::size_t k = 1; k <= 5; ++k) EXPECT_DOUBLE_EQ(*precision_at_k(same, gold, k), 1.0);

  const std::vector<CharacterHead> swapped = {word("dog"), word("man")};
  EXPECT_DOUBLE_EQ(*precision_at_k(swapped, gold, 1), 0.0);
  EXPECT_DOUBLE_EQ(*precision_at_k(swapped, gold, 2), 1.0);
  EXPECT_NEAR(*precision_at_k(swapped, gold, 3), 2.0 / 3.0, 1e-12);

  EXPECT_FALSE(precision_at_k(same, std::vector<GoldCharacter>{}, 1).has_value());
  EXPECT_THROW(precision_at_k(same, gold, 0), Error);
}

TEST(PrecisionAtK, DuplicateHeadsMatchOnce) {
  const std::vector<GoldCharacter> gold = {gold_word("man"), gold_word("woman")};
  const std::vector<CharacterHead> pred = {word("man"), word("man")};
  EXPECT_DOUBLE_EQ(*precision_at_k(pred, gold, 2), 0.5);
}

TEST(HeadsMatch, VisualOnly) {
  CharacterHead gold;
  gold.head_box = std::make_pair(std::size_t{1}, BoundingBox{0, 0, 50, 100});
  CharacterHead inside;
  inside.head_box = std::make_pair(std::size_t{1}, BoundingBox{5, 5, 10, 10});
  EXPECT_TRUE(heads_match(inside, gold));
  inside.head_box->first = 2;
  EXPECT_FALSE(heads_match(inside, gold));
  CharacterHead worded = gold;
  worded.head_word = "man";
  inside.head_box->first = 1;
  EXPECT_FALSE(heads_match(inside, worded));
}

TEST(Pearson, Examples) {
  const std::vector<double> x = {1, 2, 3};
  EXPECT_NEAR(*pearson(x, std::vector<double>{2, 4, 6}), 1.0, 1e-12);
  EXPECT_NEAR(*pearson(x, std::vector<double>{6, 4, 2}), -1.0, 1e-12);
  EXPECT_FALSE(pearson(x, std::vector<double>{5, 5, 5}).has_value());
  EXPECT_FALSE(pearson(std::vector<double>{1}, std::vector<double>{2}).has_value());
  EXPECT_THROW(pearson(x, std::vector<double>{1, 2}), Error);
}

TEST(Pearson, InvariantUnderPositiveAffineMaps) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(8), y(8), z(8);
    for (int i = 0; i < 8; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
      z[i] = 3.0 * y[i] + 7.0;
    }
    const double r = *pearson(x, y);
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
    EXPECT_NEAR(r, *pearson(x, z), 1e-9);
    EXPECT_NEAR(r, *pearson(y, x), 1e-12);
  }
}

AnnotatedStory starred_story() {
  AnnotatedStory story = testing::filler_story(5);
  GoldAnnotation gold;
  gold.text_chains = {testing::text_in("A", {0, 1, 2}), testing::text_in("B", {1}),
                      testing::text_in("C", {3, 4})};
  // distinct token offsets within a sentence
  gold.text_chains[1].mentions[0].token_start = 3;
  gold.text_chains[1].mentions[0].token_end = 4;
  gold.visual_chains = {testing::visual_in("VA", {0, 1}), testing::visual_in("VX", {4})};
  gold.alignment = {{"A", "VA"}};
  gold.importance = {{"A", 5}, {"B", 1}, {"C", 3}, {"VX", 2}};
  story.gold = gold;
  return story;
}

TEST(GoldCharacters, OrderStarsAndRanking) {
  const auto story = starred_story();
  const auto chars = gold_characters(story);
  ASSERT_EQ(chars.size(), 4u);
  EXPECT_EQ(chars[0].chain.chain_id, "A");
  EXPECT_EQ(chars[0].chain.importance, 5u);
  EXPECT_EQ(chars[3].chain.chain_id, "VX");
  EXPECT_FALSE(chars[3].head.head_word.has_value());

  const auto ranked = gold_ranking(story);
  std::vector<std::string> ids;
  for (const auto& c : ranked) ids.push_back(c.chain.chain_id);
  EXPECT_EQ(ids, (std::vector<std::string>{"A", "C", "VX", "B"}));
}

TEST(OccurrenceCorrelation, ModalitiesOracle) {
  const auto story = starred_story();
  // text: A 3, B 1, C 2 vs stars 5, 1, 3
  EXPECT_NEAR(*occurrence_correlation(story, Modality::kText),
              *pearson(std::vector<double>{3, 1, 2}, std::vector<double>{5, 1, 3}), 1e-12);
  // image: A 2, VX 1 vs 5, 2
  EXPECT_NEAR(*occurrence_correlation(story, Modality::kImage), 1.0, 1e-12);
  // multi: A 5, B 1, C 2, VX 1 vs 5, 1, 3, 2
  EXPECT_NEAR(*occurrence_correlation(story, Modality::kMulti),
              *pearson(std::vector<double>{5, 1, 2, 1}, std::vector<double>{5, 1, 3, 2}),
              1e-12);
}

}  // namespace
}  // namespace charground
