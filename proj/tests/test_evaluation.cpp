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

#include "charground/evaluation.hpp"

#include <gtest/gtest.h>

#include "charground/error.hpp"
#include "charground/io.hpp"
#include "test_util.hpp"

namespace charground {
namespace {

AnnotatedStory walk() { return load_story(CHARGROUND_FIXTURE_DIR "/story_walk.json"); }

double value(const EvaluationReport& r, const std::string& scope, const std::string& metric) {
  const MetricEntry* e = r.find(scope, metric);
  if (!e) ADD_FAILURE() << "missing " << scope << "/" << metric;
  if (!e || !e->value) return -1;
  return *e->value;
}

TEST(Evaluate, GoldPredictionScoresPerfectly) {
  const std::vector<AnnotatedStory> gold = {walk()};
  const std::vector<Prediction> preds = {prediction_from_gold(gold[0])};
  const auto report = evaluate(preds, gold);
  EXPECT_EQ(report.kind, "eval");
  ASSERT_EQ(report.sections.size(), 2u);
  EXPECT_EQ(report.sections[0].scope, "corpus");
  EXPECT_EQ(report.sections[1].scope, "walk-0001");
  EXPECT_EQ(value(report, "corpus", "stories"), 1.0);
  for (const char* m :
       {"detection.text.precision", "detection.text.recall", "detection.visual.precision",
        "detection.visual.recall", "bcubed.text.precision", "bcubed.text.recall",
        "bcubed.visual.precision", "bcubed.visual.recall", "exact.text.precision",
        "exact.text.recall", "exact.visual.precision", "exact.visual.recall",
        "grounding.precision", "grounding.recall", "precision_at_1", "precision_at_3",
        "precision_at_5"}) {
    EXPECT_DOUBLE_EQ(value(report, "corpus", m), 1.0) << m;
  }
  for (const char* m : {"pearson.text", "pearson.image", "pearson.multi"}) {
    EXPECT_NE(report.find("corpus", m), nullptr) << m;
  }
}

TEST(Evaluate, MetricSelection) {
  const std::vector<AnnotatedStory> gold = {walk()};
  const std::vector<Prediction> preds = {prediction_from_gold(gold[0])};
  EvalOptions opt;
  opt.metrics = parse_metric_set("bcubed,pk");
  opt.ks = {2};
  const auto report = evaluate(preds, gold, opt);
  EXPECT_NE(report.find("corpus", "bcubed.text.precision"), nullptr);
  EXPECT_NE(report.find("corpus", "precision_at_2"), nullptr);
  EXPECT_EQ(report.find("corpus", "precision_at_1"), nullptr);
  EXPECT_EQ(report.find("corpus", "detection.text.precision"), nullptr);
  EXPECT_THROW(parse_metric_set("bogus"), Error);
  opt.ks = {0};
  EXPECT_THROW(opt.validate(), Error);
}

TEST(Evaluate, NoAlignmentLeavesGroundingAbsent) {
  const std::vector<AnnotatedStory> gold = {walk()};
  Prediction p = prediction_from_gold(gold[0]);
  p.alignment.reset();
  p.characters.clear();
  p.ranking_modality.reset();
  const auto report = evaluate(std::vector{p}, gold);
  const MetricEntry* e = report.find("corpus", "grounding.precision");
  ASSERT_NE(e, nullptr);
  EXPECT_FALSE(e->value.has_value());
}

TEST(Evaluate, PairingErrors) {
  const std::vector<AnnotatedStory> gold = {walk()};
  Prediction p = prediction_from_gold(gold[0]);
  p.story_id = "other";
  try {
    evaluate(std::vector{p}, gold);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kData);
  }
  AnnotatedStory raw = gold[0];
  raw.gold.reset();
  EXPECT_THROW(evaluate(std::vector{prediction_from_gold(gold[0])}, std::vector{raw}), Error);
}

TEST(Evaluate, DroppingAMentionLowersRecallOnly) {
  const std::vector<AnnotatedStory> gold = {walk()};
  Prediction p = prediction_from_gold(gold[0]);
  p.text_chains[0].mentions.pop_back();
  p.characters.clear();
  p.ranking_modality.reset();
  const auto report = evaluate(std::vector{p}, gold);
  EXPECT_DOUBLE_EQ(value(report, "corpus", "detection.text.precision"), 1.0);
  EXPECT_LT(value(report, "corpus", "detection.text.recall"), 1.0);
  EXPECT_LT(value(report, "corpus", "exact.text.recall"), 1.0);
}

TEST(Stats, SingleChainExample) {
  AnnotatedStory story = testing::filler_story(5);
  GoldAnnotation gold;
  gold.text_chains.push_back(testing::text_in("T", {0, 1}));
  gold.visual_chains.push_back(testing::visual_in("V", {0, 1}));
  gold.alignment.emplace_back("T", "V");
  story.gold = gold;
  const auto report = dataset_stats(std::vector{story});
  EXPECT_EQ(report.kind, "stats");
  EXPECT_EQ(value(report, "corpus", "stories"), 1.0);
  EXPECT_EQ(value(report, "corpus", "characters"), 1.0);
  EXPECT_EQ(value(report, "corpus", "plural_group_characters"), 0.0);
  EXPECT_EQ(value(report, "corpus", "bounding_boxes"), 2.0);
  EXPECT_DOUBLE_EQ(value(report, "corpus", "mean_boxes_per_story"), 2.0);
  EXPECT_DOUBLE_EQ(value(report, "corpus", "mean_characters_per_story"), 1.0);
  EXPECT_DOUBLE_EQ(value(report, "corpus", "mean_text_chain_length"), 2.0);
  EXPECT_DOUBLE_EQ(value(report, "corpus", "mean_visual_chain_length"), 2.0);
}

TEST(Stats, EmptyCorpus) {
  const auto report = dataset_stats(std::vector<AnnotatedStory>{});
  EXPECT_EQ(value(report, "corpus", "stories"), 0.0);
  EXPECT_EQ(value(report, "corpus", "bounding_boxes"), 0.0);
  for (const char* m : {"mean_boxes_per_story", "mean_characters_per_story",
                        "mean_text_chain_length", "mean_visual_chain_length"}) {
    const MetricEntry* e = report.find("corpus", m);
    ASSERT_NE(e, nullptr) << m;
    EXPECT_FALSE(e->value.has_value()) << m;
  }
}

TEST(Stats, Fixture) {
  const auto report = dataset_stats(std::vector{walk()});
  // man, dog, girl, them, family
  EXPECT_EQ(value(report, "corpus", "characters"), 5.0);
  EXPECT_EQ(value(report, "corpus", "plural_group_characters"), 2.0);
  EXPECT_EQ(value(report, "corpus", "bounding_boxes"), 6.0);
}

TEST(Agreement, IdenticalAnnotationsAgreeFully) {
  const std::vector<AnnotatedStory> a = {walk()};
  const auto report = agreement_report(a, a);
  EXPECT_EQ(report.kind, "agreement");
  for (const auto& e : report.sections[0].metrics) {
    if (e.integral) continue;
    ASSERT_TRUE(e.value.has_value()) << e.name;
    EXPECT_DOUBLE_EQ(*e.value, 1.0) << e.name;
  }
}

TEST(Agreement, BoxesBelowIoUThresholdDisagree) {
  AnnotatedStory a = testing::filler_story(2);
  GoldAnnotation ga;
  ga.text_chains.push_back(testing::text_in("T", {0}));
  VisualChain va;
  va.chain_id = "V";
  va.faces.push_back(testing::face(0, 0, 0, 100, 100));
  ga.visual_chains.push_back(va);
  ga.importance["T"] = 3;
  a.gold = ga;
  AnnotatedStory b = a;
  b.gold->visual_chains[0].faces[0].box.w = 59;  // IoU 0.59
  const auto report = agreement_report(std::vector{a}, std::vector{b});
  EXPECT_DOUBLE_EQ(value(report, "corpus", "bbox.precision"), 0.0);
  EXPECT_DOUBLE_EQ(value(report, "corpus", "detection.precision"), 1.0);
}

TEST(Agreement, MismatchedIdsAreDataErrors) {
  AnnotatedStory a = walk();
  AnnotatedStory b = a;
  b.story_id = "x";
  try {
    agreement_report(std::vector{a}, std::vector{b});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kData);
  }
}

TEST(Summary, CountsPredictionParts) {
  const Prediction p = prediction_from_gold(walk());
  const auto report = prediction_summary(p);
  EXPECT_EQ(report.kind, "summary");
  EXPECT_EQ(value(report, "walk-0001", "text_chains"), 5.0);
  EXPECT_EQ(value(report, "walk-0001", "visual_chains"), 3.0);
  EXPECT_EQ(value(report, "walk-0001", "pairs"), 3.0);
}

}  // namespace
}  // namespace charground
