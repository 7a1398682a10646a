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

#include <algorithm>
#include <map>
#include <set>

#include "charground/error.hpp"
#include "charground/grounding.hpp"
#include "charground/metrics.hpp"

namespace charground {

const MetricEntry* EvaluationReport::find(std::string_view scope,
                                          std::string_view metric) const {
  for (const ReportSection& s : sections) {
    if (s.scope != scope) continue;
    for (const MetricEntry& m : s.metrics) {
      if (m.name == metric) return &m;
    }
  }
  return nullptr;
}

std::uint32_t parse_metric_set(std::string_view text) {
  static const std::map<std::string, std::uint32_t, std::less<>> kNames = {
      {"detection", kMetricDetection}, {"bcubed", kMetricBCubed},
      {"exact", kMetricExact},         {"grounding", kMetricGrounding},
      {"pk", kMetricPrecisionAtK},     {"pearson", kMetricPearson},
      {"all", kMetricAll},
  };
  std::uint32_t out = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view name = text.substr(pos, comma - pos);
    auto it = kNames.find(name);
    if (it == kNames.end()) throw_parameter("unknown metric '" + std::string(name) + "'");
    out |= it->second;
    pos = comma + 1;
  }
  return out;
}

void EvalOptions::validate() const {
  if ((metrics & kMetricAll) == 0) throw_parameter("no metrics selected");
  for (std::size_t k : ks) {
    if (k == 0) throw_parameter("Precision@k needs k >= 1");
  }
}

namespace {

class SectionBuilder {
 public:
  explicit SectionBuilder(std::string scope) { section_.scope = std::move(scope); }

  void add(std::string name, std::optional<double> value) {
    section_.metrics.push_back({std::move(name), value, false});
  }
  void add_count(std::string name, double value) {
    section_.metrics.push_back({std::move(name), value, true});
  }
  void add_pr(const std::string& prefix, const PRCounts& counts) {
    const PrecisionRecall pr = counts.value();
    add(prefix + ".precision", pr.precision);
    add(prefix + ".recall", pr.recall);
  }
  ReportSection take() { return std::move(section_); }

 private:
  ReportSection section_;
};

std::string pk_name(std::size_t k) { return "precision_at_" + std::to_string(k); }

// Running mean over the defined values only.
struct Mean {
  double sum = 0;
  std::size_t n = 0;

  void add(const std::optional<double>& v) {
    if (!v) return;
    sum += *v;
    ++n;
  }
  std::optional<double> value() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

struct StoryScores {
  PRCounts detection_text, detection_visual;
  PRCounts bcubed_text, bcubed_visual;
  PRCounts exact_text, exact_visual;
  std::optional<PRCounts> grounding;
  std::vector<std::optional<double>> pk;
  std::optional<double> pearson[3];
};

constexpr Modality kModalities[3] = {Modality::kText, Modality::kImage, Modality::kMulti};

std::vector<IndexPair> gold_pair_indices(const GoldAnnotation& gold) {
  std::map<std::string, std::size_t> text_index;
  std::map<std::string, std::size_t> visual_index;
  for (std::size_t i = 0; i < gold.text_chains.size(); ++i) {
    text_index[gold.text_chains[i].chain_id] = i;
  }
  for (std::size_t i = 0; i < gold.visual_chains.size(); ++i) {
    visual_index[gold.visual_chains[i].chain_id] = i;
  }
  std::vector<IndexPair> out;
  for (const auto& [t, v] : gold.alignment) {
    auto ti = text_index.find(t);
    auto vi = visual_index.find(v);
    if (ti == text_index.end() || vi == visual_index.end()) {
      throw_data("gold alignment names an unknown chain: " + t + "/" + v);
    }
    out.emplace_back(ti->second, vi->second);
  }
  return out;
}

StoryScores score_story(const Prediction& pred, const AnnotatedStory& story,
                        const EvalOptions& options) {
  const GoldAnnotation& gold = *story.gold;
  StoryScores s;
  const ChainMatching text = match_text_chains(story, pred.text_chains, gold.text_chains);
  const ChainMatching visual = match_visual_chains(pred.visual_chains, gold.visual_chains,
                                                   MentionMatcher::face_in_body());
  s.detection_text = detection_counts(text);
  s.detection_visual = detection_counts(visual);
  s.bcubed_text = b_cubed_counts(text);
  s.bcubed_visual = b_cubed_counts(visual);
  s.exact_text = exact_match_counts(text);
  s.exact_visual = exact_match_counts(visual);

  if (pred.alignment) {
    std::vector<IndexPair> pairs;
    for (const auto& p : pred.alignment->pairs) pairs.emplace_back(p.text_index, p.visual_index);
    for (const auto& a : pred.alignment->plural_attachments) {
      pairs.emplace_back(a.text_index, a.visual_index);
    }
    const auto text_map = map_chains(text);
    const auto visual_map = map_chains(visual);
    const auto gold_pairs = gold_pair_indices(gold);
    s.grounding = grounding_counts(pairs, text_map, visual_map, gold_pairs);
  }

  if (options.metrics & kMetricPrecisionAtK) {
    std::vector<CharacterHead> heads;
    for (const MultiModalChain& c : pred.characters) heads.push_back(character_head(story, c));
    const std::vector<GoldCharacter> ranked = gold_ranking(story);
    for (std::size_t k : options.ks) s.pk.push_back(precision_at_k(heads, ranked, k));
  }
  if (options.metrics & kMetricPearson) {
    for (int m = 0; m < 3; ++m) s.pearson[m] = occurrence_correlation(story, kModalities[m]);
  }
  return s;
}

void emit(SectionBuilder& out, const StoryScores& s, const EvalOptions& options) {
  if (options.metrics & kMetricDetection) {
    out.add_pr("detection.text", s.detection_text);
    out.add_pr("detection.visual", s.detection_visual);
  }
  if (options.metrics & kMetricBCubed) {
    out.add_pr("bcubed.text", s.bcubed_text);
    out.add_pr("bcubed.visual", s.bcubed_visual);
  }
  if (options.metrics & kMetricExact) {
    out.add_pr("exact.text", s.exact_text);
    out.add_pr("exact.visual", s.exact_visual);
  }
  if (options.metrics & kMetricGrounding) {
    out.add_pr("grounding", s.grounding.value_or(PRCounts{}));
  }
  if (options.metrics & kMetricPrecisionAtK) {
    for (std::size_t i = 0; i < options.ks.size(); ++i) {
      out.add(pk_name(options.ks[i]), s.pk[i]);
    }
  }
  if (options.metrics & kMetricPearson) {
    for (int m = 0; m < 3; ++m) {
      out.add(std::string("pearson.") + to_string(kModalities[m]), s.pearson[m]);
    }
  }
}

template <typename T>
std::map<std::string, std::size_t> index_by_id(std::span<const T> items,
                                               std::string T::*id, const char* what) {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!out.emplace(items[i].*id, i).second) {
      throw_data(std::string("duplicate ") + what + " story id: " + items[i].*id);
    }
  }
  return out;
}

}  // namespace

EvaluationReport evaluate(std::span<const Prediction> predictions,
                          std::span<const AnnotatedStory> gold,
                          const EvalOptions& options) {
  options.validate();
  const auto pred_index = index_by_id(predictions, &Prediction::story_id, "prediction");
  const auto gold_index = index_by_id(gold, &AnnotatedStory::story_id, "gold");
  for (const auto& [id, i] : pred_index) {
    if (!gold_index.count(id)) throw_data("no gold story for prediction " + id);
  }

  StoryScores total;
  total.grounding.reset();
  std::vector<Mean> pk_mean(options.ks.size());
  Mean pearson_mean[3];
  std::vector<ReportSection> per_story;

  for (const AnnotatedStory& story : gold) {
    auto it = pred_index.find(story.story_id);
    if (it == pred_index.end()) throw_data("no prediction for story " + story.story_id);
    if (!story.gold) throw_data("story " + story.story_id + " has no gold annotation");
    const StoryScores s = score_story(predictions[it->second], story, options);

    total.detection_text += s.detection_text;
    total.detection_visual += s.detection_visual;
    total.bcubed_text += s.bcubed_text;
    total.bcubed_visual += s.bcubed_visual;
    total.exact_text += s.exact_text;
    total.exact_visual += s.exact_visual;
    if (s.grounding) {
      if (!total.grounding) total.grounding = PRCounts{};
      *total.grounding += *s.grounding;
    }
    for (std::size_t i = 0; i < s.pk.size(); ++i) pk_mean[i].add(s.pk[i]);
    for (int m = 0; m < 3; ++m) pearson_mean[m].add(s.pearson[m]);

    SectionBuilder section(story.story_id);
    emit(section, s, options);
    per_story.push_back(section.take());
  }

  for (std::size_t i = 0; i < pk_mean.size(); ++i) total.pk.push_back(pk_mean[i].value());
  for (int m = 0; m < 3; ++m) total.pearson[m] = pearson_mean[m].value();

  EvaluationReport report;
  report.kind = "eval";
  SectionBuilder corpus("corpus");
  corpus.add_count("stories", static_cast<double>(gold.size()));
  emit(corpus, total, options);
  report.sections.push_back(corpus.take());
  for (ReportSection& s : per_story) report.sections.push_back(std::move(s));
  return report;
}

Prediction prediction_from_gold(const AnnotatedStory& story) {
  if (!story.gold) throw_data("story " + story.story_id + " has no gold annotation");
  const GoldAnnotation& gold = *story.gold;
  Prediction pred;
  pred.story_id = story.story_id;
  pred.text_chains = gold.text_chains;
  pred.visual_chains = gold.visual_chains;

  Alignment alignment;
  for (const auto& [t, v] : gold_pair_indices(gold)) {
    const double score = chain_similarity(gold.text_chains[t], gold.visual_chains[v],
                                          story.length(), nullptr,
                                          SimilarityMethod::kDistributional);
    alignment.pairs.push_back({t, v, score});
  }
  pred.alignment = std::move(alignment);

  std::vector<GoldCharacter> characters = gold_characters(story);
  std::stable_sort(characters.begin(), characters.end(),
                   [](const GoldCharacter& a, const GoldCharacter& b) {
                     return a.stars.value_or(0) > b.stars.value_or(0);
                   });
  pred.ranking_modality = Modality::kMulti;
  for (GoldCharacter& c : characters) pred.characters.push_back(std::move(c.chain));
  return pred;
}

EvaluationReport agreement_report(std::span<const AnnotatedStory> a,
                                  std::span<const AnnotatedStory> b) {
  const auto a_index = index_by_id(a, &AnnotatedStory::story_id, "reference");
  const auto b_index = index_by_id(b, &AnnotatedStory::story_id, "compared");
  if (a_index.size() != b_index.size()) throw_data("annotations cover different stories");
  for (const auto& [id, i] : a_index) {
    if (!b_index.count(id)) throw_data("story " + id + " missing from the second annotation");
  }

  PRCounts detection, bcubed, exact, boxes;
  Mean importance;
  const MentionMatcher box_matcher = MentionMatcher::box_iou(0.6);
  EvaluationReport report;
  report.kind = "agreement";
  std::vector<ReportSection> per_story;

  for (const AnnotatedStory& ref : a) {
    const AnnotatedStory& other = b[b_index.at(ref.story_id)];
    if (!ref.gold || !other.gold) {
      throw_data("story " + ref.story_id + " lacks an annotation on one side");
    }
    if (ref.sentences != other.sentences || ref.images != other.images) {
      throw_data("story " + ref.story_id + " differs in text or images between annotations");
    }
    const ChainMatching text =
        match_text_chains(ref, other.gold->text_chains, ref.gold->text_chains);
    const ChainMatching visual = match_visual_chains(
        other.gold->visual_chains, ref.gold->visual_chains, box_matcher);
    const PRCounts d = detection_counts(text);
    const PRCounts bc = b_cubed_counts(text);
    const PRCounts ex = exact_match_counts(text);
    const PRCounts bx = detection_counts(visual);

    std::vector<CharacterHead> heads;
    for (const GoldCharacter& c : gold_ranking(other)) heads.push_back(c.head);
    const std::vector<GoldCharacter> ref_ranked = gold_ranking(ref);
    std::optional<double> top1;
    if (!heads.empty()) top1 = precision_at_k(heads, ref_ranked, 1);

    detection += d;
    bcubed += bc;
    exact += ex;
    boxes += bx;
    importance.add(top1);

    SectionBuilder s(ref.story_id);
    s.add_pr("detection", d);
    s.add_pr("bcubed", bc);
    s.add_pr("exact", ex);
    s.add_pr("bbox", bx);
    s.add("importance.recall", top1);
    per_story.push_back(s.take());
  }

  SectionBuilder corpus("corpus");
  corpus.add_count("stories", static_cast<double>(a.size()));
  corpus.add_pr("detection", detection);
  corpus.add_pr("bcubed", bcubed);
  corpus.add_pr("exact", exact);
  corpus.add_pr("bbox", boxes);
  corpus.add("importance.recall", importance.value());
  report.sections.push_back(corpus.take());
  for (ReportSection& s : per_story) report.sections.push_back(std::move(s));
  return report;
}

EvaluationReport dataset_stats(std::span<const AnnotatedStory> corpus) {
  std::size_t characters = 0;
  std::size_t plural_group = 0;
  std::size_t boxes = 0;
  std::size_t text_chains = 0;
  std::size_t mentions = 0;
  std::size_t visual_chains = 0;
  for (const AnnotatedStory& story : corpus) {
    if (!story.gold) throw_data("story " + story.story_id + " has no gold annotation");
    characters += gold_characters(story).size();
    for (const TextChain& t : story.gold->text_chains) {
      ++text_chains;
      mentions += t.mentions.size();
      if (!t.is_singular()) ++plural_group;
    }
    for (const VisualChain& v : story.gold->visual_chains) {
      ++visual_chains;
      boxes += v.faces.size();
    }
  }
  auto mean = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };

  SectionBuilder s("corpus");
  s.add_count("stories", static_cast<double>(corpus.size()));
  s.add_count("characters", static_cast<double>(characters));
  s.add_count("plural_group_characters", static_cast<double>(plural_group));
  s.add_count("bounding_boxes", static_cast<double>(boxes));
  s.add("mean_boxes_per_story", mean(boxes, corpus.size()));
  s.add("mean_characters_per_story", mean(characters, corpus.size()));
  s.add("mean_text_chain_length", mean(mentions, text_chains));
  s.add("mean_visual_chain_length", mean(boxes, visual_chains));

  EvaluationReport report;
  report.kind = "stats";
  report.sections.push_back(s.take());
  return report;
}

EvaluationReport prediction_summary(const Prediction& prediction) {
  SectionBuilder s(prediction.story_id);
  s.add_count("text_chains", static_cast<double>(prediction.text_chains.size()));
  s.add_count("visual_chains", static_cast<double>(prediction.visual_chains.size()));
  const Alignment empty;
  const Alignment& a = prediction.alignment ? *prediction.alignment : empty;
  s.add_count("pairs", static_cast<double>(a.pairs.size()));
  s.add_count("plural_attachments", static_cast<double>(a.plural_attachments.size()));
  s.add_count("characters", static_cast<double>(prediction.characters.size()));
  if (!prediction.characters.empty()) {
    s.add_count("protagonist_importance",
                static_cast<double>(prediction.characters.front().importance));
  }
  EvaluationReport report;
  report.kind = "summary";
  report.sections.push_back(s.take());
  return report;
}

}  // namespace charground
