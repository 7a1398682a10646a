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

// Scoring predicted characters against gold annotations: detection,
// co-reference (B-Cubed, exact match), grounding, Precision@k and the
// occurrence/importance correlation.
//
// Chain-level metrics first establish mention identity between predicted and
// gold items (a text mention by sentence and head word, a face by lying
// inside a gold body box, or a box by IoU). Each gold item is consumed at
// most once. Unmatched predicted items are spurious, unmatched gold items
// are missed; both stay in the denominators.

#ifndef CHARGROUND_METRICS_HPP_
#define CHARGROUND_METRICS_HPP_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "charground/model.hpp"

namespace charground {

/// num / den with an absent value when den == 0. Summing ratios across
/// stories gives micro-averaged corpus scores.
struct Ratio {
  double num = 0;
  double den = 0;

  std::optional<double> value() const {
    if (den == 0) return std::nullopt;
    return num / den;
  }
  Ratio& operator+=(const Ratio& o) {
    num += o.num;
    den += o.den;
    return *this;
  }
};

struct PrecisionRecall {
  std::optional<double> precision;
  std::optional<double> recall;
};

struct PRCounts {
  Ratio precision;
  Ratio recall;

  PrecisionRecall value() const { return {precision.value(), recall.value()}; }
  PRCounts& operator+=(const PRCounts& o) {
    precision += o.precision;
    recall += o.recall;
    return *this;
  }
};

double iou(const BoundingBox& a, const BoundingBox& b);
/// Boundary-inclusive containment.
bool box_inside(const BoundingBox& inner, const BoundingBox& outer);

struct MentionMatcher {
  enum class Mode { kTextHeadWord, kVisualFaceInBody, kBoxIoU };

  Mode mode = Mode::kTextHeadWord;
  double iou_threshold = 0.6;  // kBoxIoU: match needs IoU > threshold

  static MentionMatcher text_head_word() { return {Mode::kTextHeadWord, 0.6}; }
  static MentionMatcher face_in_body() { return {Mode::kVisualFaceInBody, 0.6}; }
  static MentionMatcher box_iou(double threshold) { return {Mode::kBoxIoU, threshold}; }

  void validate() const;
};

/// Flattened items of both chain sets plus the item-level correspondence.
struct ChainMatching {
  std::vector<std::size_t> pred_chain_of;  // chain index of each predicted item
  std::vector<std::size_t> gold_chain_of;  // chain index of each gold item
  std::vector<std::optional<std::size_t>> gold_of_pred;
  std::size_t pred_chains = 0;
  std::size_t gold_chains = 0;
};

/// Text mentions match on (sentence, head word); a candidate with the same
/// head token is preferred, otherwise the earliest unconsumed one.
ChainMatching match_text_chains(const AnnotatedStory& story,
                                std::span<const TextChain> predicted,
                                std::span<const TextChain> gold);

/// Boxes match in the same image by containment (tightest gold box wins) or
/// by IoU (highest IoU wins).
ChainMatching match_visual_chains(std::span<const VisualChain> predicted,
                                  std::span<const VisualChain> gold,
                                  const MentionMatcher& matcher);

PRCounts detection_counts(const ChainMatching& m);
PRCounts b_cubed_counts(const ChainMatching& m);
PRCounts exact_match_counts(const ChainMatching& m);

PrecisionRecall detection_pr(const AnnotatedStory& story,
                             std::span<const TextChain> predicted,
                             std::span<const TextChain> gold);
PrecisionRecall detection_pr(std::span<const VisualChain> predicted,
                             std::span<const VisualChain> gold,
                             const MentionMatcher& matcher);
PrecisionRecall b_cubed(const AnnotatedStory& story,
                        std::span<const TextChain> predicted,
                        std::span<const TextChain> gold);
PrecisionRecall b_cubed(std::span<const VisualChain> predicted,
                        std::span<const VisualChain> gold,
                        const MentionMatcher& matcher);
PrecisionRecall exact_match(const AnnotatedStory& story,
                            std::span<const TextChain> predicted,
                            std::span<const TextChain> gold);
PrecisionRecall exact_match(std::span<const VisualChain> predicted,
                            std::span<const VisualChain> gold,
                            const MentionMatcher& matcher);

/// Maps each predicted chain to the gold chain holding most of its matched
/// items; ties and chains with no matched item map to nothing.
std::vector<std::optional<std::size_t>> map_chains(const ChainMatching& m);

using IndexPair = std::pair<std::size_t, std::size_t>;

/// A predicted (text, visual) link is correct when its mapped gold chains form
/// a gold alignment pair.
PRCounts grounding_counts(std::span<const IndexPair> predicted_pairs,
                          std::span<const std::optional<std::size_t>> text_map,
                          std::span<const std::optional<std::size_t>> visual_map,
                          std::span<const IndexPair> gold_pairs);

/// What Precision@k compares: the head word of the first textual mention or,
/// for chains without text, the first face or body box.
struct CharacterHead {
  std::optional<std::string> head_word;
  std::optional<std::pair<std::size_t, BoundingBox>> head_box;
};

CharacterHead character_head(const AnnotatedStory& story, const MultiModalChain& chain);

/// Head words must be equal when the predicted chain has text; a text-less
/// predicted chain matches a text-less gold chain when its first face lies
/// inside the gold head box.
bool heads_match(const CharacterHead& predicted, const CharacterHead& gold);

struct GoldCharacter {
  MultiModalChain chain;  // chain_id is the text chain id, else the visual one
  std::optional<int> stars;
  CharacterHead head;
};

/// Gold characters in first-occurrence order: every text chain with its
/// aligned visual chain, then unaligned visual chains.
std::vector<GoldCharacter> gold_characters(const AnnotatedStory& story);

/// Gold characters with stars, sorted by stars (ties keep first occurrence).
std::vector<GoldCharacter> gold_ranking(const AnnotatedStory& story);

/// Size of a maximum head matching between predicted top-k and gold top-k,
/// divided by k, with k clipped to the
/// number of gold characters. Absent when the gold list is empty; a
/// parameter error when k == 0.
std::optional<double> precision_at_k(std::span<const CharacterHead> predicted_ranking,
                                     std::span<const GoldCharacter> gold_ranked,
                                     std::size_t k);

/// Absent when n < 2 or either side is constant. Throws a parameter error on
/// a length mismatch.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Correlation between gold chain length and stars over one story's
/// characters present in `modality`.
std::optional<double> occurrence_correlation(const AnnotatedStory& story,
                                             Modality modality);

}  // namespace charground

#endif  // CHARGROUND_METRICS_HPP_
