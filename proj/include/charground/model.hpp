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

// Domain types shared by every stage of the character pipeline: stories,
// textual and visual co-reference chains, multimodal characters and the
// gold annotation block.
//
// Indices are 0-based. Token spans are half-open [start, end) over token
// indices; character offsets are half-open over the UTF-8 bytes of the
// sentence text.

#ifndef CHARGROUND_MODEL_HPP_
#define CHARGROUND_MODEL_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace charground {

enum class Number { kSingular, kPlural, kGroup };
enum class MentionKind { kNoun, kPronoun };

const char* to_string(Number number);
const char* to_string(MentionKind kind);
std::optional<Number> parse_number(std::string_view text);

struct Token {
  std::string text;
  std::string pos;  // Penn Treebank tag
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::size_t index = 0;
  std::string text;
  std::vector<Token> tokens;

  bool operator==(const Sentence&) const = default;
};

struct ImageDesc {
  std::size_t index = 0;
  int width = 0;
  int height = 0;

  bool operator==(const ImageDesc&) const = default;
};

struct BoundingBox {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  double area() const { return w * h; }
  bool operator==(const BoundingBox&) const = default;
  auto operator<=>(const BoundingBox&) const = default;
};

struct Mention {
  std::size_t sentence_index = 0;
  std::size_t token_start = 0;
  std::size_t token_end = 0;
  std::string surface;
  Number number = Number::kSingular;
  MentionKind kind = MentionKind::kNoun;

  bool operator==(const Mention&) const = default;
};

/// Story-order comparison: (sentence_index, token_start).
bool mention_before(const Mention& a, const Mention& b);

struct TextChain {
  std::string chain_id;
  std::vector<Mention> mentions;
  Number number = Number::kSingular;

  bool is_singular() const { return number == Number::kSingular; }
  bool operator==(const TextChain&) const = default;
};

/// Group dominates Plural, Plural dominates Singular.
Number chain_number(const std::vector<Mention>& mentions);

struct FaceInstance {
  std::size_t image_index = 0;
  BoundingBox box;
  std::vector<float> embedding;  // empty for gold body boxes

  bool operator==(const FaceInstance&) const = default;
};

/// Orders faces by image index, then box position.
bool face_before(const FaceInstance& a, const FaceInstance& b);

struct VisualChain {
  std::string chain_id;
  std::vector<FaceInstance> faces;

  bool operator==(const VisualChain&) const = default;
};

/// A character after grounding. `visual` is the union of every visual chain
/// merged into this character; `visual_chain_ids` names those chains.
struct MultiModalChain {
  std::string chain_id;
  std::optional<TextChain> text;
  std::optional<VisualChain> visual;
  std::vector<std::string> visual_chain_ids;
  std::size_t importance = 0;

  bool operator==(const MultiModalChain&) const = default;
};

/// Builds a character and sets importance = |mentions| + |faces|.
MultiModalChain make_multimodal(std::string chain_id,
                                std::optional<TextChain> text,
                                std::vector<const VisualChain*> visual);

struct GoldAnnotation {
  std::vector<TextChain> text_chains;
  std::vector<VisualChain> visual_chains;
  std::vector<std::pair<std::string, std::string>> alignment;
  std::map<std::string, int> importance;  // chain id -> stars in [1, 5]

  bool operator==(const GoldAnnotation&) const = default;
};

struct AnnotatedStory {
  std::string story_id;
  std::vector<Sentence> sentences;
  std::vector<ImageDesc> images;
  std::optional<GoldAnnotation> gold;

  std::size_t length() const { return sentences.size(); }
  bool operator==(const AnnotatedStory&) const = default;
};

/// Dense row-major similarity matrix, entries in [0, 1].
struct SimilarityMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  SimilarityMatrix() = default;
  SimilarityMatrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), values(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// Result of grounding. Indices refer to the full text/visual chain lists.
struct Alignment {
  struct Pair {
    std::size_t text_index = 0;
    std::size_t visual_index = 0;
    double score = 0;
    bool operator==(const Pair&) const = default;
  };
  struct Attachment {
    std::size_t visual_index = 0;
    std::size_t text_index = 0;
    double score = 0;
    bool operator==(const Attachment&) const = default;
  };

  std::vector<Pair> pairs;
  std::vector<Attachment> plural_attachments;

  bool operator==(const Alignment&) const = default;
};

/// Face and mention vectors supplied by an external feature extractor.
struct EmbeddingTable {
  using FaceKey = std::tuple<std::size_t, double, double, double, double>;

  std::size_t dim = 0;
  std::map<FaceKey, std::vector<float>> faces;
  std::map<std::string, std::vector<float>> mentions;

  static FaceKey key(std::size_t image_index, const BoundingBox& box) {
    return {image_index, box.x, box.y, box.w, box.h};
  }
  const std::vector<float>* face(std::size_t image_index,
                                 const BoundingBox& box) const;
  /// Exact surface first, then its lowercase form.
  const std::vector<float>* mention(const std::string& surface) const;
  /// Faces in key order, embeddings attached.
  std::vector<FaceInstance> face_instances() const;

  bool operator==(const EmbeddingTable&) const = default;
};

enum class Modality { kText, kImage, kMulti };

const char* to_string(Modality modality);
std::optional<Modality> parse_modality(std::string_view text);

/// Output of the pipeline stages for one story. Each stage fills in more of
/// it; `characters` is kept in rank order.
struct Prediction {
  std::string story_id;
  std::vector<TextChain> text_chains;
  std::vector<VisualChain> visual_chains;
  std::optional<Alignment> alignment;
  std::optional<Modality> ranking_modality;
  std::vector<MultiModalChain> characters;

  bool operator==(const Prediction&) const = default;
};

/// Checks every model invariant; one human-readable entry per violation.
std::vector<std::string> validate_story(const AnnotatedStory& story);

/// Checks chain invariants of a prediction against its story.
std::vector<std::string> validate_prediction(const Prediction& prediction,
                                             const AnnotatedStory& story);

std::string to_lower(std::string_view text);

}  // namespace charground

#endif  // CHARGROUND_MODEL_HPP_
