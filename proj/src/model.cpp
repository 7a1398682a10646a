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
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace charground {

const char* to_string(Number number) {
  switch (number) {
    case Number::kSingular:
      return "singular";
    case Number::kPlural:
      return "plural";
    case Number::kGroup:
      return "group";
  }
  return "singular";
}

const char* to_string(MentionKind kind) {
  return kind == MentionKind::kPronoun ? "pronoun" : "noun";
}

std::optional<Number> parse_number(std::string_view text) {
  if (text == "singular") return Number::kSingular;
  if (text == "plural") return Number::kPlural;
  if (text == "group") return Number::kGroup;
  return std::nullopt;
}

const char* to_string(Modality modality) {
  switch (modality) {
    case Modality::kText:
      return "text";
    case Modality::kImage:
      return "image";
    case Modality::kMulti:
      return "multi";
  }
  return "multi";
}

std::optional<Modality> parse_modality(std::string_view text) {
  if (text == "text") return Modality::kText;
  if (text == "image") return Modality::kImage;
  if (text == "multi") return Modality::kMulti;
  return std::nullopt;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

bool mention_before(const Mention& a, const Mention& b) {
  return std::tie(a.sentence_index, a.token_start, a.token_end) <
         std::tie(b.sentence_index, b.token_start, b.token_end);
}

bool face_before(const FaceInstance& a, const FaceInstance& b) {
  return std::tie(a.image_index, a.box.x, a.box.y, a.box.w, a.box.h) <
         std::tie(b.image_index, b.box.x, b.box.y, b.box.w, b.box.h);
}

Number chain_number(const std::vector<Mention>& mentions) {
  Number result = Number::kSingular;
  for (const Mention& m : mentions) {
    if (m.number == Number::kGroup) return Number::kGroup;
    if (m.number == Number::kPlural) result = Number::kPlural;
  }
  return result;
}

MultiModalChain make_multimodal(std::string chain_id,
                                std::optional<TextChain> text,
                                std::vector<const VisualChain*> visual) {
  MultiModalChain chain;
  chain.chain_id = std::move(chain_id);
  chain.text = std::move(text);
  if (!visual.empty()) {
    VisualChain merged;
    for (const VisualChain* v : visual) {
      if (!merged.chain_id.empty()) merged.chain_id += "+";
      merged.chain_id += v->chain_id;
      chain.visual_chain_ids.push_back(v->chain_id);
      merged.faces.insert(merged.faces.end(), v->faces.begin(), v->faces.end());
    }
    std::stable_sort(merged.faces.begin(), merged.faces.end(), face_before);
    chain.visual = std::move(merged);
  }
  chain.importance = (chain.text ? chain.text->mentions.size() : 0) +
                     (chain.visual ? chain.visual->faces.size() : 0);
  return chain;
}

const std::vector<float>* EmbeddingTable::face(std::size_t image_index,
                                               const BoundingBox& box) const {
  auto it = faces.find(key(image_index, box));
  return it == faces.end() ? nullptr : &it->second;
}

const std::vector<float>* EmbeddingTable::mention(
    const std::string& surface) const {
  auto it = mentions.find(surface);
  if (it == mentions.end()) it = mentions.find(to_lower(surface));
  return it == mentions.end() ? nullptr : &it->second;
}

std::vector<FaceInstance> EmbeddingTable::face_instances() const {
  std::vector<FaceInstance> out;
  out.reserve(faces.size());
  for (const auto& [k, vec] : faces) {
    FaceInstance f;
    f.image_index = std::get<0>(k);
    f.box = {std::get<1>(k), std::get<2>(k), std::get<3>(k), std::get<4>(k)};
    f.embedding = vec;
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

class Violations {
 public:
  template <typename... Args>
  void add(Args&&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    items_.push_back(os.str());
  }
  std::vector<std::string> take() { return std::move(items_); }

 private:
  std::vector<std::string> items_;
};

void check_box(const AnnotatedStory& story, std::size_t image_index,
               const BoundingBox& box, const std::string& where,
               Violations& out) {
  if (!(box.w > 0) || !(box.h > 0)) {
    out.add("degenerate bounding box: ", where);
    return;
  }
  if (!std::isfinite(box.x) || !std::isfinite(box.y) ||
      !std::isfinite(box.w) || !std::isfinite(box.h)) {
    out.add("non-finite bounding box: ", where);
    return;
  }
  if (image_index >= story.images.size()) {
    out.add("image index out of range: ", where);
    return;
  }
  const ImageDesc& img = story.images[image_index];
  if (box.x < 0 || box.y < 0 || box.x + box.w > img.width ||
      box.y + box.h > img.height) {
    out.add("bounding box outside image bounds: ", where);
  }
}

void check_text_chain(const AnnotatedStory& story, const TextChain& chain,
                      Violations& out) {
  const std::string where = "text chain " + chain.chain_id;
  if (chain.chain_id.empty()) out.add("empty chain id");
  if (chain.mentions.empty()) {
    out.add("empty text chain: ", where);
    return;
  }
  for (std::size_t i = 0; i < chain.mentions.size(); ++i) {
    const Mention& m = chain.mentions[i];
    if (m.sentence_index >= story.length()) {
      out.add("mention sentence index out of range: ", where, " mention ", i);
      continue;
    }
    const auto ntok = story.sentences[m.sentence_index].tokens.size();
    if (m.token_start >= m.token_end) {
      out.add("empty mention span: ", where, " mention ", i);
    } else if (m.token_end > ntok) {
      out.add("mention span outside sentence: ", where, " mention ", i);
    }
    if (i > 0 && !mention_before(chain.mentions[i - 1], m)) {
      out.add("mentions not in story order: ", where);
    }
  }
  if (chain.number != chain_number(chain.mentions)) {
    out.add("chain number inconsistent with mentions: ", where);
  }
}

void check_visual_chain(const AnnotatedStory& story, const VisualChain& chain,
                        std::optional<std::size_t>& dim, Violations& out) {
  const std::string where = "visual chain " + chain.chain_id;
  if (chain.chain_id.empty()) out.add("empty chain id");
  if (chain.faces.empty()) {
    out.add("empty visual chain: ", where);
    return;
  }
  for (std::size_t i = 0; i < chain.faces.size(); ++i) {
    const FaceInstance& f = chain.faces[i];
    check_box(story, f.image_index, f.box, where + " box " + std::to_string(i),
              out);
    if (!f.embedding.empty()) {
      if (dim && *dim != f.embedding.size()) {
        out.add("embedding dimension mismatch: ", where);
      }
      dim = f.embedding.size();
      for (float v : f.embedding) {
        if (!std::isfinite(v)) {
          out.add("non-finite embedding value: ", where);
          break;
        }
      }
    }
  }
}

}  // namespace

std::vector<std::string> validate_story(const AnnotatedStory& story) {
  Violations out;
  if (story.story_id.empty()) out.add("missing story id");
  if (story.sentences.empty()) out.add("story has no sentences");
  if (story.sentences.size() != story.images.size()) {
    out.add("sentence/image count mismatch");
  }
  for (std::size_t i = 0; i < story.sentences.size(); ++i) {
    const Sentence& s = story.sentences[i];
    if (s.index != i) out.add("sentence index not contiguous at position ", i);
    std::size_t prev_end = 0;
    for (std::size_t t = 0; t < s.tokens.size(); ++t) {
      const Token& tok = s.tokens[t];
      if (tok.char_start >= tok.char_end) {
        out.add("empty token span: sentence ", i, " token ", t);
      } else if (tok.char_end > s.text.size()) {
        out.add("token outside sentence text: sentence ", i, " token ", t);
      } else if (tok.char_start < prev_end) {
        out.add("overlapping tokens: sentence ", i, " token ", t);
      }
      prev_end = std::max(prev_end, tok.char_end);
    }
  }
  for (std::size_t i = 0; i < story.images.size(); ++i) {
    const ImageDesc& img = story.images[i];
    if (img.index != i) out.add("image index not contiguous at position ", i);
    if (img.width <= 0 || img.height <= 0) {
      out.add("non-positive image size: image ", i);
    }
  }
  if (!story.gold) return out.take();

  const GoldAnnotation& gold = *story.gold;
  std::set<std::string> text_ids;
  std::set<std::string> visual_ids;
  for (const TextChain& c : gold.text_chains) {
    check_text_chain(story, c, out);
    if (!text_ids.insert(c.chain_id).second) {
      out.add("duplicate chain id: ", c.chain_id);
    }
  }
  std::optional<std::size_t> dim;
  for (const VisualChain& c : gold.visual_chains) {
    check_visual_chain(story, c, dim, out);
    if (text_ids.count(c.chain_id) || !visual_ids.insert(c.chain_id).second) {
      out.add("duplicate chain id: ", c.chain_id);
    }
  }
  std::set<std::string> aligned_text;
  std::set<std::string> aligned_visual;
  for (const auto& [t, v] : gold.alignment) {
    if (!text_ids.count(t)) out.add("alignment references unknown text chain: ", t);
    if (!visual_ids.count(v)) {
      out.add("alignment references unknown visual chain: ", v);
    }
    if (!aligned_text.insert(t).second) {
      out.add("text chain aligned more than once: ", t);
    }
    if (!aligned_visual.insert(v).second) {
      out.add("visual chain aligned more than once: ", v);
    }
  }
  for (const auto& [id, stars] : gold.importance) {
    if (!text_ids.count(id) && !visual_ids.count(id)) {
      out.add("importance references unknown chain: ", id);
    }
    if (stars < 1 || stars > 5) out.add("stars out of range: ", id);
  }
  return out.take();
}

std::vector<std::string> validate_prediction(const Prediction& prediction,
                                             const AnnotatedStory& story) {
  Violations out;
  std::set<std::string> ids;
  for (const TextChain& c : prediction.text_chains) {
    check_text_chain(story, c, out);
    if (!ids.insert(c.chain_id).second) out.add("duplicate chain id: ", c.chain_id);
  }
  std::optional<std::size_t> dim;
  for (const VisualChain& c : prediction.visual_chains) {
    check_visual_chain(story, c, dim, out);
    if (!ids.insert(c.chain_id).second) out.add("duplicate chain id: ", c.chain_id);
  }
  if (prediction.alignment) {
    const auto nt = prediction.text_chains.size();
    const auto nv = prediction.visual_chains.size();
    std::set<std::size_t> rows;
    std::set<std::size_t> cols;
    for (const auto& p : prediction.alignment->pairs) {
      if (p.text_index >= nt || p.visual_index >= nv) {
        out.add("alignment index out of range");
        continue;
      }
      if (!rows.insert(p.text_index).second || !cols.insert(p.visual_index).second) {
        out.add("alignment is not one-to-one");
      }
      if (!(p.score >= 0 && p.score <= 1)) out.add("alignment score outside [0,1]");
    }
    for (const auto& a : prediction.alignment->plural_attachments) {
      if (a.text_index >= nt || a.visual_index >= nv) {
        out.add("plural attachment index out of range");
      } else if (cols.count(a.visual_index)) {
        out.add("visual chain both paired and attached");
      }
    }
  }
  for (const MultiModalChain& m : prediction.characters) {
    if (!m.text && !m.visual) out.add("character without chains: ", m.chain_id);
    const std::size_t recount = (m.text ? m.text->mentions.size() : 0) +
                                (m.visual ? m.visual->faces.size() : 0);
    if (recount != m.importance) {
      out.add("importance does not match chain lengths: ", m.chain_id);
    }
  }
  return out.take();
}

}  // namespace charground
