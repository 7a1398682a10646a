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
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "charground/error.hpp"
#include "charground/ranking.hpp"
#include "charground/textchars.hpp"

namespace charground {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

bool box_inside(const BoundingBox& inner, const BoundingBox& outer) {
  return inner.x >= outer.x && inner.y >= outer.y &&
         inner.x + inner.w <= outer.x + outer.w &&
         inner.y + inner.h <= outer.y + outer.h;
}

void MentionMatcher::validate() const {
  if (mode == Mode::kBoxIoU && !(iou_threshold > 0 && iou_threshold <= 1)) {
    throw_parameter("IoU threshold must lie in (0, 1]");
  }
}

namespace {

struct TextItem {
  std::size_t chain = 0;
  std::size_t sentence = 0;
  std::size_t token_start = 0;
  std::size_t head = 0;
  std::string word;
};

std::vector<TextItem> text_items(const AnnotatedStory& story,
                                 std::span<const TextChain> chains) {
  std::vector<TextItem> out;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (const Mention& m : chains[c].mentions) {
      out.push_back({c, m.sentence_index, m.token_start, head_token(story, m),
                     head_word(story, m)});
    }
  }
  return out;
}

struct BoxItem {
  std::size_t chain = 0;
  std::size_t image = 0;
  BoundingBox box;
};

std::vector<BoxItem> box_items(std::span<const VisualChain> chains) {
  std::vector<BoxItem> out;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (const FaceInstance& f : chains[c].faces) {
      out.push_back({c, f.image_index, f.box});
    }
  }
  return out;
}

template <typename Item>
ChainMatching skeleton(const std::vector<Item>& pred, const std::vector<Item>& gold,
                       std::size_t pred_chains, std::size_t gold_chains) {
  ChainMatching m;
  for (const Item& i : pred) m.pred_chain_of.push_back(i.chain);
  for (const Item& i : gold) m.gold_chain_of.push_back(i.chain);
  m.gold_of_pred.assign(pred.size(), std::nullopt);
  m.pred_chains = pred_chains;
  m.gold_chains = gold_chains;
  return m;
}

}  // namespace

ChainMatching match_text_chains(const AnnotatedStory& story,
                                std::span<const TextChain> predicted,
                                std::span<const TextChain> gold) {
  const auto pred = text_items(story, predicted);
  const auto ref = text_items(story, gold);
  ChainMatching m = skeleton(pred, ref, predicted.size(), gold.size());

  std::vector<std::size_t> order(pred.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(pred[a].sentence, pred[a].token_start) <
           std::tie(pred[b].sentence, pred[b].token_start);
  });

  std::vector<bool> used(ref.size(), false);
  for (std::size_t p : order) {
    std::optional<std::size_t> pick;
    for (std::size_t g = 0; g < ref.size(); ++g) {
      if (used[g] || ref[g].sentence != pred[p].sentence || ref[g].word != pred[p].word) {
        continue;
      }
      if (ref[g].head == pred[p].head) {
        pick = g;
        break;
      }
      if (!pick || std::tie(ref[g].sentence, ref[g].token_start) <
                       std::tie(ref[*pick].sentence, ref[*pick].token_start)) {
        pick = g;
      }
    }
    if (pick) {
      used[*pick] = true;
      m.gold_of_pred[p] = pick;
    }
  }
  return m;
}

ChainMatching match_visual_chains(std::span<const VisualChain> predicted,
                                  std::span<const VisualChain> gold,
                                  const MentionMatcher& matcher) {
  matcher.validate();
  if (matcher.mode == MentionMatcher::Mode::kTextHeadWord) {
    throw_parameter("text matcher used on visual chains");
  }
  const auto pred = box_items(predicted);
  const auto ref = box_items(gold);
  ChainMatching m = skeleton(pred, ref, predicted.size(), gold.size());

  std::vector<std::size_t> order(pred.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(pred[a].image, pred[a].box) < std::tie(pred[b].image, pred[b].box);
  });

  const bool by_iou = matcher.mode == MentionMatcher::Mode::kBoxIoU;
  std::vector<bool> used(ref.size(), false);
  for (std::size_t p : order) {
    std::optional<std::size_t> pick;
    double pick_score = 0;
    for (std::size_t g = 0; g < ref.size(); ++g) {
      if (used[g] || ref[g].image != pred[p].image) continue;
      if (by_iou) {
        const double s = iou(pred[p].box, ref[g].box);
        if (s > matcher.iou_threshold && (!pick || s > pick_score)) {
          pick = g;
          pick_score = s;
        }
      } else if (box_inside(pred[p].box, ref[g].box)) {
        const double area = ref[g].box.area();
        if (!pick || area < pick_score) {
          pick = g;
          pick_score = area;
        }
      }
    }
    if (pick) {
      used[*pick] = true;
      m.gold_of_pred[p] = pick;
    }
  }
  return m;
}

PRCounts detection_counts(const ChainMatching& m) {
  PRCounts c;
  const auto matched = static_cast<double>(std::count_if(
      m.gold_of_pred.begin(), m.gold_of_pred.end(), [](const auto& g) { return g.has_value(); }));
  c.precision = {matched, static_cast<double>(m.gold_of_pred.size())};
  c.recall = {matched, static_cast<double>(m.gold_chain_of.size())};
  return c;
}

PRCounts b_cubed_counts(const ChainMatching& m) {
  const std::size_t np = m.pred_chain_of.size();
  const std::size_t ng = m.gold_chain_of.size();
  std::vector<std::size_t> pred_size(m.pred_chains, 0);
  std::vector<std::size_t> gold_size(m.gold_chains, 0);
  for (std::size_t c : m.pred_chain_of) ++pred_size[c];
  for (std::size_t c : m.gold_chain_of) ++gold_size[c];

  // overlap[(p, g)] = number of matched pairs between predicted chain p and
  // gold chain g
  std::map<IndexPair, std::size_t> overlap;
  std::vector<std::optional<std::size_t>> pred_of_gold(ng);
  for (std::size_t i = 0; i < np; ++i) {
    if (!m.gold_of_pred[i]) continue;
    const std::size_t g = *m.gold_of_pred[i];
    pred_of_gold[g] = i;
    ++overlap[{m.pred_chain_of[i], m.gold_chain_of[g]}];
  }

  PRCounts c;
  c.precision.den = static_cast<double>(np);
  for (std::size_t i = 0; i < np; ++i) {
    if (!m.gold_of_pred[i]) continue;
    const std::size_t pc = m.pred_chain_of[i];
    const std::size_t gc = m.gold_chain_of[*m.gold_of_pred[i]];
    c.precision.num += static_cast<double>(overlap[{pc, gc}]) / pred_size[pc];
  }
  c.recall.den = static_cast<double>(ng);
  for (std::size_t g = 0; g < ng; ++g) {
    if (!pred_of_gold[g]) continue;
    const std::size_t pc = m.pred_chain_of[*pred_of_gold[g]];
    const std::size_t gc = m.gold_chain_of[g];
    c.recall.num += static_cast<double>(overlap[{pc, gc}]) / gold_size[gc];
  }
  return c;
}

PRCounts exact_match_counts(const ChainMatching& m) {
  std::vector<std::size_t> gold_size(m.gold_chains, 0);
  for (std::size_t c : m.gold_chain_of) ++gold_size[c];

  // Per predicted chain: the single gold chain all its items map to, and how
  // many items it has; nullopt once an item is unmatched or maps elsewhere.
  std::vector<std::optional<std::size_t>> target(m.pred_chains);
  std::vector<bool> broken(m.pred_chains, false);
  std::vector<std::size_t> size(m.pred_chains, 0);
  for (std::size_t i = 0; i < m.pred_chain_of.size(); ++i) {
    const std::size_t pc = m.pred_chain_of[i];
    ++size[pc];
    if (!m.gold_of_pred[i]) {
      broken[pc] = true;
      continue;
    }
    const std::size_t gc = m.gold_chain_of[*m.gold_of_pred[i]];
    if (target[pc] && *target[pc] != gc) broken[pc] = true;
    target[pc] = gc;
  }

  PRCounts c;
  std::set<std::size_t> covered;
  for (std::size_t pc = 0; pc < m.pred_chains; ++pc) {
    if (broken[pc] || !target[pc] || size[pc] != gold_size[*target[pc]]) continue;
    c.precision.num += 1;
    covered.insert(*target[pc]);
  }
  c.precision.den = static_cast<double>(m.pred_chains);
  c.recall = {static_cast<double>(covered.size()), static_cast<double>(m.gold_chains)};
  return c;
}

PrecisionRecall detection_pr(const AnnotatedStory& story,
                             std::span<const TextChain> predicted,
                             std::span<const TextChain> gold) {
  return detection_counts(match_text_chains(story, predicted, gold)).value();
}

PrecisionRecall detection_pr(std::span<const VisualChain> predicted,
                             std::span<const VisualChain> gold,
                             const MentionMatcher& matcher) {
  return detection_counts(match_visual_chains(predicted, gold, matcher)).value();
}

PrecisionRecall b_cubed(const AnnotatedStory& story,
                        std::span<const TextChain> predicted,
                        std::span<const TextChain> gold) {
  return b_cubed_counts(match_text_chains(story, predicted, gold)).value();
}

PrecisionRecall b_cubed(std::span<const VisualChain> predicted,
                        std::span<const VisualChain> gold,
                        const MentionMatcher& matcher) {
  return b_cubed_counts(match_visual_chains(predicted, gold, matcher)).value();
}

PrecisionRecall exact_match(const AnnotatedStory& story,
                            std::span<const TextChain> predicted,
                            std::span<const TextChain> gold) {
  return exact_match_counts(match_text_chains(story, predicted, gold)).value();
}

PrecisionRecall exact_match(std::span<const VisualChain> predicted,
                            std::span<const VisualChain> gold,
                            const MentionMatcher& matcher) {
  return exact_match_counts(match_visual_chains(predicted, gold, matcher)).value();
}

std::vector<std::optional<std::size_t>> map_chains(const ChainMatching& m) {
  std::vector<std::map<std::size_t, std::size_t>> votes(m.pred_chains);
  for (std::size_t i = 0; i < m.pred_chain_of.size(); ++i) {
    if (m.gold_of_pred[i]) ++votes[m.pred_chain_of[i]][m.gold_chain_of[*m.gold_of_pred[i]]];
  }
  std::vector<std::optional<std::size_t>> out(m.pred_chains);
  for (std::size_t pc = 0; pc < m.pred_chains; ++pc) {
    std::size_t best_count = 0;
    bool tie = false;
    for (const auto& [gc, count] : votes[pc]) {
      if (count > best_count) {
        best_count = count;
        out[pc] = gc;
        tie = false;
      } else if (count == best_count) {
        tie = true;
      }
    }
    if (tie) out[pc].reset();
  }
  return out;
}

PRCounts grounding_counts(std::span<const IndexPair> predicted_pairs,
                          std::span<const std::optional<std::size_t>> text_map,
                          std::span<const std::optional<std::size_t>> visual_map,
                          std::span<const IndexPair> gold_pairs) {
  const std::set<IndexPair> gold(gold_pairs.begin(), gold_pairs.end());
  std::set<IndexPair> recovered;
  PRCounts c;
  for (const auto& [t, v] : predicted_pairs) {
    if (t >= text_map.size() || v >= visual_map.size()) {
      throw_parameter("predicted pair index out of range");
    }
    if (!text_map[t] || !visual_map[v]) continue;
    const IndexPair mapped{*text_map[t], *visual_map[v]};
    if (gold.count(mapped)) {
      c.precision.num += 1;
      recovered.insert(mapped);
    }
  }
  c.precision.den = static_cast<double>(predicted_pairs.size());
  c.recall = {static_cast<double>(recovered.size()), static_cast<double>(gold.size())};
  return c;
}

CharacterHead character_head(const AnnotatedStory& story, const MultiModalChain& chain) {
  CharacterHead head;
  if (chain.text && !chain.text->mentions.empty()) {
    const Mention& first = *std::min_element(
        chain.text->mentions.begin(), chain.text->mentions.end(), mention_before);
    head.head_word = head_word(story, first);
  }
  if (chain.visual && !chain.visual->faces.empty()) {
    const FaceInstance& first = *std::min_element(
        chain.visual->faces.begin(), chain.visual->faces.end(), face_before);
    head.head_box = std::make_pair(first.image_index, first.box);
  }
  return head;
}

bool heads_match(const CharacterHead& predicted, const CharacterHead& gold) {
  if (predicted.head_word) return gold.head_word && *gold.head_word == *predicted.head_word;
  if (gold.head_word || !predicted.head_box || !gold.head_box) return false;
  return predicted.head_box->first == gold.head_box->first &&
         box_inside(predicted.head_box->second, gold.head_box->second);
}

std::vector<GoldCharacter> gold_characters(const AnnotatedStory& story) {
  std::vector<GoldCharacter> out;
  if (!story.gold) return out;
  const GoldAnnotation& gold = *story.gold;

  std::map<std::string, const VisualChain*> visual_by_id;
  for (const VisualChain& v : gold.visual_chains) visual_by_id[v.chain_id] = &v;
  std::map<std::string, std::string> aligned;  // text id -> visual id
  std::set<std::string> aligned_visual;
  for (const auto& [t, v] : gold.alignment) {
    aligned[t] = v;
    aligned_visual.insert(v);
  }
  auto stars_of = [&](const std::string& id) -> std::optional<int> {
    auto it = gold.importance.find(id);
    if (it == gold.importance.end()) return std::nullopt;
    return it->second;
  };

  for (const TextChain& t : gold.text_chains) {
    std::vector<const VisualChain*> visual;
    std::optional<int> stars = stars_of(t.chain_id);
    if (auto it = aligned.find(t.chain_id); it != aligned.end()) {
      if (auto v = visual_by_id.find(it->second); v != visual_by_id.end()) {
        visual.push_back(v->second);
        if (!stars) stars = stars_of(it->second);
      }
    }
    GoldCharacter c{make_multimodal(t.chain_id, t, visual), stars, {}};
    c.head = character_head(story, c.chain);
    out.push_back(std::move(c));
  }
  for (const VisualChain& v : gold.visual_chains) {
    if (aligned_visual.count(v.chain_id)) continue;
    GoldCharacter c{make_multimodal(v.chain_id, std::nullopt, {&v}),
                    stars_of(v.chain_id), {}};
    c.head = character_head(story, c.chain);
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const GoldCharacter& a, const GoldCharacter& b) {
    return first_occurrence(a.chain) < first_occurrence(b.chain);
  });
  return out;
}

std::vector<GoldCharacter> gold_ranking(const AnnotatedStory& story) {
  std::vector<GoldCharacter> out = gold_characters(story);
  std::erase_if(out, [](const GoldCharacter& c) { return !c.stars; });
  std::stable_sort(out.begin(), out.end(), [](const GoldCharacter& a, const GoldCharacter& b) {
    return *a.stars > *b.stars;
  });
  return out;
}

std::optional<double> precision_at_k(std::span<const CharacterHead> predicted_ranking,
                                     std::span<const GoldCharacter> gold_ranked,
                                     std::size_t k) {
  if (k == 0) throw_parameter("Precision@k needs k >= 1");
  k = std::min(k, gold_ranked.size());
  if (k == 0) return std::nullopt;
  // Maximum bipartite matching between predicted top-k and gold top-k.
  const std::size_t top = std::min(k, predicted_ranking.size());
  std::vector<std::optional<std::size_t>> pred_of_gold(k);
  std::function<bool(std::size_t, std::vector<bool>&)> augment =
      [&](std::size_t p, std::vector<bool>& seen) {
        for (std::size_t g = 0; g < k; ++g) {
          if (seen[g] || !heads_match(predicted_ranking[p], gold_ranked[g].head)) continue;
          seen[g] = true;
          if (!pred_of_gold[g] || augment(*pred_of_gold[g], seen)) {
            pred_of_gold[g] = p;
            return true;
          }
        }
        return false;
      };
  std::size_t hits = 0;
  for (std::size_t p = 0; p < top; ++p) {
    std::vector<bool> seen(k, false);
    if (augment(p, seen)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw_parameter("pearson inputs differ in length");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> occurrence_correlation(const AnnotatedStory& story,
                                             Modality modality) {
  std::vector<double> counts;
  std::vector<double> stars;
  for (const GoldCharacter& c : gold_characters(story)) {
    if (!c.stars) continue;
    const double t = c.chain.text ? static_cast<double>(c.chain.text->mentions.size()) : 0;
    const double v = c.chain.visual ? static_cast<double>(c.chain.visual->faces.size()) : 0;
    switch (modality) {
      case Modality::kText:
        if (!c.chain.text) continue;
        counts.push_back(t);
        break;
      case Modality::kImage:
        if (!c.chain.visual) continue;
        counts.push_back(v);
        break;
      case Modality::kMulti:
        counts.push_back(t + v);
        break;
    }
    stars.push_back(*c.stars);
  }
  return pearson(counts, stars);
}

}  // namespace charground
